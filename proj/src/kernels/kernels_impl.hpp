#pragma once

#include <cstddef>

#include "puea/matrix.hpp"

// Backend entry points. The scalar functions define the reference results;
// the AVX2 functions must match them bit for bit.

namespace puea::kernels::detail {

double sum_scalar(const double* x, std::size_t n);
double sum_sq_diff_scalar(const double* x, std::size_t n, double center);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void squared_dists_scalar(const FeatureMatrix& pts, const double* q,
                          double* out);
void quadform_scalar(const FeatureMatrix& pts, const double* center,
                     const double* m, double* out);

#if defined(PUEA_HAVE_AVX2_TU)
double sum_avx2(const double* x, std::size_t n);
double sum_sq_diff_avx2(const double* x, std::size_t n, double center);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void squared_dists_avx2(const FeatureMatrix& pts, const double* q,
                        double* out);
void quadform_avx2(const FeatureMatrix& pts, const double* center,
                   const double* m, double* out);
#endif

}  // namespace puea::kernels::detail
