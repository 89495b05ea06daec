#pragma once

#include <cstddef>

#include "puea/matrix.hpp"

namespace puea::kernels {

// Data-parallel inner loops behind the detectors and the feature pipeline.
// Two backends: a scalar reference and an AVX2 variant selected at runtime
// on x86-64. Both produce bit-identical results: reductions accumulate in
// four independent lanes combined as (a0+a1)+(a2+a3), per-point loops keep
// the same operation order in every lane, and the build disables FP
// contraction. The equivalence suite asserts exact equality.
//
// The environment variable PUEA_BACKEND=scalar|avx2 overrides the choice
// made at first use.

enum class Backend { Scalar, Avx2 };

[[nodiscard]] const char* backend_name(Backend b);
[[nodiscard]] bool backend_available(Backend b);
[[nodiscard]] Backend active_backend();

// Throws std::invalid_argument if the backend is not available on this host.
// Intended for tests and benchmarks; not thread-safe against concurrent
// kernel calls.
void set_backend(Backend b);

// Striped sum of x[0..n).
[[nodiscard]] double sum(const double* x, std::size_t n);

// Striped sum of (x[i] - center)^2.
[[nodiscard]] double sum_sq_diff(const double* x, std::size_t n,
                                 double center);

// y[i] += a * x[i].
void axpy(double a, const double* x, double* y, std::size_t n);

// out[i] = squared Euclidean distance from row i of pts to query q
// (q has pts.cols() entries).
void squared_dists(const FeatureMatrix& pts, const double* q, double* out);

// out[i] = (row_i - center)^T M (row_i - center), with M a row-major
// pts.cols() x pts.cols() matrix. Terms accumulate in row-major order of M.
void quadform(const FeatureMatrix& pts, const double* center, const double* m,
              double* out);

}  // namespace puea::kernels
