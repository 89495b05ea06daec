#include "puea/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace puea::kernels {

namespace detail {

double sum_scalar(const double* x, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  double s = (a0 + a1) + (a2 + a3);
  for (std::size_t i = n4; i < n; ++i) s += x[i];
  return s;
}

double sum_sq_diff_scalar(const double* x, std::size_t n, double center) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const double d0 = x[i] - center;
    const double d1 = x[i + 1] - center;
    const double d2 = x[i + 2] - center;
    const double d3 = x[i + 3] - center;
    a0 += d0 * d0;
    a1 += d1 * d1;
    a2 += d2 * d2;
    a3 += d3 * d3;
  }
  double s = (a0 + a1) + (a2 + a3);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = x[i] - center;
    s += d * d;
  }
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void squared_dists_scalar(const FeatureMatrix& pts, const double* q,
                          double* out) {
  const std::size_t m = pts.rows();
  const std::size_t d = pts.cols();
  std::memset(out, 0, m * sizeof(double));
  for (std::size_t j = 0; j < d; ++j) {
    const double* c = pts.col(j);
    const double qj = q[j];
    for (std::size_t i = 0; i < m; ++i) {
      const double diff = c[i] - qj;
      out[i] += diff * diff;
    }
  }
}

void quadform_scalar(const FeatureMatrix& pts, const double* center,
                     const double* m, double* out) {
  const std::size_t rows = pts.rows();
  const std::size_t d = pts.cols();
  std::memset(out, 0, rows * sizeof(double));
  for (std::size_t j = 0; j < d; ++j) {
    const double* cj = pts.col(j);
    const double muj = center[j];
    for (std::size_t l = 0; l < d; ++l) {
      const double* cl = pts.col(l);
      const double mul = center[l];
      const double coef = m[j * d + l];
      for (std::size_t i = 0; i < rows; ++i) {
        out[i] += ((cj[i] - muj) * coef) * (cl[i] - mul);
      }
    }
  }
}

}  // namespace detail

namespace {

struct Dispatch {
  double (*sum)(const double*, std::size_t);
  double (*sum_sq_diff)(const double*, std::size_t, double);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*squared_dists)(const FeatureMatrix&, const double*, double*);
  void (*quadform)(const FeatureMatrix&, const double*, const double*,
                   double*);
};

constexpr Dispatch kScalar{detail::sum_scalar, detail::sum_sq_diff_scalar,
                           detail::axpy_scalar, detail::squared_dists_scalar,
                           detail::quadform_scalar};

#if defined(PUEA_HAVE_AVX2_TU)
constexpr Dispatch kAvx2{detail::sum_avx2, detail::sum_sq_diff_avx2,
                         detail::axpy_avx2, detail::squared_dists_avx2,
                         detail::quadform_avx2};
#endif

bool cpu_has_avx2() {
#if defined(PUEA_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend pick_default() {
  if (const char* env = std::getenv("PUEA_BACKEND")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
    // Unknown or unavailable values fall through to auto-detection.
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

struct State {
  Backend backend;
  const Dispatch* table;
};

State make_state(Backend b) {
#if defined(PUEA_HAVE_AVX2_TU)
  if (b == Backend::Avx2) return {b, &kAvx2};
#endif
  return {Backend::Scalar, &kScalar};
}

State g_state = make_state(pick_default());

}  // namespace

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool backend_available(Backend b) {
  return b == Backend::Scalar || cpu_has_avx2();
}

Backend active_backend() { return g_state.backend; }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument(std::string("kernel backend unavailable: ") +
                                backend_name(b));
  }
  g_state = make_state(b);
}

double sum(const double* x, std::size_t n) { return g_state.table->sum(x, n); }

double sum_sq_diff(const double* x, std::size_t n, double center) {
  return g_state.table->sum_sq_diff(x, n, center);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  g_state.table->axpy(a, x, y, n);
}

void squared_dists(const FeatureMatrix& pts, const double* q, double* out) {
  g_state.table->squared_dists(pts, q, out);
}

void quadform(const FeatureMatrix& pts, const double* center, const double* m,
              double* out) {
  g_state.table->quadform(pts, center, m, out);
}

}  // namespace puea::kernels
