#include "puea/linalg.hpp"

#include <cmath>

namespace puea::linalg {

bool cholesky(std::span<const double> a, std::size_t d,
              std::vector<double>& l) {
  l.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * d + k] * l[j * d + k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        l[i * d + i] = std::sqrt(s);
      } else {
        l[i * d + j] = s / l[j * d + j];
      }
    }
  }
  return true;
}

double logdet_from_cholesky(std::span<const double> l, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += std::log(l[i * d + i]);
  return 2.0 * s;
}

std::vector<double> spd_inverse_from_cholesky(std::span<const double> l,
                                              std::size_t d) {
  std::vector<double> inv(d * d, 0.0);
  std::vector<double> y(d), x(d);
  for (std::size_t col = 0; col < d; ++col) {
    // Solve L y = e_col, then L^T x = y.
    for (std::size_t i = 0; i < d; ++i) {
      double s = (i == col) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l[i * d + k] * y[k];
      y[i] = s / l[i * d + i];
    }
    for (std::size_t ii = d; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < d; ++k) s -= l[k * d + ii] * x[k];
      x[ii] = s / l[ii * d + ii];
    }
    for (std::size_t i = 0; i < d; ++i) inv[i * d + col] = x[i];
  }
  // Symmetrize to kill the last-ulp asymmetry from the two solves.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (inv[i * d + j] + inv[j * d + i]);
      inv[i * d + j] = v;
      inv[j * d + i] = v;
    }
  }
  return inv;
}

void mean_rows(const FeatureMatrix& x, std::span<const std::size_t> idx,
               double* mu) {
  const std::size_t d = x.cols();
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (std::size_t j = 0; j < d; ++j) {
    const double* c = x.col(j);
    double s = 0.0;
    for (const std::size_t i : idx) s += c[i];
    mu[j] = s * inv;
  }
}

void covariance_rows(const FeatureMatrix& x, std::span<const std::size_t> idx,
                     const double* mu, double* cov) {
  const std::size_t d = x.cols();
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (std::size_t j = 0; j < d; ++j) {
    const double* cj = x.col(j);
    for (std::size_t l = j; l < d; ++l) {
      const double* cl = x.col(l);
      double s = 0.0;
      for (const std::size_t i : idx) s += (cj[i] - mu[j]) * (cl[i] - mu[l]);
      cov[j * d + l] = s * inv;
      cov[l * d + j] = cov[j * d + l];
    }
  }
}

}  // namespace puea::linalg
