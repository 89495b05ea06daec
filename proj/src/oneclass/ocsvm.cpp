#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "puea/errors.hpp"
#include "puea/kernels.hpp"
#include "puea/oneclass/detector.hpp"

namespace puea::oneclass {

namespace {

// LRU cache of RBF kernel rows. Rows are recomputed on miss from the same
// inputs, so caching never changes results, only cost.
class KernelRowCache {
 public:
  KernelRowCache(const FeatureMatrix& x, double gamma,
                 std::size_t budget_bytes)
      : x_(x), gamma_(gamma) {
    const std::size_t row_bytes = x.rows() * sizeof(double);
    max_rows_ = std::max<std::size_t>(2, budget_bytes / std::max<std::size_t>(
                                             row_bytes, 1));
  }

  const double* row(std::size_t i) {
    if (auto it = map_.find(i); it != map_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.lru_it);
      return it->second.values.data();
    }
    if (map_.size() >= max_rows_) {
      map_.erase(lru_.back());
      lru_.pop_back();
    }
    Entry entry;
    entry.values.resize(x_.rows());
    compute_row(i, entry.values);
    lru_.push_front(i);
    entry.lru_it = lru_.begin();
    auto [it, inserted] = map_.emplace(i, std::move(entry));
    return it->second.values.data();
  }

 private:
  struct Entry {
    std::vector<double> values;
    std::list<std::size_t>::iterator lru_it;
  };

  void compute_row(std::size_t i, std::vector<double>& out) {
    const std::size_t d = x_.cols();
    std::vector<double> q(d);
    for (std::size_t j = 0; j < d; ++j) q[j] = x_(i, j);
    kernels::squared_dists(x_, q.data(), out.data());
    for (double& v : out) v = std::exp(-gamma_ * v);
  }

  const FeatureMatrix& x_;
  double gamma_;
  std::size_t max_rows_;
  std::unordered_map<std::size_t, Entry> map_;
  std::list<std::size_t> lru_;
};

constexpr std::size_t kCacheBudgetBytes = 256u << 20;

}  // namespace

FittedDetector fit_ocsvm(const FeatureMatrix& train,
                         const OcsvmParams& params) {
  const std::size_t m = train.rows();
  const std::size_t d = train.cols();
  if (m < 2) throw DataError("one-class SVM needs at least 2 rows");
  if (!(params.nu > 0.0 && params.nu <= 1.0))
    throw std::invalid_argument("nu must lie in (0, 1]");
  if (!(params.tolerance > 0.0))
    throw std::invalid_argument("tolerance must be positive");

  double gamma = params.gamma;
  if (gamma <= 0.0) {
    // "scale": 1 / (d * mean per-feature variance).
    double var_sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double* c = train.col(j);
      const double mean = kernels::sum(c, m) / static_cast<double>(m);
      var_sum += kernels::sum_sq_diff(c, m, mean) / static_cast<double>(m);
    }
    const double mean_var = var_sum / static_cast<double>(d);
    if (!(mean_var > 0.0))
      throw DataError("cannot derive gamma: all features are constant");
    gamma = 1.0 / (static_cast<double>(d) * mean_var);
  }

  // nu-one-class dual: min 1/2 a^T K a, 0 <= a_i <= C, sum a = 1.
  const double c_bound = 1.0 / (params.nu * static_cast<double>(m));
  std::vector<double> alpha(m, 0.0);
  const auto n_full = std::min<std::size_t>(
      static_cast<std::size_t>(params.nu * static_cast<double>(m)), m);
  for (std::size_t i = 0; i < n_full; ++i) alpha[i] = c_bound;
  const double remainder = 1.0 - static_cast<double>(n_full) * c_bound;
  if (n_full < m && remainder > 0.0)
    alpha[n_full] = std::min(remainder, c_bound);

  KernelRowCache cache(train, gamma, kCacheBudgetBytes);

  // Gradient of the objective: G = K alpha.
  std::vector<double> grad(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (alpha[i] > 0.0) kernels::axpy(alpha[i], cache.row(i), grad.data(), m);
  }

  double gap = 0.0;
  bool converged = false;
  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    // Maximal-violating pair: i with the smallest gradient among rows that
    // can grow, j with the largest among rows that can shrink. Scanning in
    // index order makes ties resolve to the lowest index.
    std::size_t best_i = m, best_j = m;
    double min_up = std::numeric_limits<double>::infinity();
    double max_low = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m; ++t) {
      if (alpha[t] < c_bound && grad[t] < min_up) {
        min_up = grad[t];
        best_i = t;
      }
      if (alpha[t] > 0.0 && grad[t] > max_low) {
        max_low = grad[t];
        best_j = t;
      }
    }
    if (best_i == m || best_j == m) {
      converged = true;  // box is fully saturated (nu == 1)
      gap = 0.0;
      break;
    }
    gap = max_low - min_up;
    if (gap <= params.tolerance) {
      converged = true;
      break;
    }

    const double* row_i = cache.row(best_i);
    const double* row_j = cache.row(best_j);
    const double q = row_i[best_i] + row_j[best_j] - 2.0 * row_i[best_j];
    const double room_i = c_bound - alpha[best_i];
    const double room_j = alpha[best_j];
    double step = std::min(room_i, room_j);
    if (q > 1e-12) step = std::min(step, gap / q);

    alpha[best_i] += step;
    alpha[best_j] -= step;
    // Land exactly on the box when a bound was the binding constraint, so
    // bound membership tests stay exact.
    if (step == room_i) alpha[best_i] = c_bound;
    if (step == room_j) alpha[best_j] = 0.0;

    kernels::axpy(step, row_i, grad.data(), m);
    kernels::axpy(-step, row_j, grad.data(), m);
  }

  if (!converged) {
    throw DataError("one-class SVM did not converge within " +
                    std::to_string(params.max_iter) +
                    " iterations (KKT residual " + std::to_string(gap) + ")");
  }

  // rho from the free support vectors; midpoint of the active bounds if
  // there are none.
  double rho;
  {
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (alpha[i] > 0.0 && alpha[i] < c_bound) {
        free_sum += grad[i];
        ++free_count;
      } else if (alpha[i] == 0.0) {
        upper = std::min(upper, grad[i]);
      } else {
        lower = std::max(lower, grad[i]);
      }
    }
    if (free_count > 0) {
      rho = free_sum / static_cast<double>(free_count);
    } else if (std::isfinite(upper) && std::isfinite(lower)) {
      rho = 0.5 * (upper + lower);
    } else {
      rho = std::isfinite(lower) ? lower : upper;
    }
  }

  OcsvmModel model;
  model.gamma = gamma;
  model.rho = rho;
  model.dim = d;
  std::vector<std::size_t> sv_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (alpha[i] > 0.0) sv_rows.push_back(i);
  }
  model.support_vectors = train.select_rows(sv_rows);
  model.dual_coef.reserve(sv_rows.size());
  for (const std::size_t i : sv_rows) model.dual_coef.push_back(alpha[i]);
  return FittedDetector(std::move(model));
}

}  // namespace puea::oneclass
