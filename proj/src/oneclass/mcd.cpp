#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "puea/errors.hpp"
#include "puea/kernels.hpp"
#include "puea/linalg.hpp"
#include "puea/oneclass/detector.hpp"
#include "puea/rng.hpp"

namespace puea::oneclass {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Candidate {
  std::vector<double> mu;
  std::vector<double> cov;
  std::vector<double> chol;
  double logdet = kNegInf;
  std::vector<std::size_t> support;  // current h-subset, ascending
  std::size_t origin = 0;            // initial-subset index, for tie-breaks
};

// Estimate location/scatter from the given rows; false if not PD.
bool estimate(const FeatureMatrix& x, std::span<const std::size_t> rows,
              Candidate& c) {
  const std::size_t d = x.cols();
  c.mu.resize(d);
  c.cov.resize(d * d);
  linalg::mean_rows(x, rows, c.mu.data());
  linalg::covariance_rows(x, rows, c.mu.data(), c.cov.data());
  if (!linalg::cholesky(c.cov, d, c.chol)) {
    c.logdet = kNegInf;
    return false;
  }
  c.logdet = linalg::logdet_from_cholesky(c.chol, d);
  return true;
}

// The h rows with smallest Mahalanobis distance under the candidate's
// current estimate, ascending by row index.
std::vector<std::size_t> select_h(const FeatureMatrix& x, const Candidate& c,
                                  std::size_t h, std::vector<double>& buf) {
  const std::size_t m = x.rows();
  const std::size_t d = x.cols();
  const std::vector<double> inv =
      linalg::spd_inverse_from_cholesky(c.chol, d);
  buf.resize(m);
  kernels::quadform(x, c.mu.data(), inv.data(), buf.data());

  std::vector<std::pair<double, std::size_t>> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = {buf[i], i};
  std::nth_element(order.begin(), order.begin() + (h - 1), order.end());

  std::vector<std::size_t> support(h);
  for (std::size_t i = 0; i < h; ++i) support[i] = order[i].second;
  std::sort(support.begin(), support.end());
  return support;
}

// One C-step: reselect the h closest rows and re-estimate. Returns false
// once the support is a fixed point or the estimate degenerates.
bool c_step(const FeatureMatrix& x, Candidate& c, std::size_t h,
            std::vector<double>& buf) {
  std::vector<std::size_t> next = select_h(x, c, h, buf);
  if (next == c.support) return false;
  c.support = std::move(next);
  return estimate(x, c.support, c);
}

}  // namespace

FittedDetector fit_mcd(const FeatureMatrix& train, const McdParams& params,
                       std::uint64_t seed) {
  const std::size_t m = train.rows();
  const std::size_t d = train.cols();
  if (m <= 2 * (d + 1)) {
    throw DataError("MCD needs more than " + std::to_string(2 * (d + 1)) +
                    " rows for dimension " + std::to_string(d));
  }
  if (params.num_initial_subsets == 0)
    throw std::invalid_argument("num_initial_subsets must be positive");

  std::size_t h = (m + d + 1) / 2;
  if (params.support_fraction > 0.0) {
    if (params.support_fraction > 1.0)
      throw std::invalid_argument("support_fraction must be in (0, 1]");
    h = static_cast<std::size_t>(params.support_fraction *
                                 static_cast<double>(m));
    h = std::clamp<std::size_t>(h, d + 1, m);
  }

  std::vector<double> buf;
  std::vector<Candidate> candidates;

  if (h == m) {
    Candidate full;
    full.support.resize(m);
    std::iota(full.support.begin(), full.support.end(), std::size_t{0});
    estimate(train, full.support, full);
    candidates.push_back(std::move(full));
  } else {
    candidates.reserve(params.num_initial_subsets);
    for (std::size_t s = 0; s < params.num_initial_subsets; ++s) {
      rng::SplitMix64 stream(rng::substream(seed, 0x3CDAu, s));
      std::vector<std::size_t> idx(m);
      std::iota(idx.begin(), idx.end(), std::size_t{0});

      Candidate c;
      c.origin = s;
      // Start from d+1 random rows; grow the subset while its scatter is
      // singular.
      std::size_t count = 0;
      std::vector<std::size_t> subset;
      while (count < m) {
        const std::size_t j = count + rng::below(stream, m - count);
        std::swap(idx[count], idx[j]);
        subset.push_back(idx[count]);
        ++count;
        if (subset.size() < d + 1) continue;
        std::vector<std::size_t> sorted = subset;
        std::sort(sorted.begin(), sorted.end());
        c.support = sorted;
        if (estimate(train, c.support, c)) break;
      }
      if (c.logdet == kNegInf) continue;  // whole data set is singular

      for (int step = 0; step < 2; ++step) {
        if (!c_step(train, c, h, buf)) break;
      }
      candidates.push_back(std::move(c));
    }
    if (candidates.empty())
      throw DataError("MCD could not find a non-singular initial estimate");

    // Refine the 10 most promising candidates to convergence.
    const std::size_t keep = std::min<std::size_t>(10, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.logdet != b.logdet) return a.logdet < b.logdet;
                        return a.origin < b.origin;
                      });
    candidates.resize(keep);
    for (auto& c : candidates) {
      for (int step = 0; step < 200; ++step) {
        if (!c_step(train, c, h, buf)) break;
      }
    }
  }

  const auto best = std::min_element(
      candidates.begin(), candidates.end(),
      [](const Candidate& a, const Candidate& b) {
        if (a.logdet != b.logdet) return a.logdet < b.logdet;
        return a.origin < b.origin;
      });

  // Scale-free degeneracy guard: compare det(cov) against the product of the
  // per-feature variances (their ratio is a generalized correlation
  // determinant in [0, 1]).
  double log_var_product = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double* c = train.col(j);
    const double mean = kernels::sum(c, m) / static_cast<double>(m);
    const double var =
        kernels::sum_sq_diff(c, m, mean) / static_cast<double>(m);
    log_var_product += std::log(var);
  }
  if (!std::isfinite(best->logdet) || !std::isfinite(log_var_product) ||
      best->logdet < log_var_product + std::log(1e-12)) {
    throw DataError(
        "MCD covariance is singular: features are degenerate "
        "(constant or linearly dependent)");
  }

  McdModel model;
  model.dim = d;
  model.location = best->mu;
  model.covariance = best->cov;
  model.cov_inverse = linalg::spd_inverse_from_cholesky(best->chol, d);
  model.logdet = best->logdet;
  return FittedDetector(std::move(model));
}

}  // namespace puea::oneclass
