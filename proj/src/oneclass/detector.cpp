#include "puea/oneclass/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "puea/errors.hpp"
#include "puea/features.hpp"
#include "puea/kernels.hpp"

namespace puea::oneclass {

namespace {

constexpr double kEulerMascheroni = 0.5772156649015329;

struct ScoreVisitor {
  std::span<const double> x;

  double operator()(const IfModel& m) const;
  double operator()(const OcsvmModel& m) const;
  double operator()(const McdModel& m) const;
  double operator()(const LofModel& m) const;
};

double if_path_length(const IfTree& tree, std::span<const double> x) {
  std::int32_t idx = 0;
  double depth = 0.0;
  for (;;) {
    const IfNode& node = tree.nodes[idx];
    if (node.feature < 0) return depth + average_path_length(node.size);
    idx = x[node.feature] < node.cut ? node.left : node.right;
    depth += 1.0;
  }
}

double ScoreVisitor::operator()(const IfModel& m) const {
  double total = 0.0;
  for (const auto& tree : m.trees) total += if_path_length(tree, x);
  const double mean_depth = total / static_cast<double>(m.trees.size());
  return std::exp2(-mean_depth / m.c_norm);
}

double ScoreVisitor::operator()(const OcsvmModel& m) const {
  const std::size_t n = m.support_vectors.rows();
  std::vector<double> d2(n);
  kernels::squared_dists(m.support_vectors, x.data(), d2.data());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += m.dual_coef[i] * std::exp(-m.gamma * d2[i]);
  return m.rho - s;
}

double ScoreVisitor::operator()(const McdModel& m) const {
  const std::size_t d = m.dim;
  double q = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double dj = x[j] - m.location[j];
    for (std::size_t l = 0; l < d; ++l) {
      q += ((dj * m.cov_inverse[j * d + l]) * (x[l] - m.location[l]));
    }
  }
  return std::sqrt(std::max(q, 0.0));
}

constexpr double kLrdCap = 1e12;

double ScoreVisitor::operator()(const LofModel& m) const {
  const std::size_t n = m.points.rows();
  const std::size_t k = m.k;
  std::vector<double> d2(n);
  kernels::squared_dists(m.points, x.data(), d2.data());

  // k nearest training points, ties broken by lowest index.
  std::vector<std::pair<double, std::size_t>> heap;  // max-heap on (d2, idx)
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::pair<double, std::size_t> cand{d2[i], i};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort(heap.begin(), heap.end());

  double reach_sum = 0.0;
  for (const auto& [dist2, idx] : heap) {
    reach_sum += std::max(m.k_distance[idx], std::sqrt(dist2));
  }
  const double mean_reach = reach_sum / static_cast<double>(k);
  const double lrd_x =
      mean_reach > 0.0 ? std::min(1.0 / mean_reach, kLrdCap) : kLrdCap;

  double ratio_sum = 0.0;
  for (const auto& [dist2, idx] : heap) ratio_sum += m.lrd[idx] / lrd_x;
  return ratio_sum / static_cast<double>(k);
}

}  // namespace

const char* to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::IsolationForest: return "if";
    case DetectorKind::OneClassSvm: return "svm";
    case DetectorKind::Mcd: return "mcd";
    case DetectorKind::Lof: return "lof";
  }
  return "?";
}

DetectorKind detector_kind_from_string(const std::string& name) {
  if (name == "if" || name == "isolation_forest") {
    return DetectorKind::IsolationForest;
  }
  if (name == "svm" || name == "ocsvm") return DetectorKind::OneClassSvm;
  if (name == "mcd") return DetectorKind::Mcd;
  if (name == "lof") return DetectorKind::Lof;
  throw ConfigError("unknown detector '" + name +
                    "' (expected if, svm, mcd or lof)");
}

double average_path_length(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double nd = static_cast<double>(n);
  return 2.0 * (std::log(nd - 1.0) + kEulerMascheroni) -
         2.0 * (nd - 1.0) / nd;
}

FittedDetector::FittedDetector(IfModel model) : model_(std::move(model)) {}
FittedDetector::FittedDetector(OcsvmModel model) : model_(std::move(model)) {}
FittedDetector::FittedDetector(McdModel model) : model_(std::move(model)) {}
FittedDetector::FittedDetector(LofModel model) : model_(std::move(model)) {}

DetectorKind FittedDetector::kind() const {
  switch (model_.index()) {
    case 0: return DetectorKind::IsolationForest;
    case 1: return DetectorKind::OneClassSvm;
    case 2: return DetectorKind::Mcd;
    default: return DetectorKind::Lof;
  }
}

std::size_t FittedDetector::dim() const {
  return std::visit([](const auto& m) { return m.dim; }, model_);
}

double FittedDetector::score(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw DataError("feature dimension mismatch: model expects " +
                    std::to_string(dim()) + ", got " +
                    std::to_string(x.size()));
  }
  return std::visit(ScoreVisitor{x}, model_);
}

std::vector<double> FittedDetector::score_rows(const FeatureMatrix& x) const {
  std::vector<double> out(x.rows());
  std::vector<double> row(x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) row[j] = x(i, j);
    out[i] = score(row);
  }
  return out;
}

double FittedDetector::threshold() const {
  if (!threshold_) throw DataError("detector has not been calibrated");
  return *threshold_;
}

Prediction FittedDetector::predict(std::span<const double> x) const {
  const double t = threshold();
  const double s = score(x);
  return {s, s > t};
}

FittedDetector fit(DetectorKind kind, const FeatureMatrix& train,
                   const DetectorParams& params) {
  switch (kind) {
    case DetectorKind::IsolationForest:
      return fit_isolation_forest(train, params.iforest, params.seed);
    case DetectorKind::OneClassSvm:
      return fit_ocsvm(train, params.ocsvm);
    case DetectorKind::Mcd:
      return fit_mcd(train, params.mcd, params.seed);
    case DetectorKind::Lof:
      return fit_lof(train, params.lof);
  }
  throw std::invalid_argument("bad detector kind");
}

double calibrate_threshold(FittedDetector& det,
                           std::span<const double> train_scores,
                           double contamination) {
  if (train_scores.empty())
    throw std::invalid_argument("cannot calibrate on zero scores");
  if (!(contamination > 0.0 && contamination < 0.5))
    throw std::invalid_argument("contamination must lie in (0, 0.5)");
  const double t = features::quantile(train_scores, 1.0 - contamination);
  det.set_threshold(t);
  return t;
}

FittedDetector fit_calibrated(DetectorKind kind, const FeatureMatrix& train,
                              const DetectorParams& params) {
  FittedDetector det = fit(kind, train, params);
  const std::vector<double> scores = det.score_rows(train);
  calibrate_threshold(det, scores, params.contamination);
  return det;
}

}  // namespace puea::oneclass
