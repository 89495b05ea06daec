#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "puea/matrix.hpp"

namespace puea::oneclass {

enum class DetectorKind { IsolationForest, OneClassSvm, Mcd, Lof };

[[nodiscard]] const char* to_string(DetectorKind kind);
[[nodiscard]] DetectorKind detector_kind_from_string(const std::string& name);
inline constexpr DetectorKind kAllKinds[] = {
    DetectorKind::IsolationForest, DetectorKind::OneClassSvm,
    DetectorKind::Mcd, DetectorKind::Lof};

struct IsolationForestParams {
  std::size_t num_trees = 100;
  std::size_t subsample = 256;
};

struct OcsvmParams {
  double nu = 0.05;
  double gamma = 0.0;  // <= 0 selects "scale": 1 / (d * mean feature variance)
  double tolerance = 1e-4;
  std::size_t max_iter = 100000;
};

struct McdParams {
  double support_fraction = 0.0;  // <= 0 selects the default h = (m+d+1)/2
  std::size_t num_initial_subsets = 500;
};

struct LofParams {
  std::size_t k_neighbors = 20;
};

struct DetectorParams {
  double contamination = 0.05;
  std::uint64_t seed = 0;
  IsolationForestParams iforest;
  OcsvmParams ocsvm;
  McdParams mcd;
  LofParams lof;
};

struct Prediction {
  double score = 0.0;  // higher = more anomalous, for every detector kind
  bool is_outlier = false;
};

// --- fitted model state -----------------------------------------------------

struct IfNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double cut = 0.0;
  std::uint32_t size = 0;  // points that reached this node during fitting
  std::int32_t left = -1;
  std::int32_t right = -1;
};

struct IfTree {
  std::vector<IfNode> nodes;  // root at index 0
};

struct IfModel {
  std::vector<IfTree> trees;
  std::size_t subsample = 0;
  double c_norm = 0.0;  // c(subsample), the path-length normalizer
  std::size_t dim = 0;
};

struct OcsvmModel {
  FeatureMatrix support_vectors;
  std::vector<double> dual_coef;  // one per support vector, in (0, 1/(nu*m)]
  double rho = 0.0;
  double gamma = 0.0;
  std::size_t dim = 0;
};

struct McdModel {
  std::vector<double> location;    // d
  std::vector<double> covariance;  // d x d, row-major, SPD
  std::vector<double> cov_inverse; // d x d, row-major
  double logdet = 0.0;
  std::size_t dim = 0;
};

struct LofModel {
  FeatureMatrix points;
  std::size_t k = 0;
  std::vector<double> k_distance;  // per training point
  std::vector<double> lrd;         // local reachability density per point
  std::size_t dim = 0;
};

// Average unsuccessful-search path length of a binary tree over n points;
// normalizes isolation-forest depths. c(1) = 0, c(2) = 1.
[[nodiscard]] double average_path_length(std::size_t n);

// A fitted detector plus (after calibration) its decision threshold.
// Immutable once fitted; scoring is pure and safe to call concurrently.
class FittedDetector {
 public:
  explicit FittedDetector(IfModel model);
  explicit FittedDetector(OcsvmModel model);
  explicit FittedDetector(McdModel model);
  explicit FittedDetector(LofModel model);

  [[nodiscard]] DetectorKind kind() const;
  [[nodiscard]] std::size_t dim() const;

  [[nodiscard]] double score(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> score_rows(const FeatureMatrix& x) const;

  [[nodiscard]] bool calibrated() const { return threshold_.has_value(); }
  [[nodiscard]] double threshold() const;
  void set_threshold(double t) { threshold_ = t; }

  // score > threshold means outlier; throws if not calibrated.
  [[nodiscard]] Prediction predict(std::span<const double> x) const;

  template <class Model>
  [[nodiscard]] const Model& as() const {
    return std::get<Model>(model_);
  }

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  [[nodiscard]] static FittedDetector load(std::istream& in);
  [[nodiscard]] static FittedDetector load(const std::filesystem::path& path);

 private:
  std::variant<IfModel, OcsvmModel, McdModel, LofModel> model_;
  std::optional<double> threshold_;
};

// --- fitting ----------------------------------------------------------------

[[nodiscard]] FittedDetector fit_isolation_forest(
    const FeatureMatrix& train, const IsolationForestParams& params,
    std::uint64_t seed);
[[nodiscard]] FittedDetector fit_ocsvm(const FeatureMatrix& train,
                                       const OcsvmParams& params);
[[nodiscard]] FittedDetector fit_mcd(const FeatureMatrix& train,
                                     const McdParams& params,
                                     std::uint64_t seed);
[[nodiscard]] FittedDetector fit_lof(const FeatureMatrix& train,
                                     const LofParams& params);

[[nodiscard]] FittedDetector fit(DetectorKind kind, const FeatureMatrix& train,
                                 const DetectorParams& params);

// Sets the threshold to the (1 - contamination) empirical quantile of the
// training scores (linear-interpolation rule) and returns it.
double calibrate_threshold(FittedDetector& det,
                           std::span<const double> train_scores,
                           double contamination);

// fit + score training rows + calibrate, in one step.
[[nodiscard]] FittedDetector fit_calibrated(DetectorKind kind,
                                            const FeatureMatrix& train,
                                            const DetectorParams& params);

}  // namespace puea::oneclass
