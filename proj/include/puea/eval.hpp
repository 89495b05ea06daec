#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "puea/features.hpp"
#include "puea/oneclass/detector.hpp"

namespace puea::eval {

// Positive class = attack: an example is a true positive when an emulated
// transmission (label -1) is flagged as an outlier.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  [[nodiscard]] std::uint64_t total() const { return tp + fp + tn + fn; }
};

// Fractions in [0, 1]; the *_defined flags record zero-denominator cases,
// for which the value is reported as 0 instead of aborting a grid run.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;
  bool recall_defined = true;
  bool f1_defined = true;
};

[[nodiscard]] ConfusionMatrix confusion(const std::vector<bool>& is_outlier,
                                        std::span<const int> labels);

[[nodiscard]] MetricsReport metrics(const ConfusionMatrix& cm);

struct EvalResult {
  ConfusionMatrix cm;
  MetricsReport metrics;
};

// Scores every example with a calibrated detector and tallies the result.
[[nodiscard]] EvalResult evaluate(const oneclass::FittedDetector& det,
                                  const features::Dataset& ds);

struct CvReport {
  std::size_t k = 0;
  std::vector<MetricsReport> per_fold;
  MetricsReport mean;  // arithmetic mean of the per-fold fields
};

// Shuffles with `seed`, splits into k folds whose sizes differ by at most
// one, and per iteration fits on the label-+1 examples of the other k-1
// folds, calibrates, and evaluates the held-out fold. A training split with
// no +1 examples aborts with DataError.
[[nodiscard]] CvReport kfold_cv(const features::Dataset& ds, std::size_t k,
                                oneclass::DetectorKind kind,
                                const oneclass::DetectorParams& params,
                                std::uint64_t seed);

}  // namespace puea::eval
