#include "puea/eval.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "puea/errors.hpp"
#include "puea/rng.hpp"

namespace puea::eval {

ConfusionMatrix confusion(const std::vector<bool>& is_outlier,
                          std::span<const int> labels) {
  if (is_outlier.size() != labels.size())
    throw std::invalid_argument("predictions and labels differ in length");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1 && labels[i] != -1)
      throw std::invalid_argument("labels must be +1 or -1");
    const bool attack = labels[i] == -1;
    if (attack) {
      (is_outlier[i] ? cm.tp : cm.fn) += 1;
    } else {
      (is_outlier[i] ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  const std::uint64_t n = cm.total();
  if (n == 0) throw std::invalid_argument("empty confusion matrix");

  MetricsReport r;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n);
  if (cm.tp + cm.fp > 0) {
    r.precision =
        static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  } else {
    r.precision_defined = false;
  }
  if (cm.tp + cm.fn > 0) {
    r.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  } else {
    r.recall_defined = false;
  }
  if (r.precision_defined && r.recall_defined &&
      r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.f1_defined = false;
  }
  return r;
}

EvalResult evaluate(const oneclass::FittedDetector& det,
                    const features::Dataset& ds) {
  if (ds.empty()) throw DataError("cannot evaluate on an empty dataset");
  std::vector<bool> flagged(ds.size());
  std::vector<int> labels(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto x = ds[i].features.as_array();
    flagged[i] = det.predict(x).is_outlier;
    labels[i] = ds[i].label;
  }
  const ConfusionMatrix cm = confusion(flagged, labels);
  return {cm, metrics(cm)};
}

CvReport kfold_cv(const features::Dataset& ds, std::size_t k,
                  oneclass::DetectorKind kind,
                  const oneclass::DetectorParams& params, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (k < 2 || k > n)
    throw std::invalid_argument("fold count must lie in [2, dataset size]");
  {
    bool has_pos = false, has_neg = false;
    for (const auto& e : ds.examples()) {
      (e.label == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg)
      throw DataError("cross-validation needs both labels in the dataset");
  }

  // Seeded Fisher-Yates shuffle, then contiguous folds; the first n % k
  // folds take one extra example.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng::SplitMix64 g(rng::substream(seed, 0xF01Du));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j = i + rng::below(g, n - i);
    std::swap(order[i], order[j]);
  }

  CvReport report;
  report.k = k;
  report.per_fold.reserve(k);

  std::size_t fold_start = 0;
  for (std::size_t fold = 0; fold < k; ++fold) {
    const std::size_t fold_size = n / k + (fold < n % k ? 1 : 0);
    const std::size_t fold_end = fold_start + fold_size;

    features::Dataset train_pos, test;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const auto& e = ds[order[pos]];
      if (pos >= fold_start && pos < fold_end) {
        test.append(e);
      } else if (e.label == 1) {
        train_pos.append(e);
      }
    }
    if (train_pos.empty()) {
      throw DataError("fold " + std::to_string(fold) +
                      ": training split has no PU (+1) examples");
    }

    oneclass::DetectorParams fold_params = params;
    fold_params.seed = rng::substream(params.seed, 0xCF1Du, fold);
    const oneclass::FittedDetector det =
        oneclass::fit_calibrated(kind, train_pos.feature_matrix(), fold_params);
    report.per_fold.push_back(evaluate(det, test).metrics);

    fold_start = fold_end;
  }

  MetricsReport& mean = report.mean;
  for (const auto& f : report.per_fold) {
    mean.accuracy += f.accuracy;
    mean.precision += f.precision;
    mean.recall += f.recall;
    mean.f1 += f.f1;
    mean.precision_defined = mean.precision_defined && f.precision_defined;
    mean.recall_defined = mean.recall_defined && f.recall_defined;
    mean.f1_defined = mean.f1_defined && f.f1_defined;
  }
  const double kd = static_cast<double>(k);
  mean.accuracy /= kd;
  mean.precision /= kd;
  mean.recall /= kd;
  mean.f1 /= kd;
  return report;
}

}  // namespace puea::eval
