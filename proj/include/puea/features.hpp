#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "puea/matrix.hpp"
#include "puea/scenario.hpp"

namespace puea::features {

inline constexpr std::size_t kFeatureDim = 5;

// Per-slot summary of the n reported energies, all in dB (variance in dB^2).
struct FeatureVector {
  double mean = 0.0;
  double variance = 0.0;
  double median = 0.0;
  double upper_quartile = 0.0;
  double lower_quartile = 0.0;

  [[nodiscard]] std::array<double, kFeatureDim> as_array() const {
    return {mean, variance, median, upper_quartile, lower_quartile};
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Label +1 = genuine PU transmission, -1 = emulated one.
struct Example {
  std::uint64_t slot_id = 0;
  FeatureVector features;
  int label = 1;

  friend bool operator==(const Example&, const Example&) = default;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Example> examples)
      : examples_(std::move(examples)) {}

  [[nodiscard]] std::size_t size() const { return examples_.size(); }
  [[nodiscard]] bool empty() const { return examples_.empty(); }
  [[nodiscard]] const std::vector<Example>& examples() const {
    return examples_;
  }
  const Example& operator[](std::size_t i) const { return examples_[i]; }

  void append(const Example& e) { examples_.push_back(e); }
  void append(const Dataset& other) {
    examples_.insert(examples_.end(), other.examples_.begin(),
                     other.examples_.end());
  }

  // Feature rows in example order.
  [[nodiscard]] FeatureMatrix feature_matrix() const;
  [[nodiscard]] std::vector<int> labels() const;
  [[nodiscard]] bool all_positive() const;

  // Examples with label +1, preserving order.
  [[nodiscard]] Dataset positives() const;
  [[nodiscard]] Dataset take(std::size_t count) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Example> examples_;
};

// Empirical quantile with linear interpolation at position (n-1)*q over the
// sorted values. Throws on empty input or q outside [0, 1].
[[nodiscard]] double quantile(std::span<const double> values, double q);

// Mean, population variance (divide by n), median and quartiles of one
// slot's energies. Requires at least 2 values.
[[nodiscard]] FeatureVector summarize_slot(const scenario::SlotReport& report);

// One example per report, in slot order, all carrying `label`. All reports
// must have the same number of energies.
[[nodiscard]] Dataset build_dataset(
    std::span<const scenario::SlotReport> reports, int label);

// CSV persistence. Header: slot_id,mean_db,var_db,median_db,uq_db,lq_db,label
// Numbers are written in shortest round-trip form (UTF-8, LF line endings),
// so read(write(ds)) == ds exactly. Malformed rows are reported with their
// line number.
void write_csv(const Dataset& ds, const std::filesystem::path& path);
[[nodiscard]] Dataset read_csv(const std::filesystem::path& path);

}  // namespace puea::features
