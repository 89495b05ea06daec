#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "puea/oneclass/detector.hpp"
#include "puea/scenario.hpp"

namespace puea {

// Everything a full experiment run needs. Loadable from a flat
// `key = value` file (see configs/default.conf) with CLI-flag overrides.
struct RunConfig {
  std::size_t n_sus = 40;
  std::size_t n_slots = 10000;
  double region = 100.0;
  double alpha = 4.0;
  double min_distance = 0.5;
  double pt_pu = 10.0;
  double sigma2_pu = 8.0;
  double pt_attacker = 10.0;
  scenario::Position outside_pu{150.0, 150.0};

  std::vector<double> sigma2_attacker = {4.0, 8.0, 12.0};
  std::vector<double> d_list = {5.0, 10.0, 20.0};
  std::vector<scenario::Placement> placements = {
      scenario::Placement::InsideRegion, scenario::Placement::OutsideRegion};
  std::vector<int> puea_pct = {10, 20};
  std::vector<std::size_t> k_list = {2, 5, 10, 20};

  oneclass::DetectorParams detector;

  std::uint64_t seed = 12;
  std::filesystem::path out_dir = "out";
  std::size_t jobs = 0;  // 0 = one per hardware thread

  // Throws ConfigError naming the offending field.
  void validate() const;

  [[nodiscard]] scenario::ScenarioParams scenario_params(
      double sigma2_att) const;
  [[nodiscard]] scenario::ChannelParams channel() const {
    return {alpha, min_distance};
  }
};

[[nodiscard]] const char* to_string(scenario::Placement p);
[[nodiscard]] scenario::Placement placement_from_string(const std::string& s);

// Applies one `key = value` assignment; throws ConfigError for unknown keys
// or unparseable values.
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

// Loads `key = value` lines ('#' starts a comment, blank lines ignored).
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

}  // namespace puea
