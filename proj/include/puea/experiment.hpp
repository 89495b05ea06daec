#pragma once

#include <functional>
#include <string>
#include <vector>

#include "puea/config.hpp"
#include "puea/eval.hpp"
#include "puea/features.hpp"

namespace puea::eval {

// One metrics row of the experiment grid; k == 0 is the holdout evaluation
// (fit on the full PU training set, evaluate on the mixed test set), k >= 2
// is k-fold cross-validation on the mixed test set.
struct ExperimentRow {
  scenario::Placement placement = scenario::Placement::InsideRegion;
  double d = 0.0;
  double sigma2_attacker = 0.0;
  int puea_pct = 0;
  oneclass::DetectorKind detector = oneclass::DetectorKind::IsolationForest;
  std::size_t k = 0;
  MetricsReport metrics;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
};

// Dataset construction. All seeds derive from config values (placement,
// D, sigma2) rather than list positions, so a restricted grid reproduces
// the matching cells of the full default grid exactly.

// PU training set: n_slots slots, label +1. Identical for every D and
// attacker sigma2 of the placement.
[[nodiscard]] features::Dataset simulate_pu_dataset(
    const RunConfig& cfg, scenario::Placement placement);

// Attacker set: n_att slots from the attacker at distance d, label -1.
[[nodiscard]] features::Dataset simulate_attacker_dataset(
    const RunConfig& cfg, scenario::Placement placement, double d,
    double sigma2_att, std::size_t n_att);

// Mixed test set: the full training set followed by the first n_att
// attacker examples.
[[nodiscard]] features::Dataset make_test_mix(const features::Dataset& train,
                                              const features::Dataset& attack,
                                              std::size_t n_att);

[[nodiscard]] std::size_t attacker_count(std::size_t n_slots, int pct);

// Deterministic per-detector / per-cell seeds used by the grid and the CLI.
[[nodiscard]] std::uint64_t detector_seed(const RunConfig& cfg,
                                          oneclass::DetectorKind kind);
[[nodiscard]] std::uint64_t cv_seed(const RunConfig& cfg,
                                    scenario::Placement placement, double d,
                                    double sigma2_att, int pct,
                                    oneclass::DetectorKind kind,
                                    std::size_t k);

// Runs the full grid: every (placement, D, sigma2, pct, detector) cell gets
// one holdout row plus one CV row per fold count. Cells run in parallel
// (cfg.jobs threads); row order is fixed by the grid loops, never by
// completion order. Errors carry the failing cell's coordinates.
[[nodiscard]] ExperimentReport run_experiment(
    const RunConfig& cfg,
    const std::function<void(const std::string&)>& progress = {});

// Machine-readable report (full-precision fractions).
[[nodiscard]] std::string report_csv(const ExperimentReport& report);

// Human-readable aligned table (percentages).
[[nodiscard]] std::string report_table(const ExperimentReport& report);

}  // namespace puea::eval
