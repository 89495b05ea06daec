#include "puea/experiment.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "puea/errors.hpp"
#include "puea/rng.hpp"

namespace puea::eval {

namespace {

// Seed-derivation tags; placements map to fixed ids so data never depends
// on the order they appear in the config.
enum : std::uint64_t {
  kTagTopology = 1,
  kTagPuSlots = 2,
  kTagAttackerSlots = 3,
  kTagDetector = 4,
  kTagCv = 5,
};

std::uint64_t placement_id(scenario::Placement p) {
  return p == scenario::Placement::InsideRegion ? 0 : 1;
}

std::uint64_t kind_id(oneclass::DetectorKind k) {
  return static_cast<std::uint64_t>(k);
}

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string cell_name(scenario::Placement placement, double d, double sigma2,
                      int pct) {
  std::ostringstream os;
  os << to_string(placement) << "_" << format_double(d) << "_"
     << format_double(sigma2) << "_" << pct;
  return os.str();
}

}  // namespace

std::size_t attacker_count(std::size_t n_slots, int pct) {
  return n_slots * static_cast<std::size_t>(pct) / 100;
}

features::Dataset simulate_pu_dataset(const RunConfig& cfg,
                                      scenario::Placement placement) {
  const auto params = cfg.scenario_params(cfg.sigma2_attacker.front());
  const std::uint64_t topo_seed =
      rng::substream(cfg.seed, kTagTopology, placement_id(placement));
  const auto topo =
      scenario::generate_topology(params, placement, cfg.d_list.front(),
                                  topo_seed);
  const auto reports = scenario::simulate_slots(
      topo, scenario::Source::Pu, cfg.n_slots, cfg.channel(),
      rng::substream(cfg.seed, kTagPuSlots, placement_id(placement)));
  return features::build_dataset(reports, 1);
}

features::Dataset simulate_attacker_dataset(const RunConfig& cfg,
                                            scenario::Placement placement,
                                            double d, double sigma2_att,
                                            std::size_t n_att) {
  const auto params = cfg.scenario_params(sigma2_att);
  const std::uint64_t topo_seed =
      rng::substream(cfg.seed, kTagTopology, placement_id(placement));
  const auto topo = scenario::generate_topology(params, placement, d,
                                                topo_seed);
  const std::uint64_t slots_seed = rng::substream(
      rng::substream(cfg.seed, kTagAttackerSlots, placement_id(placement)),
      bits(d), bits(sigma2_att));
  const auto reports = scenario::simulate_slots(
      topo, scenario::Source::Attacker, n_att, cfg.channel(), slots_seed);
  return features::build_dataset(reports, -1);
}

features::Dataset make_test_mix(const features::Dataset& train,
                                const features::Dataset& attack,
                                std::size_t n_att) {
  if (attack.size() < n_att)
    throw DataError("attacker dataset has fewer rows than the requested mix");
  features::Dataset mix = train;
  mix.append(attack.take(n_att));
  return mix;
}

std::uint64_t detector_seed(const RunConfig& cfg,
                            oneclass::DetectorKind kind) {
  return rng::substream(cfg.seed, kTagDetector, kind_id(kind));
}

std::uint64_t cv_seed(const RunConfig& cfg, scenario::Placement placement,
                      double d, double sigma2_att, int pct,
                      oneclass::DetectorKind kind, std::size_t k) {
  std::uint64_t s = rng::substream(cfg.seed, kTagCv, placement_id(placement));
  s = rng::substream(s, bits(d), bits(sigma2_att));
  s = rng::substream(s, static_cast<std::uint64_t>(pct), kind_id(kind));
  return rng::substream(s, k);
}

ExperimentReport run_experiment(
    const RunConfig& cfg,
    const std::function<void(const std::string&)>& progress) {
  cfg.validate();

  struct Task {
    scenario::Placement placement;
    double d;
    double sigma2;
    int pct;
    oneclass::DetectorKind kind;
    const features::Dataset* train;
    const features::Dataset* attack;
  };

  // Simulation is cheap next to fitting: build all datasets up front, then
  // run the (cell, detector) tasks in parallel.
  std::vector<features::Dataset> trains;
  std::vector<features::Dataset> attacks;
  std::vector<Task> tasks;
  std::size_t max_pct = 0;
  for (const int pct : cfg.puea_pct)
    max_pct = std::max(max_pct, static_cast<std::size_t>(pct));

  trains.reserve(cfg.placements.size());
  attacks.reserve(cfg.placements.size() * cfg.d_list.size() *
                  cfg.sigma2_attacker.size());
  for (const auto placement : cfg.placements) {
    trains.push_back(simulate_pu_dataset(cfg, placement));
    const features::Dataset* train = &trains.back();
    for (const double d : cfg.d_list) {
      for (const double s2 : cfg.sigma2_attacker) {
        attacks.push_back(simulate_attacker_dataset(
            cfg, placement, d, s2,
            attacker_count(cfg.n_slots, static_cast<int>(max_pct))));
        const features::Dataset* attack = &attacks.back();
        for (const int pct : cfg.puea_pct) {
          for (const auto kind : oneclass::kAllKinds) {
            tasks.push_back({placement, d, s2, pct, kind, train, attack});
          }
        }
      }
    }
  }

  const std::size_t rows_per_task = 1 + cfg.k_list.size();
  std::vector<ExperimentRow> rows(tasks.size() * rows_per_task);
  std::vector<std::exception_ptr> failures(tasks.size());

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      try {
        const features::Dataset test = make_test_mix(
            *task.train, *task.attack, attacker_count(cfg.n_slots, task.pct));

        ExperimentRow base;
        base.placement = task.placement;
        base.d = task.d;
        base.sigma2_attacker = task.sigma2;
        base.puea_pct = task.pct;
        base.detector = task.kind;

        oneclass::DetectorParams params = cfg.detector;
        params.seed = detector_seed(cfg, task.kind);
        const auto det = oneclass::fit_calibrated(
            task.kind, task.train->feature_matrix(), params);

        ExperimentRow holdout = base;
        holdout.k = 0;
        holdout.metrics = evaluate(det, test).metrics;
        rows[t * rows_per_task] = holdout;

        for (std::size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
          const std::size_t k = cfg.k_list[ki];
          const std::uint64_t seed = cv_seed(cfg, task.placement, task.d,
                                             task.sigma2, task.pct, task.kind,
                                             k);
          oneclass::DetectorParams cv_params = cfg.detector;
          cv_params.seed = seed;
          const auto cv = kfold_cv(test, k, task.kind, cv_params, seed);
          ExperimentRow row = base;
          row.k = k;
          row.metrics = cv.mean;
          rows[t * rows_per_task + 1 + ki] = row;
        }

        if (progress) {
          const std::lock_guard<std::mutex> lock(progress_mutex);
          progress(cell_name(task.placement, task.d, task.sigma2, task.pct) +
                   " " + oneclass::to_string(task.kind));
        }
      } catch (const std::exception& e) {
        failures[t] = std::make_exception_ptr(DataError(
            "cell " + cell_name(task.placement, task.d, task.sigma2,
                                task.pct) +
            " detector " + oneclass::to_string(task.kind) + ": " + e.what()));
      }
    }
  };

  std::size_t jobs = cfg.jobs != 0 ? cfg.jobs
                                   : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, tasks.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  return ExperimentReport{std::move(rows)};
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "placement,D,sigma2_attacker,puea_pct,detector,k,accuracy,precision,"
        "recall,f1\n";
  for (const auto& r : report.rows) {
    os << to_string(r.placement) << ',' << format_double(r.d) << ','
       << format_double(r.sigma2_attacker) << ',' << r.puea_pct << ','
       << oneclass::to_string(r.detector) << ',' << r.k << ','
       << format_double(r.metrics.accuracy) << ','
       << format_double(r.metrics.precision) << ','
       << format_double(r.metrics.recall) << ','
       << format_double(r.metrics.f1) << '\n';
  }
  return os.str();
}

std::string report_table(const ExperimentReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %6s %7s %4s %-4s %8s %7s %7s %7s %7s\n",
                "place", "D", "sigma2", "pct", "det", "k", "acc%", "prec%",
                "rec%", "f1%");
  os << line;
  for (const auto& r : report.rows) {
    char kbuf[16];
    if (r.k == 0) {
      std::snprintf(kbuf, sizeof(kbuf), "%s", "holdout");
    } else {
      std::snprintf(kbuf, sizeof(kbuf), "%zu", r.k);
    }
    std::snprintf(line, sizeof(line),
                  "%-8s %6g %7g %4d %-4s %8s %7.2f %7.2f %7.2f %7.2f\n",
                  to_string(r.placement), r.d, r.sigma2_attacker, r.puea_pct,
                  oneclass::to_string(r.detector), kbuf,
                  100.0 * r.metrics.accuracy, 100.0 * r.metrics.precision,
                  100.0 * r.metrics.recall, 100.0 * r.metrics.f1);
    os << line;
  }
  return os.str();
}

}  // namespace puea::eval
