#include "puea/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "puea/errors.hpp"

namespace puea {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_num(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(value.data(), last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(value.data(), last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ConfigError(key + ": expected a nonnegative integer, got '" + value +
                      "'");
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> parse_num_list(const std::string& key,
                                   const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_num(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

}  // namespace

const char* to_string(scenario::Placement p) {
  return p == scenario::Placement::InsideRegion ? "inside" : "outside";
}

scenario::Placement placement_from_string(const std::string& s) {
  if (s == "inside") return scenario::Placement::InsideRegion;
  if (s == "outside") return scenario::Placement::OutsideRegion;
  throw ConfigError("placement must be 'inside' or 'outside', got '" + s +
                    "'");
}

scenario::ScenarioParams RunConfig::scenario_params(double sigma2_att) const {
  scenario::ScenarioParams p;
  p.n_sus = n_sus;
  p.region = region;
  p.pt_pu = pt_pu;
  p.sigma2_pu = sigma2_pu;
  p.pt_attacker = pt_attacker;
  p.sigma2_attacker = sigma2_att;
  p.outside_pu = outside_pu;
  p.channel = channel();
  return p;
}

void RunConfig::validate() const {
  if (n_sus < 2) throw ConfigError("n_sus: need at least 2 SUs");
  if (n_slots == 0) throw ConfigError("n_slots: must be positive");
  if (!(region > 0.0)) throw ConfigError("region: must be positive");
  if (!(alpha > 0.0)) throw ConfigError("alpha: must be positive");
  if (!(min_distance > 0.0)) throw ConfigError("min_distance: must be positive");
  if (!(pt_pu > 0.0)) throw ConfigError("pt_pu: must be positive");
  if (!(pt_attacker > 0.0)) throw ConfigError("pt_attacker: must be positive");
  if (sigma2_pu < 0.0) throw ConfigError("sigma2_pu: must be nonnegative");
  if (sigma2_attacker.empty())
    throw ConfigError("sigma2_attacker: list must be non-empty");
  for (const double s : sigma2_attacker) {
    if (s < 0.0) throw ConfigError("sigma2_attacker: values must be nonnegative");
  }
  if (d_list.empty()) throw ConfigError("d_list: list must be non-empty");
  for (const double d : d_list) {
    if (!(d > 0.0)) throw ConfigError("d_list: distances must be positive");
  }
  if (placements.empty()) throw ConfigError("placements: list must be non-empty");
  if (puea_pct.empty()) throw ConfigError("puea_pct: list must be non-empty");
  for (const int pct : puea_pct) {
    if (pct <= 0 || pct >= 100)
      throw ConfigError("puea_pct: percentages must lie in (0, 100)");
  }
  if (k_list.empty()) throw ConfigError("k_list: list must be non-empty");
  for (const std::size_t k : k_list) {
    if (k < 2) throw ConfigError("k_list: fold counts must be at least 2");
  }
  if (!(detector.contamination > 0.0 && detector.contamination < 0.5))
    throw ConfigError("contamination: must lie in (0, 0.5)");
  if (detector.iforest.num_trees == 0)
    throw ConfigError("if_trees: must be positive");
  if (detector.iforest.subsample < 2)
    throw ConfigError("if_subsample: must be at least 2");
  if (!(detector.ocsvm.nu > 0.0 && detector.ocsvm.nu <= 1.0))
    throw ConfigError("ocsvm_nu: must lie in (0, 1]");
  if (!(detector.ocsvm.tolerance > 0.0))
    throw ConfigError("ocsvm_tol: must be positive");
  if (detector.ocsvm.max_iter == 0)
    throw ConfigError("ocsvm_max_iter: must be positive");
  if (detector.mcd.support_fraction > 1.0)
    throw ConfigError("mcd_support_fraction: must lie in (0, 1]");
  if (detector.mcd.num_initial_subsets == 0)
    throw ConfigError("mcd_subsets: must be positive");
  if (detector.lof.k_neighbors == 0)
    throw ConfigError("lof_k: must be positive");
}

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "n_sus") {
    cfg.n_sus = parse_uint(key, value);
  } else if (key == "n_slots") {
    cfg.n_slots = parse_uint(key, value);
  } else if (key == "region") {
    cfg.region = parse_num(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_num(key, value);
  } else if (key == "min_distance") {
    cfg.min_distance = parse_num(key, value);
  } else if (key == "pt_pu") {
    cfg.pt_pu = parse_num(key, value);
  } else if (key == "sigma2_pu") {
    cfg.sigma2_pu = parse_num(key, value);
  } else if (key == "pt_attacker") {
    cfg.pt_attacker = parse_num(key, value);
  } else if (key == "outside_pu_x") {
    cfg.outside_pu.x = parse_num(key, value);
  } else if (key == "outside_pu_y") {
    cfg.outside_pu.y = parse_num(key, value);
  } else if (key == "sigma2_attacker") {
    cfg.sigma2_attacker = parse_num_list(key, value);
  } else if (key == "d_list") {
    cfg.d_list = parse_num_list(key, value);
  } else if (key == "placements") {
    cfg.placements.clear();
    for (const auto& item : split_list(value))
      cfg.placements.push_back(placement_from_string(item));
  } else if (key == "puea_pct") {
    cfg.puea_pct.clear();
    for (const double v : parse_num_list(key, value))
      cfg.puea_pct.push_back(static_cast<int>(v));
  } else if (key == "k_list") {
    cfg.k_list.clear();
    for (const double v : parse_num_list(key, value))
      cfg.k_list.push_back(static_cast<std::size_t>(v));
  } else if (key == "contamination") {
    cfg.detector.contamination = parse_num(key, value);
  } else if (key == "if_trees") {
    cfg.detector.iforest.num_trees = parse_uint(key, value);
  } else if (key == "if_subsample") {
    cfg.detector.iforest.subsample = parse_uint(key, value);
  } else if (key == "ocsvm_nu") {
    cfg.detector.ocsvm.nu = parse_num(key, value);
  } else if (key == "ocsvm_gamma") {
    cfg.detector.ocsvm.gamma = value == "scale" ? 0.0 : parse_num(key, value);
  } else if (key == "ocsvm_tol") {
    cfg.detector.ocsvm.tolerance = parse_num(key, value);
  } else if (key == "ocsvm_max_iter") {
    cfg.detector.ocsvm.max_iter = parse_uint(key, value);
  } else if (key == "mcd_support_fraction") {
    cfg.detector.mcd.support_fraction =
        value == "default" ? 0.0 : parse_num(key, value);
  } else if (key == "mcd_subsets") {
    cfg.detector.mcd.num_initial_subsets = parse_uint(key, value);
  } else if (key == "lof_k") {
    cfg.detector.lof.k_neighbors = parse_uint(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_uint(key, value);
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "jobs") {
    cfg.jobs = parse_uint(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());

  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string entry = trim(line);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    try {
      apply_config_entry(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return cfg;
}

}  // namespace puea
