#include "puea/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "puea/errors.hpp"
#include "puea/kernels.hpp"

namespace puea::features {

namespace {

constexpr const char* kHeader =
    "slot_id,mean_db,var_db,median_db,uq_db,lq_db,label";

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw DataError("line " + std::to_string(line_no) +
                    ": unparseable number '" + field + "'");
  }
  return v;
}

// Quantile over values already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return sorted[lo];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

FeatureMatrix Dataset::feature_matrix() const {
  FeatureMatrix m(examples_.size(), kFeatureDim);
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    m.set_row(i, examples_[i].features.as_array());
  }
  return m;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out(examples_.size());
  for (std::size_t i = 0; i < examples_.size(); ++i)
    out[i] = examples_[i].label;
  return out;
}

bool Dataset::all_positive() const {
  return std::all_of(examples_.begin(), examples_.end(),
                     [](const Example& e) { return e.label == 1; });
}

Dataset Dataset::positives() const {
  Dataset out;
  for (const auto& e : examples_) {
    if (e.label == 1) out.append(e);
  }
  return out;
}

Dataset Dataset::take(std::size_t count) const {
  Dataset out;
  for (std::size_t i = 0; i < count && i < examples_.size(); ++i)
    out.append(examples_[i]);
  return out;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty list");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("quantile fraction outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

FeatureVector summarize_slot(const scenario::SlotReport& report) {
  const auto& v = report.energies_db;
  const std::size_t n = v.size();
  if (n < 2)
    throw std::invalid_argument("slot summary needs at least 2 energies");

  FeatureVector f;
  f.mean = kernels::sum(v.data(), n) / static_cast<double>(n);
  f.variance =
      kernels::sum_sq_diff(v.data(), n, f.mean) / static_cast<double>(n);

  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end());
  f.median = quantile_sorted(sorted, 0.5);
  f.upper_quartile = quantile_sorted(sorted, 0.75);
  f.lower_quartile = quantile_sorted(sorted, 0.25);
  return f;
}

Dataset build_dataset(std::span<const scenario::SlotReport> reports,
                      int label) {
  if (label != 1 && label != -1)
    throw std::invalid_argument("label must be +1 or -1");
  if (reports.empty())
    throw std::invalid_argument("cannot build a dataset from zero reports");

  const std::size_t n = reports.front().energies_db.size();
  std::vector<Example> examples;
  examples.reserve(reports.size());
  for (const auto& rep : reports) {
    if (rep.energies_db.size() != n)
      throw std::invalid_argument("reports have mixed SU counts");
    examples.push_back({rep.slot_id, summarize_slot(rep), label});
  }
  return Dataset(std::move(examples));
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << kHeader << '\n';
  for (const auto& e : ds.examples()) {
    const auto f = e.features.as_array();
    out << e.slot_id;
    for (const double v : f) out << ',' << format_double(v);
    out << ',' << e.label << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw DataError(path.string() + ": line 1: expected header '" +
                    std::string(kHeader) + "'");
  }

  std::vector<Example> examples;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 7) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": expected 7 columns, got " +
                      std::to_string(fields.size()));
    }

    Example e;
    std::uint64_t slot = 0;
    const auto sres = std::from_chars(
        fields[0].data(), fields[0].data() + fields[0].size(), slot);
    if (sres.ec != std::errc{} ||
        sres.ptr != fields[0].data() + fields[0].size()) {
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": bad slot_id '" + fields[0] + "'");
    }
    e.slot_id = slot;
    e.features.mean = parse_double(fields[1], line_no);
    e.features.variance = parse_double(fields[2], line_no);
    e.features.median = parse_double(fields[3], line_no);
    e.features.upper_quartile = parse_double(fields[4], line_no);
    e.features.lower_quartile = parse_double(fields[5], line_no);
    if (fields[6] == "1") {
      e.label = 1;
    } else if (fields[6] == "-1") {
      e.label = -1;
    } else {
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": label must be 1 or -1, got '" + fields[6] + "'");
    }
    examples.push_back(e);
  }
  return Dataset(std::move(examples));
}

}  // namespace puea::features
