// Versioned text serialization for fitted detectors. Numbers are written in
// shortest round-trip form, so a loaded model scores bit-identically to the
// one that was saved.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "puea/errors.hpp"
#include "puea/linalg.hpp"
#include "puea/oneclass/detector.hpp"

namespace puea::oneclass {

namespace {

constexpr const char* kMagic = "puea-model";
constexpr int kVersion = 1;

void put(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string t;
    if (!(in_ >> t)) throw DataError("model file truncated");
    return t;
  }

  void expect(const std::string& literal) {
    const std::string t = word();
    if (t != literal) {
      throw DataError("model file: expected '" + literal + "', got '" + t +
                      "'");
    }
  }

  double number() {
    const std::string t = word();
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      throw DataError("model file: bad number '" + t + "'");
    return v;
  }

  std::int64_t integer() {
    const std::string t = word();
    std::int64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      throw DataError("model file: bad integer '" + t + "'");
    return v;
  }

  std::size_t count() {
    const std::int64_t v = integer();
    if (v < 0) throw DataError("model file: negative count");
    return static_cast<std::size_t>(v);
  }

 private:
  std::istream& in_;
};

void save_model(std::ostream& out, const IfModel& m) {
  out << "subsample " << m.subsample << "\nc_norm ";
  put(out, m.c_norm);
  out << "\ntrees " << m.trees.size() << '\n';
  for (const auto& tree : m.trees) {
    out << "tree " << tree.nodes.size() << '\n';
    for (const auto& n : tree.nodes) {
      out << n.feature << ' ';
      put(out, n.cut);
      out << ' ' << n.size << ' ' << n.left << ' ' << n.right << '\n';
    }
  }
}

void save_model(std::ostream& out, const OcsvmModel& m) {
  out << "gamma ";
  put(out, m.gamma);
  out << "\nrho ";
  put(out, m.rho);
  out << "\nsupport " << m.support_vectors.rows() << '\n';
  for (std::size_t i = 0; i < m.support_vectors.rows(); ++i) {
    put(out, m.dual_coef[i]);
    for (std::size_t j = 0; j < m.dim; ++j) {
      out << ' ';
      put(out, m.support_vectors(i, j));
    }
    out << '\n';
  }
}

void save_model(std::ostream& out, const McdModel& m) {
  out << "logdet ";
  put(out, m.logdet);
  out << "\nlocation";
  for (const double v : m.location) {
    out << ' ';
    put(out, v);
  }
  out << "\ncovariance\n";
  for (std::size_t j = 0; j < m.dim; ++j) {
    for (std::size_t l = 0; l < m.dim; ++l) {
      if (l > 0) out << ' ';
      put(out, m.covariance[j * m.dim + l]);
    }
    out << '\n';
  }
}

void save_model(std::ostream& out, const LofModel& m) {
  out << "k " << m.k << "\npoints " << m.points.rows() << '\n';
  for (std::size_t i = 0; i < m.points.rows(); ++i) {
    for (std::size_t j = 0; j < m.dim; ++j) {
      put(out, m.points(i, j));
      out << ' ';
    }
    put(out, m.k_distance[i]);
    out << ' ';
    put(out, m.lrd[i]);
    out << '\n';
  }
}

FittedDetector load_if(TokenReader& r, std::size_t dim) {
  IfModel m;
  m.dim = dim;
  r.expect("subsample");
  m.subsample = r.count();
  r.expect("c_norm");
  m.c_norm = r.number();
  r.expect("trees");
  m.trees.resize(r.count());
  for (auto& tree : m.trees) {
    r.expect("tree");
    tree.nodes.resize(r.count());
    for (auto& n : tree.nodes) {
      n.feature = static_cast<std::int32_t>(r.integer());
      n.cut = r.number();
      n.size = static_cast<std::uint32_t>(r.count());
      n.left = static_cast<std::int32_t>(r.integer());
      n.right = static_cast<std::int32_t>(r.integer());
    }
  }
  return FittedDetector(std::move(m));
}

FittedDetector load_svm(TokenReader& r, std::size_t dim) {
  OcsvmModel m;
  m.dim = dim;
  r.expect("gamma");
  m.gamma = r.number();
  r.expect("rho");
  m.rho = r.number();
  r.expect("support");
  const std::size_t count = r.count();
  m.support_vectors = FeatureMatrix(count, dim);
  m.dual_coef.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    m.dual_coef[i] = r.number();
    for (std::size_t j = 0; j < dim; ++j) m.support_vectors(i, j) = r.number();
  }
  return FittedDetector(std::move(m));
}

FittedDetector load_mcd(TokenReader& r, std::size_t dim) {
  McdModel m;
  m.dim = dim;
  r.expect("logdet");
  m.logdet = r.number();
  r.expect("location");
  m.location.resize(dim);
  for (auto& v : m.location) v = r.number();
  r.expect("covariance");
  m.covariance.resize(dim * dim);
  for (auto& v : m.covariance) v = r.number();
  // The inverse is derived state; recomputing it from the stored covariance
  // reproduces the fitted inverse exactly.
  std::vector<double> chol;
  if (!linalg::cholesky(m.covariance, dim, chol))
    throw DataError("model file: MCD covariance is not positive definite");
  m.cov_inverse = linalg::spd_inverse_from_cholesky(chol, dim);
  return FittedDetector(std::move(m));
}

FittedDetector load_lof(TokenReader& r, std::size_t dim) {
  LofModel m;
  m.dim = dim;
  r.expect("k");
  m.k = r.count();
  r.expect("points");
  const std::size_t count = r.count();
  if (m.k == 0 || count <= m.k)
    throw DataError("model file: LOF needs more points than k");
  m.points = FeatureMatrix(count, dim);
  m.k_distance.resize(count);
  m.lrd.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < dim; ++j) m.points(i, j) = r.number();
    m.k_distance[i] = r.number();
    m.lrd[i] = r.number();
  }
  return FittedDetector(std::move(m));
}

}  // namespace

void FittedDetector::save(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << to_string(kind()) << '\n';
  out << "dim " << dim() << '\n';
  out << "threshold ";
  if (threshold_) {
    put(out, *threshold_);
  } else {
    out << "none";
  }
  out << '\n';
  std::visit([&out](const auto& m) { save_model(out, m); }, model_);
  out << "end\n";
}

void FittedDetector::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  save(out);
  if (!out) throw DataError("write failed for " + path.string());
}

FittedDetector FittedDetector::load(std::istream& in) {
  TokenReader r(in);
  r.expect(kMagic);
  const std::int64_t version = r.integer();
  if (version != kVersion) {
    throw DataError("unsupported model version " + std::to_string(version));
  }
  r.expect("kind");
  const std::string kind_name = r.word();
  DetectorKind kind;
  try {
    kind = detector_kind_from_string(kind_name);
  } catch (const ConfigError&) {
    throw DataError("model file: unknown kind '" + kind_name + "'");
  }
  r.expect("dim");
  const std::size_t dim = r.count();
  if (dim == 0) throw DataError("model file: dimension must be positive");
  r.expect("threshold");
  const std::string thr = r.word();

  FittedDetector det = [&] {
    switch (kind) {
      case DetectorKind::IsolationForest: return load_if(r, dim);
      case DetectorKind::OneClassSvm: return load_svm(r, dim);
      case DetectorKind::Mcd: return load_mcd(r, dim);
      case DetectorKind::Lof: return load_lof(r, dim);
    }
    throw DataError("model file: bad kind");
  }();
  r.expect("end");

  if (thr != "none") {
    double v = 0.0;
    const auto res = std::from_chars(thr.data(), thr.data() + thr.size(), v);
    if (res.ec != std::errc{} || res.ptr != thr.data() + thr.size())
      throw DataError("model file: bad threshold '" + thr + "'");
    det.set_threshold(v);
  }
  return det;
}

FittedDetector FittedDetector::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load(in);
}

}  // namespace puea::oneclass
