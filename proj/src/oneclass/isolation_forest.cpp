#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "puea/errors.hpp"
#include "puea/oneclass/detector.hpp"
#include "puea/rng.hpp"

namespace puea::oneclass {

namespace {

struct TreeBuilder {
  const FeatureMatrix& data;
  rng::SplitMix64& stream;
  std::size_t max_depth;
  IfTree tree;

  // Builds the subtree over `rows` and returns its node index.
  std::int32_t build(const std::vector<std::size_t>& rows,
                     std::size_t depth) {
    const auto node_idx = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[node_idx].size = static_cast<std::uint32_t>(rows.size());

    if (rows.size() <= 1 || depth >= max_depth) return node_idx;

    // Split features must actually vary on this node's rows.
    const std::size_t d = data.cols();
    std::vector<std::size_t> splittable;
    std::vector<double> mins(d), maxs(d);
    for (std::size_t j = 0; j < d; ++j) {
      double lo = data(rows[0], j), hi = lo;
      for (const std::size_t i : rows) {
        lo = std::min(lo, data(i, j));
        hi = std::max(hi, data(i, j));
      }
      mins[j] = lo;
      maxs[j] = hi;
      if (lo < hi) splittable.push_back(j);
    }
    if (splittable.empty()) return node_idx;

    const std::size_t f =
        splittable[rng::below(stream, splittable.size())];
    const double cut = rng::uniform(stream, mins[f], maxs[f]);

    // Order-preserving partition keeps the build deterministic.
    std::vector<std::size_t> left_rows, right_rows;
    for (const std::size_t i : rows) {
      (data(i, f) < cut ? left_rows : right_rows).push_back(i);
    }
    if (left_rows.empty() || right_rows.empty()) return node_idx;

    tree.nodes[node_idx].feature = static_cast<std::int32_t>(f);
    tree.nodes[node_idx].cut = cut;
    const std::int32_t left = build(left_rows, depth + 1);
    const std::int32_t right = build(right_rows, depth + 1);
    tree.nodes[node_idx].left = left;
    tree.nodes[node_idx].right = right;
    return node_idx;
  }
};

// First `count` entries of a seeded partial Fisher-Yates shuffle of [0, m).
std::vector<std::size_t> draw_subsample(std::size_t m, std::size_t count,
                                        rng::SplitMix64& stream) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng::below(stream, m - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace

FittedDetector fit_isolation_forest(const FeatureMatrix& train,
                                    const IsolationForestParams& params,
                                    std::uint64_t seed) {
  const std::size_t m = train.rows();
  const std::size_t d = train.cols();
  if (m < 2) throw DataError("isolation forest needs at least 2 rows");
  if (params.num_trees == 0 || params.subsample < 2)
    throw std::invalid_argument("isolation forest params must be positive");

  bool all_identical = true;
  for (std::size_t j = 0; j < d && all_identical; ++j) {
    const double* c = train.col(j);
    for (std::size_t i = 1; i < m; ++i) {
      if (c[i] != c[0]) {
        all_identical = false;
        break;
      }
    }
  }
  if (all_identical)
    throw DataError("training rows are all identical; nothing to isolate");

  const std::size_t psi = std::min(params.subsample, m);
  const auto max_depth = static_cast<std::size_t>(
      std::ceil(std::log2(static_cast<double>(psi))));

  IfModel model;
  model.subsample = psi;
  model.c_norm = average_path_length(psi);
  model.dim = d;
  model.trees.resize(params.num_trees);
  for (std::size_t t = 0; t < params.num_trees; ++t) {
    rng::SplitMix64 stream(rng::substream(seed, 0x1F02u, t));
    const std::vector<std::size_t> rows = draw_subsample(m, psi, stream);
    TreeBuilder builder{train, stream, max_depth, {}};
    builder.build(rows, 0);
    model.trees[t] = std::move(builder.tree);
  }
  return FittedDetector(std::move(model));
}

}  // namespace puea::oneclass
