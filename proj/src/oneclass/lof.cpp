#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "puea/errors.hpp"
#include "puea/kernels.hpp"
#include "puea/oneclass/detector.hpp"

namespace puea::oneclass {

namespace {

constexpr double kLrdCap = 1e12;

// k smallest (distance, index) pairs from d2, excluding `self`, ties broken
// by lowest index. Returned ascending.
std::vector<std::pair<double, std::size_t>> k_nearest(
    const std::vector<double>& d2, std::size_t self, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> heap;  // max-heap
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < d2.size(); ++i) {
    if (i == self) continue;
    const std::pair<double, std::size_t> cand{d2[i], i};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort(heap.begin(), heap.end());
  return heap;
}

}  // namespace

FittedDetector fit_lof(const FeatureMatrix& train, const LofParams& params) {
  const std::size_t m = train.rows();
  const std::size_t k = params.k_neighbors;
  if (k == 0) throw std::invalid_argument("k_neighbors must be positive");
  if (m <= k) {
    throw DataError("LOF needs more than k_neighbors=" + std::to_string(k) +
                    " training rows, got " + std::to_string(m));
  }

  LofModel model;
  model.points = train;
  model.k = k;
  model.dim = train.cols();
  model.k_distance.resize(m);
  model.lrd.resize(m);

  // Pass 1: k-distances and neighbor lists.
  std::vector<std::vector<std::pair<double, std::size_t>>> neighbors(m);
  std::vector<double> d2(m);
  std::vector<double> row(train.cols());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < train.cols(); ++j) row[j] = train(i, j);
    kernels::squared_dists(train, row.data(), d2.data());
    neighbors[i] = k_nearest(d2, i, k);
    model.k_distance[i] = std::sqrt(neighbors[i].back().first);
  }

  // Pass 2: local reachability densities.
  for (std::size_t i = 0; i < m; ++i) {
    double reach_sum = 0.0;
    for (const auto& [dist2, o] : neighbors[i]) {
      reach_sum += std::max(model.k_distance[o], std::sqrt(dist2));
    }
    const double mean_reach = reach_sum / static_cast<double>(k);
    model.lrd[i] =
        mean_reach > 0.0 ? std::min(1.0 / mean_reach, kLrdCap) : kLrdCap;
  }

  return FittedDetector(std::move(model));
}

}  // namespace puea::oneclass
