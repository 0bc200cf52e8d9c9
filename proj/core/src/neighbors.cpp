#include "imbal/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace imbal {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

NeighborIndex::NeighborIndex(std::vector<double> points, std::size_t dims, std::vector<Label> labels)
    : points_(std::move(points)), dims_(dims), labels_(std::move(labels)) {
  if (points_.size() != labels_.size() * dims_) {
    throw std::invalid_argument("neighbour index: point matrix does not match label count");
  }
}

NeighborIndex NeighborIndex::from_dataset(const Dataset& d) {
  const MinMaxScaler scaler(d);
  return NeighborIndex(scaler.transform_all(d), d.cols(), d.labels());
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> q, std::size_t k,
                                           std::optional<std::size_t> self) const {
  const std::size_t available = size() - (self && *self < size() ? 1 : 0);
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k > available) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(available) + " available candidates");
  }
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(available);
  for (std::size_t i = 0; i < size(); ++i) {
    if (self && i == *self) continue;
    cand.emplace_back(imbal::squared_distance(q, point(i)), i);
  }
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  std::vector<Neighbor> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({cand[i].second, std::sqrt(cand[i].first)});
  return out;
}

Label NeighborIndex::classify(std::span<const double> q, std::size_t k,
                              std::optional<std::size_t> self) const {
  if (size() == 0) throw std::invalid_argument("classify on an empty neighbour index");
  const auto nn = query(q, k, self);
  std::size_t minority = 0;
  for (const auto& n : nn) minority += labels_[n.index] == Label::minority ? 1 : 0;
  return 2 * minority >= k ? Label::minority : Label::majority;
}

NeighborIndex NeighborIndex::subset(std::span<const std::size_t> indices) const {
  std::vector<double> pts;
  pts.reserve(indices.size() * dims_);
  std::vector<Label> labels;
  labels.reserve(indices.size());
  for (auto i : indices) {
    const auto p = point(i);
    pts.insert(pts.end(), p.begin(), p.end());
    labels.push_back(labels_[i]);
  }
  return NeighborIndex(std::move(pts), dims_, std::move(labels));
}

std::vector<MstEdge> build_mst(const NeighborIndex& index) {
  const std::size_t n = index.size();
  if (n < 2) throw std::invalid_argument("minimum spanning tree needs at least 2 points");

  // Key of the cheapest known edge from the tree to each outside vertex:
  // (squared weight, min endpoint, max endpoint).
  using Key = std::tuple<double, std::size_t, std::size_t>;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<Key> best(n, Key{inf, n, n});
  std::vector<bool> in_tree(n, false);
  std::vector<MstEdge> edges;
  edges.reserve(n - 1);

  std::size_t added = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (pick == n || best[v] < best[pick]) pick = v;
    }
    if (step > 0) {
      const auto& [w2, a, b] = best[pick];
      edges.push_back({a, b, std::sqrt(w2)});
    } else {
      pick = 0;
    }
    in_tree[pick] = true;
    added = pick;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const Key candidate{index.squared_distance(added, v), std::min(added, v), std::max(added, v)};
      if (candidate < best[v]) best[v] = candidate;
    }
  }
  return edges;
}

}  // namespace imbal
