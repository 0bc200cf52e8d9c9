#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "imbal/dataset.hpp"

namespace imbal {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

struct Neighbor {
  std::size_t index;
  double distance;
};

/// Exact brute-force neighbour index over a point set with binary labels.
///
/// Distances are Euclidean. Ordering is by (distance, index), so every query
/// has a unique answer. `from_dataset` min-max normalizes first, which is how
/// all resamplers and complexity measures use it.
class NeighborIndex {
 public:
  NeighborIndex(std::vector<double> points, std::size_t dims, std::vector<Label> labels);
  static NeighborIndex from_dataset(const Dataset& d);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dims() const noexcept { return dims_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * dims_, dims_}; }
  Label label(std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const noexcept { return labels_; }

  double squared_distance(std::size_t i, std::size_t j) const {
    return imbal::squared_distance(point(i), point(j));
  }

  /// The k nearest stored points to q, ascending by (distance, index).
  /// `self` names q's own stored index, which is then not a candidate.
  std::vector<Neighbor> query(std::span<const double> q, std::size_t k,
                              std::optional<std::size_t> self = std::nullopt) const;
  std::vector<Neighbor> neighbors_of(std::size_t i, std::size_t k) const {
    return query(point(i), k, i);
  }

  /// Majority label of the k nearest; an even split goes to the minority.
  Label classify(std::span<const double> q, std::size_t k,
                 std::optional<std::size_t> self = std::nullopt) const;

  /// Copy of the given rows, same coordinates.
  NeighborIndex subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<double> points_;
  std::size_t dims_;
  std::vector<Label> labels_;
};

struct MstEdge {
  std::size_t u;  // u < v
  std::size_t v;
  double weight;
};

/// Euclidean minimum spanning tree (dense Prim, O(n^2)). Among equal
/// weights the lexicographically smaller (u, v) edge is preferred, which
/// makes the tree unique.
std::vector<MstEdge> build_mst(const NeighborIndex& index);

}  // namespace imbal
