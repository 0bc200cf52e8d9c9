#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "imbal/dataset.hpp"

namespace imbal {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> mtry;       // nullopt = floor(sqrt(p))
  std::optional<std::size_t> max_depth;  // nullopt = unlimited
  std::size_t min_split = 2;
  std::uint64_t seed = 0;
  /// When set, mtry is chosen from this grid by out-of-bag accuracy
  /// (ties go to the smaller value). An empty grid means {1..min(7, p)}.
  std::optional<std::vector<std::size_t>> mtry_grid;
  bool bootstrap = true;  // false trains every tree on the full data
  std::size_t threads = 1;
};

/// Flat binary tree with axis-aligned splits; x[feature] <= threshold goes left.
struct Tree {
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t count_majority = 0;
    std::uint32_t count_minority = 0;
  };
  std::vector<Node> nodes;

  const Node& leaf_for(std::span<const double> x) const;
  /// Leaf majority vote; an even leaf votes minority.
  Label vote(std::span<const double> x) const;
};

/// A split candidate: feature, midpoint threshold and the Gini score
/// sum_c n_{L,c}^2 / n_L + sum_c n_{R,c}^2 / n_R (higher is purer).
struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;
};

/// Best Gini split over `features` for the instances `rows` of `d`.
/// Features are scanned in the given order and thresholds ascending; only a
/// strictly better score replaces the incumbent.
std::optional<Split> best_split(const Dataset& d, std::span<const std::size_t> rows,
                                std::span<const std::size_t> features);

struct ForestModel {
  std::vector<Tree> trees;
  std::size_t n_features = 0;
  std::size_t mtry = 0;
  std::optional<double> oob_accuracy;
  bool degenerate = false;  // trained on a single class
  Label constant_label = Label::majority;

  /// Fraction of trees voting minority for each point.
  std::vector<double> predict_proba(const Dataset& x) const;
  double predict_proba(std::span<const double> x) const;
  /// Minority iff the vote fraction is >= 0.5.
  std::vector<Label> predict(const Dataset& x) const;

  /// Human-readable versioned dump of every tree.
  void dump(std::ostream& out) const;
};

ForestModel train_forest(const Dataset& d, const ForestConfig& cfg);

}  // namespace imbal
