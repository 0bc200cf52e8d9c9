#include "imbal/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "imbal/format.hpp"
#include "imbal/random.hpp"

namespace imbal {

namespace {

double gini_score(double a, double b) {
  const double n = a + b;
  return n > 0.0 ? (a * a + b * b) / n : 0.0;
}

struct Counts {
  std::uint32_t majority = 0;
  std::uint32_t minority = 0;
};

Counts count_labels(const Dataset& d, std::span<const std::size_t> rows) {
  Counts c;
  for (auto i : rows) (d.label(i) == Label::minority ? c.minority : c.majority)++;
  return c;
}

Tree grow_tree(const Dataset& d, const ForestConfig& cfg, std::size_t mtry,
               std::vector<std::size_t> rows, Rng& rng) {
  Tree tree;
  struct Pending {
    std::uint32_t node;
    std::vector<std::size_t> rows;
    std::size_t depth;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, std::move(rows), 0});

  std::vector<std::size_t> all_features(d.cols());
  std::iota(all_features.begin(), all_features.end(), std::size_t{0});

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    const Counts c = count_labels(d, job.rows);
    tree.nodes[job.node].count_majority = c.majority;
    tree.nodes[job.node].count_minority = c.minority;

    const bool pure = c.majority == 0 || c.minority == 0;
    const bool too_small = job.rows.size() < cfg.min_split;
    const bool too_deep = cfg.max_depth && job.depth >= *cfg.max_depth;
    if (pure || too_small || too_deep) continue;

    // mtry features without replacement, scanned in ascending index order.
    for (std::size_t i = 0; i < mtry; ++i) {
      const std::size_t j = i + rng.below(all_features.size() - i);
      std::swap(all_features[i], all_features[j]);
    }
    std::vector<std::size_t> features(all_features.begin(),
                                      all_features.begin() + static_cast<std::ptrdiff_t>(mtry));
    std::sort(features.begin(), features.end());

    const auto split = best_split(d, job.rows, features);
    const double parent = gini_score(c.majority, c.minority);
    if (!split || !(split->score > parent * (1.0 + 1e-12))) continue;

    std::vector<std::size_t> left, right;
    for (auto i : job.rows) {
      (d.at(i, split->feature) <= split->threshold ? left : right).push_back(i);
    }
    const auto left_id = static_cast<std::uint32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& node = tree.nodes[job.node];
    node.feature = static_cast<std::int32_t>(split->feature);
    node.threshold = split->threshold;
    node.left = left_id;
    node.right = left_id + 1;
    stack.push_back({left_id + 1, std::move(right), job.depth + 1});
    stack.push_back({left_id, std::move(left), job.depth + 1});
  }
  return tree;
}

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
}

struct Grown {
  std::vector<Tree> trees;
  std::optional<double> oob_accuracy;
};

Grown grow_forest(const Dataset& d, const ForestConfig& cfg, std::size_t mtry) {
  const std::size_t n = d.rows();
  Grown g;
  g.trees.resize(cfg.n_trees);
  std::vector<std::vector<std::size_t>> in_bag(cfg.n_trees);

  parallel_for(cfg.n_trees, cfg.threads, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, {t}));
    std::vector<std::size_t> rows(n);
    if (cfg.bootstrap) {
      for (auto& r : rows) r = rng.below(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    in_bag[t] = rows;
    g.trees[t] = grow_tree(d, cfg, mtry, std::move(rows), rng);
  });

  if (cfg.bootstrap) {
    std::vector<std::uint32_t> votes_min(n, 0), votes_all(n, 0);
    std::vector<bool> bagged(n);
    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
      std::fill(bagged.begin(), bagged.end(), false);
      for (auto i : in_bag[t]) bagged[i] = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (bagged[i]) continue;
        ++votes_all[i];
        if (g.trees[t].vote(d.row(i)) == Label::minority) ++votes_min[i];
      }
    }
    std::size_t scored = 0, correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (votes_all[i] == 0) continue;
      ++scored;
      const Label pred = 2 * votes_min[i] >= votes_all[i] ? Label::minority : Label::majority;
      correct += pred == d.label(i) ? 1 : 0;
    }
    if (scored > 0) g.oob_accuracy = static_cast<double>(correct) / static_cast<double>(scored);
  }
  return g;
}

}  // namespace

const Tree::Node& Tree::leaf_for(std::span<const double> x) const {
  const Node* node = &nodes.front();
  while (node->feature >= 0) {
    node = &nodes[x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                                : node->right];
  }
  return *node;
}

Label Tree::vote(std::span<const double> x) const {
  const Node& leaf = leaf_for(x);
  return leaf.count_minority >= leaf.count_majority ? Label::minority : Label::majority;
}

std::optional<Split> best_split(const Dataset& d, std::span<const std::size_t> rows,
                                std::span<const std::size_t> features) {
  const Counts total = count_labels(d, rows);
  std::optional<Split> best;
  std::vector<std::pair<double, Label>> column(rows.size());
  for (auto f : features) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = {d.at(rows[i], f), d.label(rows[i])};
    std::sort(column.begin(), column.end());
    double left_maj = 0.0, left_min = 0.0;
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      (column[i].second == Label::minority ? left_min : left_maj) += 1.0;
      const double lo = column[i].first;
      const double hi = column[i + 1].first;
      if (!(lo < hi)) continue;
      const double score = gini_score(left_maj, left_min) +
                           gini_score(total.majority - left_maj, total.minority - left_min);
      if (!best || score > best->score) {
        double mid = lo + (hi - lo) * 0.5;
        if (!(mid < hi)) mid = lo;
        best = Split{f, mid, score};
      }
    }
  }
  return best;
}

double ForestModel::predict_proba(std::span<const double> x) const {
  if (x.size() != n_features) throw std::invalid_argument("point dimension does not match model");
  if (degenerate) return constant_label == Label::minority ? 1.0 : 0.0;
  std::size_t minority = 0;
  for (const auto& t : trees) minority += t.vote(x) == Label::minority ? 1 : 0;
  return static_cast<double>(minority) / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::predict_proba(const Dataset& x) const {
  std::vector<double> out;
  out.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(predict_proba(x.row(i)));
  return out;
}

std::vector<Label> ForestModel::predict(const Dataset& x) const {
  std::vector<Label> out;
  out.reserve(x.rows());
  for (double p : predict_proba(x)) out.push_back(p >= 0.5 ? Label::minority : Label::majority);
  return out;
}

void ForestModel::dump(std::ostream& out) const {
  out << "imbal-forest 1\n";
  out << "trees " << trees.size() << " features " << n_features << " mtry " << mtry << '\n';
  if (degenerate) {
    out << "constant " << (constant_label == Label::minority ? "minority" : "majority") << '\n';
  }
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto& nodes = trees[t].nodes;
    out << "tree " << t << " nodes " << nodes.size() << '\n';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (n.feature < 0) {
        out << i << " leaf " << n.count_majority << ' ' << n.count_minority << '\n';
      } else {
        out << i << " split " << n.feature << ' ' << format_real(n.threshold) << ' ' << n.left
            << ' ' << n.right << '\n';
      }
    }
  }
}

ForestModel train_forest(const Dataset& d, const ForestConfig& cfg) {
  if (d.rows() < 2) throw std::invalid_argument("forest training needs at least 2 instances");
  if (cfg.n_trees < 1) throw std::invalid_argument("forest needs at least one tree");
  const std::size_t p = d.cols();

  ForestModel model;
  model.n_features = p;
  const auto n_min = d.count(Label::minority);
  if (n_min == 0 || n_min == d.rows()) {
    model.degenerate = true;
    model.constant_label = n_min == 0 ? Label::majority : Label::minority;
    return model;
  }

  auto check_mtry = [p](std::size_t m) {
    if (m < 1 || m > p) {
      throw std::invalid_argument("mtry = " + std::to_string(m) + " outside [1, " +
                                  std::to_string(p) + "]");
    }
  };

  std::size_t mtry = cfg.mtry.value_or(std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p))))));
  if (cfg.mtry_grid) {
    std::vector<std::size_t> grid = *cfg.mtry_grid;
    if (grid.empty()) {
      for (std::size_t m = 1; m <= std::min<std::size_t>(7, p); ++m) grid.push_back(m);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::optional<Grown> best;
    std::size_t best_mtry = 0;
    for (auto m : grid) {
      check_mtry(m);
      auto g = grow_forest(d, cfg, m);
      const double acc = g.oob_accuracy.value_or(0.0);
      if (!best || acc > best->oob_accuracy.value_or(0.0)) {
        best = std::move(g);
        best_mtry = m;
      }
    }
    model.trees = std::move(best->trees);
    model.oob_accuracy = best->oob_accuracy;
    model.mtry = best_mtry;
    return model;
  }

  check_mtry(mtry);
  auto g = grow_forest(d, cfg, mtry);
  model.trees = std::move(g.trees);
  model.oob_accuracy = g.oob_accuracy;
  model.mtry = mtry;
  return model;
}

}  // namespace imbal
