#include "imbal/resample.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "imbal/error.hpp"
#include "imbal/random.hpp"

namespace imbal {

namespace {

constexpr std::array<std::string_view, 12> kNames = {
    "Original",  "RUS",       "ROS",       "SMOTE", "SMOTE+OSS", "SMOTE+CNN",
    "SMOTE+ENN", "SMOTE+TL",  "CNN",       "ENN",   "TL",        "OSS",
};

Rng stream(const ResampleConfig& cfg, StrategyId id) {
  return Rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(id)}));
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void require_both_classes(const Dataset& d, std::string_view method) {
  if (d.count(Label::minority) == 0 || d.count(Label::majority) == 0) {
    throw DataError(std::string(method) + " needs instances of both classes");
  }
}

}  // namespace

std::string_view strategy_name(StrategyId id) { return kNames[static_cast<std::size_t>(id)]; }

std::optional<StrategyId> parse_strategy(std::string_view text) {
  auto canon = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      if (c == '-' || c == '_' || c == ' ') c = '+';
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
  };
  const auto wanted = canon(text);
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (canon(kNames[i]) == wanted) return static_cast<StrategyId>(i);
  }
  if (wanted == "none") return StrategyId::original;
  return std::nullopt;
}

Resampled rus(const Dataset& d, const ResampleConfig& cfg) {
  const double share = cfg.minority_share;
  if (!(share > 0.0 && share < 1.0)) throw std::invalid_argument("minority share must lie in (0, 1)");
  const auto n_min = d.count(Label::minority);
  const auto n_maj = d.count(Label::majority);
  if (n_min == 0 || static_cast<double>(n_min) / static_cast<double>(d.rows()) >= share) {
    return {d, true};
  }
  const auto target = static_cast<std::size_t>(
      std::ceil(static_cast<double>(n_min) * (1.0 - share) / share - 1e-9));
  if (target >= n_maj) return {d, true};

  auto rng = stream(cfg, StrategyId::rus);
  auto majority = d.indices_of(Label::majority);
  // Partial Fisher-Yates: the first `target` slots become a uniform sample.
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = i + rng.below(majority.size() - i);
    std::swap(majority[i], majority[j]);
  }
  majority.resize(target);
  auto keep = d.indices_of(Label::minority);
  keep.insert(keep.end(), majority.begin(), majority.end());
  return {d.subset(sorted(std::move(keep))), false};
}

Dataset ros(const Dataset& d, const ResampleConfig& cfg) {
  if (cfg.perc_over < 100) throw std::invalid_argument("ROS needs perc_over >= 100");
  const auto minority = d.indices_of(Label::minority);
  if (minority.empty()) throw DataError("ROS needs at least one minority instance");

  auto rng = stream(cfg, StrategyId::ros);
  const std::size_t copies = static_cast<std::size_t>(cfg.perc_over / 100) * minority.size();
  std::vector<double> values = d.values();
  std::vector<Label> labels = d.labels();
  values.reserve(values.size() + copies * d.cols());
  for (std::size_t c = 0; c < copies; ++c) {
    const auto r = d.row(minority[rng.below(minority.size())]);
    values.insert(values.end(), r.begin(), r.end());
    labels.push_back(Label::minority);
  }
  return d.with_rows(std::move(values), std::move(labels));
}

Dataset smote(const Dataset& d, const ResampleConfig& cfg) {
  if (cfg.perc_over < 0) throw std::invalid_argument("perc_over must be non-negative");
  if (cfg.k_smote < 1) throw std::invalid_argument("SMOTE needs k >= 1");
  const auto minority = d.indices_of(Label::minority);
  if (minority.size() < 2) {
    throw DataError("SMOTE needs at least 2 minority instances; use ROS instead");
  }

  const MinMaxScaler scaler(d);
  std::vector<double> norm;
  norm.reserve(minority.size() * d.cols());
  for (auto i : minority) {
    const auto r = scaler.transform(d.row(i));
    norm.insert(norm.end(), r.begin(), r.end());
  }
  const NeighborIndex index(std::move(norm), d.cols(),
                            std::vector<Label>(minority.size(), Label::minority));

  const std::size_t k = std::min(cfg.k_smote, minority.size() - 1);
  const std::size_t per_instance = static_cast<std::size_t>(cfg.perc_over / 100);
  auto rng = stream(cfg, StrategyId::smote);

  std::vector<double> values = d.values();
  std::vector<Label> labels = d.labels();
  values.reserve(values.size() + per_instance * minority.size() * d.cols());
  for (std::size_t a = 0; a < minority.size(); ++a) {
    if (per_instance == 0) break;
    const auto nn = index.neighbors_of(a, k);
    const auto x = d.row(minority[a]);
    for (std::size_t s = 0; s < per_instance; ++s) {
      const auto y = d.row(minority[nn[rng.below(k)].index]);
      const double gap = rng.uniform();
      for (std::size_t j = 0; j < d.cols(); ++j) values.push_back(x[j] + gap * (y[j] - x[j]));
      labels.push_back(Label::minority);
    }
  }
  return d.with_rows(std::move(values), std::move(labels));
}

Dataset cnn(const Dataset& d, const ResampleConfig& cfg) {
  require_both_classes(d, "CNN");
  if (cfg.k_cnn < 1) throw std::invalid_argument("CNN needs k >= 1");
  const auto index = NeighborIndex::from_dataset(d);
  auto rng = stream(cfg, StrategyId::cnn);

  auto majority = d.indices_of(Label::majority);
  std::vector<std::size_t> store = d.indices_of(Label::minority);
  const std::size_t first = rng.below(majority.size());
  store.push_back(majority[first]);
  majority.erase(majority.begin() + static_cast<std::ptrdiff_t>(first));
  rng.shuffle(std::span(majority));

  std::vector<bool> in_store(d.rows(), false);
  for (auto i : store) in_store[i] = true;

  if (cfg.k_cnn == 1) {
    // Each candidate remembers its nearest store member among the first
    // `seen` store entries; later passes only scan newly added members.
    struct Nearest {
      double d2 = std::numeric_limits<double>::infinity();
      std::size_t index = 0;
      std::size_t seen = 0;
    };
    std::vector<Nearest> nearest(d.rows());
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto c : majority) {
        if (in_store[c]) continue;
        auto& nc = nearest[c];
        for (; nc.seen < store.size(); ++nc.seen) {
          const auto e = store[nc.seen];
          const double d2 = index.squared_distance(c, e);
          if (std::tie(d2, e) < std::tie(nc.d2, nc.index)) {
            nc.d2 = d2;
            nc.index = e;
          }
        }
        if (d.label(nc.index) != Label::majority) {
          store.push_back(c);
          in_store[c] = true;
          changed = true;
        }
      }
    }
  } else {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto c : majority) {
        if (in_store[c]) continue;
        auto sorted_store = sorted(store);
        const auto sub = index.subset(sorted_store);
        const auto k = std::min(cfg.k_cnn, sub.size());
        if (sub.classify(index.point(c), k) != Label::majority) {
          store.push_back(c);
          in_store[c] = true;
          changed = true;
        }
      }
    }
  }
  return d.subset(sorted(std::move(store)));
}

Dataset enn(const Dataset& d, const ResampleConfig& cfg, bool clean_both_classes) {
  if (cfg.k_enn < 1) throw std::invalid_argument("ENN needs k >= 1");
  if (d.rows() < cfg.k_enn + 1) {
    throw DataError("ENN needs more than k = " + std::to_string(cfg.k_enn) + " instances");
  }
  const auto index = NeighborIndex::from_dataset(d);
  std::vector<std::size_t> keep;
  keep.reserve(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const bool wrong = index.classify(index.point(i), cfg.k_enn, i) != d.label(i);
    const bool removable = clean_both_classes || d.label(i) == Label::majority;
    if (!(wrong && removable)) keep.push_back(i);
  }
  return d.subset(keep);
}

std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const NeighborIndex& index) {
  const std::size_t n = index.size();
  std::vector<std::pair<std::size_t, std::size_t>> links;
  if (n < 2) return links;
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = index.squared_distance(i, j);
      nearest[i] = std::min(nearest[i], d2);
      nearest[j] = std::min(nearest[j], d2);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (index.label(i) == index.label(j)) continue;
      const double d2 = index.squared_distance(i, j);
      if (d2 == nearest[i] && d2 == nearest[j]) links.emplace_back(i, j);
    }
  }
  return links;
}

std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const Dataset& d) {
  return tomek_links(NeighborIndex::from_dataset(d));
}

Dataset tl(const Dataset& d, bool remove_both) {
  const auto links = tomek_links(d);
  std::vector<bool> drop(d.rows(), false);
  for (const auto& [a, b] : links) {
    for (auto i : {a, b}) {
      if (remove_both || d.label(i) == Label::majority) drop[i] = true;
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (!drop[i]) keep.push_back(i);
  }
  return d.subset(keep);
}

Dataset oss(const Dataset& d, const ResampleConfig& cfg) {
  require_both_classes(d, "OSS");
  const auto index = NeighborIndex::from_dataset(d);
  auto rng = stream(cfg, StrategyId::oss);

  const auto majority = d.indices_of(Label::majority);
  const std::size_t seed_point = majority[rng.below(majority.size())];
  auto base = d.indices_of(Label::minority);
  base.push_back(seed_point);
  base = sorted(std::move(base));

  const auto condensed = index.subset(base);
  std::vector<std::size_t> kept = base;
  for (auto c : majority) {
    if (c == seed_point) continue;
    if (condensed.classify(index.point(c), 1) != Label::majority) kept.push_back(c);
  }
  kept = sorted(std::move(kept));

  const auto links = tomek_links(index.subset(kept));
  std::vector<bool> drop(kept.size(), false);
  for (const auto& [a, b] : links) {
    for (auto i : {a, b}) {
      if (d.label(kept[i]) == Label::majority) drop[i] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (!drop[i]) out.push_back(kept[i]);
  }
  return d.subset(out);
}

Resampled apply(StrategyId strategy, const Dataset& d, const ResampleConfig& cfg) {
  switch (strategy) {
    case StrategyId::original: return {d, false};
    case StrategyId::rus: return rus(d, cfg);
    case StrategyId::ros: return {ros(d, cfg), false};
    case StrategyId::smote: return {smote(d, cfg), false};
    case StrategyId::smote_oss: return {oss(smote(d, cfg), cfg), false};
    case StrategyId::smote_cnn: return {cnn(smote(d, cfg), cfg), false};
    case StrategyId::smote_enn: return {enn(smote(d, cfg), cfg, true), false};
    case StrategyId::smote_tl: return {tl(smote(d, cfg), true), false};
    case StrategyId::cnn: return {cnn(d, cfg), false};
    case StrategyId::enn: return {enn(d, cfg, false), false};
    case StrategyId::tl: return {tl(d, false), false};
    case StrategyId::oss: return {oss(d, cfg), false};
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace imbal
