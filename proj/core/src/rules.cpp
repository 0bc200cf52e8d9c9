#include "imbal/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "imbal/format.hpp"

namespace imbal {

namespace {

std::string bound_text(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return format_real(v);
}

bool contains_all(const ItemSet& sorted_transaction, const ItemSet& items) {
  return std::includes(sorted_transaction.begin(), sorted_transaction.end(), items.begin(),
                       items.end());
}

// Items of the meta-feature base: feature f, bin b -> f * 16 + b; the
// strategy item -> 5 * 16 + strategy. Ascending ids follow kFeatures order.
constexpr Item kStride = 16;
constexpr Item kBestKind = 5;

}  // namespace

bool Interval::contains(double x) const noexcept {
  const bool above = lower_open ? x > lower : x >= lower;
  const bool below = upper_open ? x < upper : x <= upper;
  return above && below;
}

std::string Interval::to_string() const {
  return std::string(lower_open ? "(" : "[") + bound_text(lower) + "-" + bound_text(upper) +
         (upper_open ? ")" : "]");
}

std::vector<Interval> equal_width_bins(double min, double max, std::size_t k) {
  if (!(min < max)) throw std::invalid_argument("equal-width bins need min < max");
  if (k < 1) throw std::invalid_argument("at least one bin required");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double width = (max - min) / static_cast<double>(k);
  std::vector<Interval> bins;
  double lower = -inf;
  for (std::size_t i = 1; i <= k; ++i) {
    const bool last = i == k;
    const double upper = last ? inf : min + static_cast<double>(i) * width;
    bins.push_back({lower, upper, true, last});
    lower = upper;
  }
  return bins;
}

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::instances: return "#Instances";
    case Feature::attributes: return "#Attributes";
    case Feature::imbalance_ratio: return "IR";
    case Feature::borderline: return "BL%";
    case Feature::overlap: return "OVL%";
  }
  return "?";
}

std::optional<Feature> parse_feature(std::string_view text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "#instances" || t == "instances" || t == "n_instances" || t == "#inst") {
    return Feature::instances;
  }
  if (t == "#attributes" || t == "attributes" || t == "n_attributes" || t == "#attrib") {
    return Feature::attributes;
  }
  if (t == "ir" || t == "imbalance_ratio") return Feature::imbalance_ratio;
  if (t == "bl%" || t == "bl" || t == "borderline_pct") return Feature::borderline;
  if (t == "ovl%" || t == "ovl" || t == "overlap_pct") return Feature::overlap;
  return std::nullopt;
}

double feature_value(const Profile& p, Feature f) {
  switch (f) {
    case Feature::instances: return static_cast<double>(p.n_instances);
    case Feature::attributes: return static_cast<double>(p.n_attributes);
    case Feature::imbalance_ratio: return p.imbalance_ratio;
    case Feature::borderline: return p.borderline_pct;
    case Feature::overlap: return p.overlap_pct;
  }
  return 0.0;
}

std::vector<FrequentItemset> apriori(const std::vector<ItemSet>& transactions, double min_support) {
  if (!(min_support > 0.0 && min_support <= 1.0)) {
    throw std::invalid_argument("min_support must lie in (0, 1]");
  }
  std::vector<FrequentItemset> out;
  const std::size_t n = transactions.size();
  if (n == 0) return out;

  std::vector<ItemSet> base;
  base.reserve(n);
  for (auto t : transactions) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    base.push_back(std::move(t));
  }
  const double nd = static_cast<double>(n);
  auto frequent = [&](std::size_t count) {
    return static_cast<double>(count) >= min_support * nd - 1e-9;
  };

  std::map<Item, std::size_t> singles;
  for (const auto& t : base) {
    for (auto i : t) ++singles[i];
  }
  std::vector<FrequentItemset> level;
  for (const auto& [item, count] : singles) {
    if (frequent(count)) level.push_back({{item}, count, static_cast<double>(count) / nd});
  }

  while (!level.empty()) {
    out.insert(out.end(), level.begin(), level.end());
    std::set<ItemSet> known;
    for (const auto& f : level) known.insert(f.items);

    // Join itemsets sharing all but the last item; prune candidates with an
    // infrequent subset (downward closure).
    std::vector<ItemSet> candidates;
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        const auto& x = level[a].items;
        const auto& y = level[b].items;
        if (!std::equal(x.begin(), x.end() - 1, y.begin(), y.end() - 1)) break;
        ItemSet cand = x;
        cand.push_back(y.back());
        bool ok = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && ok; ++drop) {
          ItemSet sub;
          for (std::size_t i = 0; i < cand.size(); ++i) {
            if (i != drop) sub.push_back(cand[i]);
          }
          ok = known.contains(sub);
        }
        if (ok) candidates.push_back(std::move(cand));
      }
    }

    std::vector<FrequentItemset> next;
    for (auto& cand : candidates) {
      std::size_t count = 0;
      for (const auto& t : base) count += contains_all(t, cand) ? 1 : 0;
      if (frequent(count)) next.push_back({std::move(cand), count, static_cast<double>(count) / nd});
    }
    level = std::move(next);
  }
  return out;
}

std::vector<AssociationRule> generate_rules(const std::vector<FrequentItemset>& frequents,
                                            double min_confidence,
                                            const std::function<bool(Item)>& is_consequent) {
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw std::invalid_argument("min_confidence must lie in [0, 1]");
  }
  std::map<ItemSet, const FrequentItemset*> lookup;
  for (const auto& f : frequents) lookup[f.items] = &f;

  std::vector<AssociationRule> rules;
  for (const auto& f : frequents) {
    if (f.items.size() < 2) continue;
    for (Item c : f.items) {
      if (!is_consequent(c)) continue;
      ItemSet antecedent;
      for (Item i : f.items) {
        if (i != c) antecedent.push_back(i);
      }
      const auto a_it = lookup.find(antecedent);
      const auto c_it = lookup.find(ItemSet{c});
      if (a_it == lookup.end() || c_it == lookup.end()) {
        throw std::invalid_argument("frequent itemset list is not downward closed");
      }
      const auto& ant = *a_it->second;
      const auto& con = *c_it->second;
      const double confidence = static_cast<double>(f.count) / static_cast<double>(ant.count);
      if (confidence < min_confidence) continue;

      RuleMeasures m;
      m.support = f.support;
      m.confidence = confidence;
      m.lift = confidence / con.support;
      m.leverage = f.support - ant.support * con.support;
      m.conviction = f.count == ant.count ? std::numeric_limits<double>::infinity()
                                          : (1.0 - con.support) / (1.0 - confidence);
      rules.push_back({std::move(antecedent), ItemSet{c}, m});
    }
  }
  return rules;
}

TransactionBase to_transactions(std::span<const std::pair<Profile, StrategyId>> labelled,
                                std::size_t k) {
  if (labelled.size() < 2) throw std::invalid_argument("at least 2 labelled profiles required");
  TransactionBase base;
  for (std::size_t f = 0; f < kFeatures.size(); ++f) {
    double lo = feature_value(labelled.front().first, kFeatures[f]);
    double hi = lo;
    for (const auto& [p, s] : labelled) {
      lo = std::min(lo, feature_value(p, kFeatures[f]));
      hi = std::max(hi, feature_value(p, kFeatures[f]));
    }
    base.bins[f] = lo < hi ? equal_width_bins(lo, hi, k) : std::vector<Interval>{Interval{}};
  }
  for (const auto& [p, s] : labelled) {
    Transaction t;
    t.best = s;
    for (std::size_t f = 0; f < kFeatures.size(); ++f) {
      const double v = feature_value(p, kFeatures[f]);
      const auto& bins = base.bins[f];
      const auto it = std::find_if(bins.begin(), bins.end(),
                                   [v](const Interval& iv) { return iv.contains(v); });
      t.conditions.push_back({kFeatures[f], *it});
    }
    base.transactions.push_back(std::move(t));
  }
  return base;
}

std::string Rule::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i) out += " & ";
    out += std::string(feature_name(antecedent[i].feature)) + " = " + antecedent[i].interval.to_string();
  }
  out += " => ";
  out += strategy_name(consequent);
  return out;
}

std::vector<Rule> mine_rules(const TransactionBase& base, double min_support,
                             double min_confidence) {
  std::vector<ItemSet> encoded;
  for (const auto& t : base.transactions) {
    ItemSet items;
    for (std::size_t f = 0; f < kFeatures.size(); ++f) {
      const auto& bins = base.bins[f];
      const auto pos = std::find(bins.begin(), bins.end(), t.conditions[f].interval) - bins.begin();
      items.push_back(static_cast<Item>(f) * kStride + static_cast<Item>(pos));
    }
    items.push_back(kBestKind * kStride + static_cast<Item>(t.best));
    encoded.push_back(std::move(items));
  }

  const auto frequents = apriori(encoded, min_support);
  const auto raw = generate_rules(frequents, min_confidence,
                                  [](Item i) { return i / kStride == kBestKind; });
  std::vector<Rule> rules;
  for (const auto& r : raw) {
    Rule rule;
    rule.consequent = static_cast<StrategyId>(r.consequent.front() % kStride);
    for (Item i : r.antecedent) {
      const std::size_t f = i / kStride;
      rule.antecedent.push_back({kFeatures[f], base.bins[f][i % kStride]});
    }
    rule.measures = r.measures;
    rules.push_back(std::move(rule));
  }
  std::stable_sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    return std::tie(a.measures.confidence, a.measures.lift, a.measures.support) >
           std::tie(b.measures.confidence, b.measures.lift, b.measures.support);
  });
  return rules;
}

}  // namespace imbal
