#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imbal/profile.hpp"
#include "imbal/resample.hpp"

namespace imbal {

/// Real interval printed as "(a-b]", with -inf/inf for unbounded ends.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool lower_open = true;
  bool upper_open = false;

  bool contains(double x) const noexcept;
  std::string to_string() const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// k equal-width intervals over [min, max]: (-inf, c1], (c1, c2], ...,
/// (c_{k-1}, inf). A value on a cut point falls in the lower interval.
std::vector<Interval> equal_width_bins(double min, double max, std::size_t k = 5);

/// Profile meta-features that appear in rule antecedents.
enum class Feature : std::uint8_t { instances, attributes, imbalance_ratio, borderline, overlap };
inline constexpr std::array<Feature, 5> kFeatures = {
    Feature::instances, Feature::attributes, Feature::imbalance_ratio, Feature::borderline,
    Feature::overlap,
};

/// "#Instances", "#Attributes", "IR", "BL%", "OVL%".
std::string_view feature_name(Feature f);
std::optional<Feature> parse_feature(std::string_view text);
double feature_value(const Profile& p, Feature f);

struct Condition {
  Feature feature = Feature::imbalance_ratio;
  Interval interval;
  friend bool operator==(const Condition&, const Condition&) = default;
};

// ---------------------------------------------------------------------------
// Generic frequent-itemset mining over integer items.

using Item = std::uint32_t;
using ItemSet = std::vector<Item>;  // strictly ascending

struct FrequentItemset {
  ItemSet items;
  std::size_t count = 0;
  double support = 0.0;
};

/// Level-wise Apriori. Returns every itemset whose support (fraction of
/// transactions containing it) is at least min_support, ordered by size and
/// then lexicographically. Transactions need not be sorted.
std::vector<FrequentItemset> apriori(const std::vector<ItemSet>& transactions, double min_support);

struct RuleMeasures {
  double support = 0.0;
  double confidence = 0.0;
  double lift = 0.0;
  double leverage = 0.0;
  double conviction = 0.0;  // +inf when confidence is 1
};

struct AssociationRule {
  ItemSet antecedent;
  ItemSet consequent;
  RuleMeasures measures;
};

/// Single-item-consequent rules A -> {c} from a complete frequent-itemset
/// list, for every c accepted by `is_consequent` and non-empty A, keeping
/// those with confidence >= min_confidence.
std::vector<AssociationRule> generate_rules(const std::vector<FrequentItemset>& frequents,
                                            double min_confidence,
                                            const std::function<bool(Item)>& is_consequent);

// ---------------------------------------------------------------------------
// Meta-feature transactions labelled with the best strategy.

struct Transaction {
  std::vector<Condition> conditions;  // one per feature, in kFeatures order
  StrategyId best = StrategyId::original;
};

struct TransactionBase {
  std::array<std::vector<Interval>, 5> bins;  // indexed like kFeatures
  std::vector<Transaction> transactions;
};

/// Bins each feature into `k` equal-width intervals over the observed range.
/// A feature that is constant across all profiles gets one unbounded interval.
TransactionBase to_transactions(std::span<const std::pair<Profile, StrategyId>> labelled,
                                std::size_t k = 5);

/// Antecedent conditions -> best strategy.
struct Rule {
  std::vector<Condition> antecedent;  // in kFeatures order
  StrategyId consequent = StrategyId::original;
  RuleMeasures measures;

  std::string to_string() const;
};

/// Apriori over the base, keeping rules whose consequent is the strategy
/// item. Ordered by confidence, lift and support (all descending).
std::vector<Rule> mine_rules(const TransactionBase& base, double min_support,
                             double min_confidence);

}  // namespace imbal
