#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imbal/profile.hpp"
#include "imbal/resample.hpp"
#include "imbal/rules.hpp"

namespace imbal {

struct RuleModel {
  std::string name;
  std::vector<Rule> rules;
  std::string provenance;
};

struct Recommendation {
  StrategyId strategy = StrategyId::smote;
  std::vector<std::size_t> matched_rules;  // indices into the model's rules
  double confidence = 0.0;
  double lift = 0.0;
  bool fallback = true;
  std::vector<StrategyId> tied;  // other strategies with an identical score
};

/// Raw-value containment of every antecedent condition.
bool matches(const Rule& rule, const Profile& p);

/// Groups matching rules by consequent and ranks strategies by highest
/// confidence, then highest lift, then number of matching rules, then
/// StrategyId order. No match falls back to SMOTE with `fallback` set.
Recommendation recommend(const Profile& p, const RuleModel& model);

/// Reference rule models: best strategy by IBA
/// ("builtin-iba") and by significance over all metrics ("builtin-overall").
/// Interval bounds and quality measures are stored verbatim, with their
/// two-decimal rounding.
RuleModel builtin_iba_model();
RuleModel builtin_overall_model();
std::pair<RuleModel, RuleModel> builtin_models();
std::optional<RuleModel> builtin_model(std::string_view name);

/// Characteristics of the 40 reference datasets.
struct ReferenceDataset {
  std::string_view name;
  Profile profile;
  std::string_view source;
};
std::span<const ReferenceDataset> reference_datasets();
std::optional<ReferenceDataset> find_reference_dataset(std::string_view name);

}  // namespace imbal
