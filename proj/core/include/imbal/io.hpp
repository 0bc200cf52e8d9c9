#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imbal/eval.hpp"
#include "imbal/format.hpp"
#include "imbal/profile.hpp"
#include "imbal/recommend.hpp"
#include "imbal/rules.hpp"

namespace imbal {

/// Version stamped into every JSON document as "schema_version".
inline constexpr int kSchemaVersion = 1;

std::string profile_to_json(const Profile& p);
/// Accepts a profile document or a bare profile object.
Profile profile_from_json(std::string_view text);

std::string report_to_json(const ExperimentReport& r);
/// Flat rows: strategy,metric,repetition,fold,value.
void write_fold_csv(const ExperimentReport& r, std::ostream& out);

std::string rule_model_to_json(const RuleModel& m);
RuleModel rule_model_from_json(std::string_view text);

std::string recommendation_to_json(const Recommendation& rec, const RuleModel& model,
                                   const Profile& p);

/// CSV of labelled profiles for rule mining. Required columns (any order,
/// case-insensitive): instances, attributes, ir, bl, ovl, best. Other
/// columns (e.g. name) are ignored.
std::vector<std::pair<Profile, StrategyId>> read_labelled_profiles(std::istream& in);

}  // namespace imbal
