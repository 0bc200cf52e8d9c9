#include "imbal/recommend.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace imbal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Condition upto(Feature f, double upper) { return {f, Interval{-kInf, upper, true, false}}; }
Condition between(Feature f, double lower, double upper) {
  return {f, Interval{lower, upper, true, false}};
}
Condition above(Feature f, double lower) { return {f, Interval{lower, kInf, true, true}}; }

Rule rule(std::vector<Condition> antecedent, StrategyId s, double conf, double lift, double lev,
          double conv) {
  Rule r;
  r.antecedent = std::move(antecedent);
  r.consequent = s;
  r.measures.confidence = conf;
  r.measures.lift = lift;
  r.measures.leverage = lev;
  r.measures.conviction = conv;
  // Support is not recorded for these rules.
  r.measures.support = std::numeric_limits<double>::quiet_NaN();
  return r;
}

constexpr auto IR = Feature::imbalance_ratio;
constexpr auto BL = Feature::borderline;
constexpr auto OVL = Feature::overlap;
constexpr auto INST = Feature::instances;
constexpr auto ATTR = Feature::attributes;

Profile reference(std::size_t n, std::size_t p, double ir, double bl, double ovl) {
  Profile out;
  out.n_instances = n;
  out.n_attributes = p;
  out.imbalance_ratio = ir;
  out.borderline_pct = bl;
  out.overlap_pct = ovl;
  out.minority_label = "positive";
  return out;
}

const std::array<ReferenceDataset, 40>& reference_table() {
  static const std::array<ReferenceDataset, 40> table = {{
      {"Newthyroid", reference(215, 5, 4.84, 4, 45), "KEEL"},
      {"Glass6", reference(214, 9, 6.38, 7, 73), "KEEL"},
      {"SUSY", reference(15000, 18, 7.69, 30, 87), "UCI"},
      {"GD2", reference(6000, 6, 7.74, 23, 69), "Scikit learn"},
      {"Yeast3", reference(1484, 8, 8.10, 10, 63), "KEEL"},
      {"Ecoli3", reference(336, 7, 8.6, 14, 45), "KEEL"},
      {"Page-blocks0", reference(5472, 10, 8.78, 8, 19), "KEEL"},
      {"Hill_Valley_with_Noise_Testing", reference(606, 100, 8.93, 24, 55), "UCI"},
      {"Ecoli-0-4-6_vs_5", reference(203, 6, 9.15, 7, 49), "KEEL"},
      {"GD15", reference(11000, 40, 9.36, 15, 44), "Scikit learn"},
      {"Vowel0", reference(988, 13, 9.97, 2, 68), "KEEL"},
      {"Glass-0-1-6_vs_2", reference(192, 9, 10.29, 18, 71), "KEEL"},
      {"Glass2", reference(214, 9, 11.59, 18, 71), "KEEL"},
      {"Infection", reference(4615, 15, 13.89, 14, 61), "ICU"},
      {"Ecoli4", reference(336, 7, 15.80, 3, 56), "KEEL"},
      {"Page-blocks-1-3-vs-4", reference(472, 10, 15.85, 1.7, 10), "KEEL"},
      {"Abalone-9-18", reference(731, 7, 16.40, 9, 62), "KEEL"},
      {"Glass5", reference(214, 9, 22.77, 7, 60), "KEEL"},
      {"Yeast-2-vs-8", reference(482, 8, 23.10, 4, 71), "KEEL"},
      {"GD3", reference(5500, 30, 24.70, 11, 91), "Scikit learn"},
      {"Yeast4", reference(1484, 8, 28.10, 6, 57), "KEEL"},
      {"Yeast5", reference(1484, 8, 32.73, 3, 48), "KEEL"},
      {"GD6", reference(1600, 25, 38.00, 7, 88), "Scikit learn"},
      {"Wineqlty-white-3-vs-7", reference(900, 11, 44, 4, 63), "KEEL"},
      {"Wineqlty-red-8_vs_6-7", reference(855, 11, 46.5, 5.7, 67), "KEEL"},
      {"GD1", reference(2500, 40, 54.55, 5.2, 93), "Scikit learn"},
      {"Wineqlty-white-3-9-vs-5", reference(1482, 11, 58.28, 3.77, 60), "KEEL"},
      {"GD4", reference(2500, 13, 59.00, 5, 76), "Scikit learn"},
      {"GD5", reference(2000, 5, 59.61, 4.55, 55), "Scikit learn"},
      {"GD7", reference(6000, 100, 60.85, 4.46, 96), "Scikit learn"},
      {"GD8", reference(3500, 15, 62.63, 4.7, 83), "Scikit learn"},
      {"GD9", reference(10000, 50, 62.69, 4.7, 94), "Scikit learn"},
      {"Abalone-20-vs-8-9-10", reference(1916, 7, 72.69, 2.71, 58), "KEEL"},
      {"GD10", reference(10100, 60, 72.72, 4, 95), "Scikit learn"},
      {"Poker-8-vs-6", reference(1477, 10, 85.88, 0.94, 78), "KEEL"},
      {"GD11", reference(3000, 3, 99.00, 3.3, 61), "Scikit learn"},
      {"Abalone19", reference(4174, 7, 129.44, 2, 59), "KEEL"},
      {"GD12", reference(6000, 20, 156.89, 2.2, 90), "Scikit learn"},
      {"GD13", reference(5000, 5, 165.66, 1.7, 66), "Scikit learn"},
      {"GD14", reference(10000, 60, 221.22, 1.43, 92), "Scikit learn"},
  }};
  return table;
}

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

bool matches(const Rule& r, const Profile& p) {
  return std::all_of(r.antecedent.begin(), r.antecedent.end(), [&](const Condition& c) {
    return c.interval.contains(feature_value(p, c.feature));
  });
}

Recommendation recommend(const Profile& p, const RuleModel& model) {
  if (model.rules.empty()) throw std::invalid_argument("rule model '" + model.name + "' is empty");

  struct Score {
    double confidence = -1.0;
    double lift = -kInf;
    std::size_t count = 0;
  };
  std::map<StrategyId, Score> scores;
  Recommendation out;
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const auto& r = model.rules[i];
    if (!matches(r, p)) continue;
    out.matched_rules.push_back(i);
    auto& s = scores[r.consequent];
    s.confidence = std::max(s.confidence, r.measures.confidence);
    s.lift = std::max(s.lift, r.measures.lift);
    ++s.count;
  }
  if (scores.empty()) {
    out.strategy = StrategyId::smote;
    out.fallback = true;
    return out;
  }

  auto key = [](const Score& s) { return std::make_tuple(s.confidence, s.lift, s.count); };
  // std::map iterates in StrategyId order, so the first maximum wins ties.
  auto best = scores.begin();
  for (auto it = std::next(scores.begin()); it != scores.end(); ++it) {
    if (key(it->second) > key(best->second)) best = it;
  }
  out.strategy = best->first;
  out.confidence = best->second.confidence;
  out.lift = best->second.lift;
  out.fallback = false;
  for (const auto& [id, s] : scores) {
    if (id != best->first && key(s) == key(best->second)) out.tied.push_back(id);
  }
  return out;
}

RuleModel builtin_iba_model() {
  RuleModel m;
  m.name = "builtin-iba";
  m.provenance = "reference rule model: best strategy by IBA (10 rules)";
  m.rules = {
      rule({upto(IR, 48), between(BL, 6.75, 12.56), above(OVL, 78.8)}, StrategyId::ros, 1.00,
           9.00, 0.03, 1.78),
      rule({upto(IR, 48), between(BL, 12.56, 18.38), between(OVL, 44.4, 61.6)},
           StrategyId::original, 1.00, 6.75, 0.03, 1.70),
      rule({upto(IR, 48), upto(BL, 6.75), between(OVL, 44.4, 61.6)}, StrategyId::smote_tl, 1.00,
           3.00, 0.02, 1.33),
      // The second condition comes without a feature name; its interval
      // is an OVL% bin.
      rule({upto(BL, 6.75), between(OVL, 61.6, 78.8)}, StrategyId::smote_cnn, 1.00, 1.64, 0.01,
           0.78),
      rule({between(IR, 48, 91), upto(BL, 6.75), between(OVL, 61.6, 78.8)}, StrategyId::smote,
           1.00, 1.64, 0.01, 0.78),
      rule({between(IR, 48, 91), upto(BL, 6.75), above(OVL, 78.8)}, StrategyId::ros, 1.00, 1.64,
           0.01, 0.78),
      rule({upto(INST, 3154), upto(IR, 48)}, StrategyId::smote, 1.00, 1.54, 0.05, 2.46),
      rule({upto(INST, 3007), upto(ATTR, 22), between(OVL, 61.6, 78.8)}, StrategyId::smote, 1.00,
           1.29, 0.02, 1.11),
      rule({upto(INST, 3007), between(OVL, 44.4, 61.6)}, StrategyId::smote, 1.00, 1.54, 0.03,
           1.41),
      rule({upto(ATTR, 22), upto(BL, 6.75)}, StrategyId::smote_oss, 1.00, 1.29, 0.02, 1.11),
  };
  return m;
}

RuleModel builtin_overall_model() {
  RuleModel m;
  m.name = "builtin-overall";
  m.provenance =
      "reference rule model: best strategy by significance over all metrics (10 rules)";
  m.rules = {
      rule({upto(IR, 48), between(BL, 12.56, 18.38)}, StrategyId::original, 1.00, 8.00, 0.04,
           1.75),
      rule({upto(IR, 48), between(BL, 6.75, 12.56), above(OVL, 78.8)}, StrategyId::ros, 1.00,
           5.00, 0.04, 1.60),
      rule({between(BL, 6.75, 12.56), between(OVL, 44.4, 61.6)}, StrategyId::smote, 1.00, 4.44,
           0.04, 1.55),
      rule({upto(IR, 48), upto(BL, 6.75), between(OVL, 44.4, 61.6)}, StrategyId::smote_tl, 1.00,
           4.44, 0.04, 1.55),
      rule({between(IR, 48, 91), above(OVL, 78.8)}, StrategyId::smote_tl, 1.00, 4.00, 0.04, 1.50),
      rule({between(IR, 134, 178)}, StrategyId::ros, 1.00, 2.86, 0.03, 1.30),
      rule({between(BL, 6.75, 12.56), above(OVL, 78.8)}, StrategyId::ros, 1.00, 2.86, 0.03, 1.30),
      rule({upto(INST, 3007), between(OVL, 44.4, 61.6)}, StrategyId::smote, 1.00, 1.48, 0.04,
           1.63),
      rule({upto(ATTR, 22), upto(BL, 6.75)}, StrategyId::smote_cnn, 1.00, 1.29, 0.02, 0.68),
      rule({between(IR, 48, 91), upto(ATTR, 22)}, StrategyId::smote_oss, 1.00, 1.29, 0.02, 0.68),
  };
  return m;
}

std::pair<RuleModel, RuleModel> builtin_models() {
  return {builtin_iba_model(), builtin_overall_model()};
}

std::optional<RuleModel> builtin_model(std::string_view name) {
  if (name == "builtin-iba") return builtin_iba_model();
  if (name == "builtin-overall") return builtin_overall_model();
  return std::nullopt;
}

std::span<const ReferenceDataset> reference_datasets() { return reference_table(); }

std::optional<ReferenceDataset> find_reference_dataset(std::string_view name) {
  const auto wanted = lower(name);
  for (const auto& r : reference_table()) {
    if (lower(r.name) == wanted) return r;
  }
  return std::nullopt;
}

}  // namespace imbal
