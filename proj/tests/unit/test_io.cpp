#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "imbal/error.hpp"
#include "imbal/io.hpp"
#include "imbal/random.hpp"

using namespace imbal;
using Json = nlohmann::ordered_json;

namespace {

bool same_real(double a, double b) {
  if (std::isnan(a)) return std::isnan(b);
  return a == b;
}

bool same_rules(const RuleModel& a, const RuleModel& b) {
  if (a.name != b.name || a.provenance != b.provenance || a.rules.size() != b.rules.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const auto& x = a.rules[i];
    const auto& y = b.rules[i];
    if (x.antecedent != y.antecedent || x.consequent != y.consequent) return false;
    const auto& m = x.measures;
    const auto& n = y.measures;
    if (!same_real(m.support, n.support) || !same_real(m.confidence, n.confidence) ||
        !same_real(m.lift, n.lift) || !same_real(m.leverage, n.leverage) ||
        !same_real(m.conviction, n.conviction)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("real formatting") {
  CHECK(format_real(0.1 + 0.2) == "0.3");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(1e21) == "1e+21");
  CHECK(round_real(2.0 / 3.0) == 0.666666666667);
  Rng gen(6);
  for (int i = 0; i < 1000; ++i) {
    const double v = (gen.uniform() - 0.5) * std::pow(10.0, static_cast<double>(gen.below(20)) - 10);
    CHECK(round_real(round_real(v)) == round_real(v));
    CHECK(format_real(round_real(v)) == format_real(v));
  }
}

TEST_CASE("profile documents") {
  Profile p;
  p.n_instances = 336;
  p.n_attributes = 7;
  p.imbalance_ratio = 8.6;
  p.borderline_pct = 100.0 / 7.0;
  p.overlap_pct = 45;
  p.minority_label = "positive";
  const auto text = profile_to_json(p);
  const auto j = Json::parse(text);
  CHECK(j["schema_version"] == 1);
  CHECK(j["kind"] == "profile");
  CHECK(j["profile"]["borderline_pct"].get<double>() == 14.2857142857);

  const auto back = profile_from_json(text);
  CHECK(back.n_instances == 336);
  CHECK(back.minority_label == "positive");
  CHECK(back.borderline_pct == round_real(p.borderline_pct));
  CHECK(profile_to_json(back) == text);
  CHECK(profile_from_json(j["profile"].dump()).imbalance_ratio == 8.6);
  CHECK_THROWS_AS(profile_from_json("{ nope"), DataError);
}

TEST_CASE("rule model documents keep infinities and missing supports") {
  for (const auto& model : {builtin_iba_model(), builtin_overall_model()}) {
    const auto text = rule_model_to_json(model);
    const auto back = rule_model_from_json(text);
    CHECK(same_rules(model, back));
    CHECK(rule_model_to_json(back) == text);
    const auto j = Json::parse(text);
    CHECK(j["kind"] == "rule_model");
    CHECK(j["rules"][0]["antecedent"][0]["lower"] == "-inf");
    CHECK(j["rules"][0]["measures"]["support"].is_null());
    CHECK(j["rules"][0]["text"] == model.rules[0].to_string());
  }

  RuleModel m;
  m.name = "mined";
  m.provenance = "test";
  Rule r;
  r.antecedent = {{Feature::overlap, {27.2, std::numeric_limits<double>::infinity(), true, true}}};
  r.consequent = StrategyId::smote_cnn;
  r.measures = {0.125, 1.0, 2.5, 0.05, std::numeric_limits<double>::infinity()};
  m.rules.push_back(r);
  const auto text = rule_model_to_json(m);
  CHECK(text.find("\"conviction\": \"inf\"") != std::string::npos);
  CHECK(same_rules(rule_model_from_json(text), m));

  auto j = Json::parse(text);
  j["schema_version"] = 2;
  CHECK_THROWS_AS(rule_model_from_json(j.dump()), DataError);
  CHECK_THROWS_AS(rule_model_from_json(profile_to_json(Profile{})), DataError);
}

TEST_CASE("recommendation documents") {
  const auto model = builtin_overall_model();
  const auto p = *find_reference_dataset("ecoli3");
  const auto rec = recommend(p.profile, model);
  const auto j = Json::parse(recommendation_to_json(rec, model, p.profile));
  CHECK(j["kind"] == "recommendation");
  CHECK(j["strategy"] == "Original");
  CHECK(j["model"] == "builtin-overall");
  CHECK(j["fallback"] == false);
  CHECK(j["matched_rules"][0]["index"] == 0);
  CHECK(j["matched_rules"][0]["rule"] == model.rules[0].to_string());
}

TEST_CASE("labelled profile tables") {
  std::istringstream in(
      "name,IR,#Attributes,BL%,OVL%,#Instances,best\n"
      "a,8.6,7,14,45,336,Original\n"
      "\n"
      "b,54.55,40,5.2,93,2500,smote-tl\n");
  const auto rows = read_labelled_profiles(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first.n_instances == 336);
  CHECK(rows[0].first.imbalance_ratio == 8.6);
  CHECK(rows[0].second == StrategyId::original);
  CHECK(rows[1].second == StrategyId::smote_tl);

  std::istringstream missing("ir,bl,ovl,instances,best\n1,2,3,4,ros\n");
  CHECK_THROWS_AS(read_labelled_profiles(missing), DataError);
  std::istringstream bad("ir,bl,ovl,instances,attributes,best\n1,2,3,4,5,magic\n");
  CHECK_THROWS_AS(read_labelled_profiles(bad), DataError);
  std::istringstream text("ir,bl,ovl,instances,attributes,best\n1,x,3,4,5,ros\n");
  CHECK_THROWS_AS(read_labelled_profiles(text), DataError);
}

TEST_CASE("experiment reports") {
  SynthSpec s;
  s.n = 100;
  s.ir_target = 4;
  s.seed = 3;
  ExperimentConfig cfg;
  cfg.strategies = {StrategyId::original, StrategyId::ros};
  cfg.folds = 3;
  cfg.repeats = 2;
  cfg.forest.n_trees = 5;
  const auto rep = run_experiment(make_imbalanced(s), cfg);
  const auto j = Json::parse(report_to_json(rep));
  CHECK(j["schema_version"] == 1);
  CHECK(j["kind"] == "experiment_report");
  CHECK(j["protocol"]["blocks"] == "metric_repetition");
  CHECK(j["strategies"].size() == 2);
  CHECK(j["strategies"][1]["name"] == "ROS");
  CHECK(j["results"].size() == 12);
  CHECK(j["folds"].size() == 6);
  CHECK(j["statistics"]["n_blocks"] == 16);
  CHECK(j["best_strategy"] == std::string(strategy_name(rep.best)));

  std::ostringstream csv;
  write_fold_csv(rep, csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "strategy,metric,repetition,fold,value");
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 12 * report_field_names().size());
}
