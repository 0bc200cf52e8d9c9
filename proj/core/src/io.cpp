#include "imbal/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "imbal/error.hpp"

namespace imbal {

using Json = nlohmann::ordered_json;

namespace {

Json real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return round_real(v);
}

double read_real(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DataError("expected a number or \"inf\", found \"" + s + "\"");
  }
  return j.get<double>();
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed JSON document: ") + e.what());
  }
}

Json profile_json(const Profile& p) {
  Json j;
  j["n_instances"] = p.n_instances;
  j["n_attributes"] = p.n_attributes;
  j["imbalance_ratio"] = real(p.imbalance_ratio);
  j["borderline_pct"] = real(p.borderline_pct);
  j["overlap_pct"] = real(p.overlap_pct);
  j["minority_label"] = p.minority_label;
  return j;
}

Json measures_json(const RuleMeasures& m) {
  Json j;
  j["support"] = real(m.support);
  j["confidence"] = real(m.confidence);
  j["lift"] = real(m.lift);
  j["leverage"] = real(m.leverage);
  j["conviction"] = real(m.conviction);
  return j;
}

StrategyId strategy_from(const Json& j) {
  const auto name = j.get<std::string>();
  const auto s = parse_strategy(name);
  if (!s) throw DataError("unknown strategy '" + name + "'");
  return *s;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r\"");
    const auto e = cell.find_last_not_of(" \t\r\"");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

std::string profile_to_json(const Profile& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "profile";
  j["profile"] = profile_json(p);
  return j.dump(2) + "\n";
}

Profile profile_from_json(std::string_view text) {
  const Json doc = parse(text);
  const Json& j = doc.contains("profile") ? doc["profile"] : doc;
  try {
    Profile p;
    p.n_instances = j.at("n_instances").get<std::size_t>();
    p.n_attributes = j.at("n_attributes").get<std::size_t>();
    p.imbalance_ratio = read_real(j.at("imbalance_ratio"));
    p.borderline_pct = read_real(j.at("borderline_pct"));
    p.overlap_pct = read_real(j.at("overlap_pct"));
    if (j.contains("minority_label")) p.minority_label = j["minority_label"].get<std::string>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid profile document: ") + e.what());
  }
}

std::string report_to_json(const ExperimentReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "experiment_report";
  j["dataset"] = {{"n_instances", r.n_instances}, {"n_attributes", r.n_attributes}};
  j["protocol"] = {{"folds", r.folds},
                   {"repeats", r.repeats},
                   {"seed", r.seed},
                   {"iba_alpha", real(r.alpha)},
                   {"blocks", r.blocks == BlockMode::metric ? "metric" : "metric_repetition"}};

  const auto names = report_field_names();
  Json strategies = Json::array();
  for (const auto& s : r.summaries) {
    Json entry;
    entry["name"] = std::string(strategy_name(s.strategy));
    entry["average_rank"] = real(s.average_rank);
    Json metrics;
    for (std::size_t f = 0; f < names.size(); ++f) {
      metrics[std::string(names[f])] = {{"mean", real(s.fields[f].mean)}, {"sd", real(s.fields[f].sd)}};
    }
    entry["metrics"] = std::move(metrics);
    strategies.push_back(std::move(entry));
  }
  j["strategies"] = std::move(strategies);

  Json stats;
  stats["n_blocks"] = r.block_ranks.size();
  stats["ranked_metrics"] = Json::array();
  for (Metric m : kRankedMetrics) stats["ranked_metrics"].push_back(std::string(metric_name(m)));
  if (r.friedman) {
    stats["friedman_statistic"] = real(r.friedman->statistic);
    stats["friedman_df"] = r.friedman->df;
    stats["friedman_p"] = real(r.friedman->p_value);
  }
  if (r.nemenyi_cd) {
    stats["nemenyi_alpha"] = 0.05;
    stats["nemenyi_cd"] = real(*r.nemenyi_cd);
  }
  j["statistics"] = std::move(stats);
  j["best_strategy"] = std::string(strategy_name(r.best));

  Json folds = Json::array();
  for (const auto& f : r.fold_records) {
    folds.push_back({{"repetition", f.repetition},
                     {"fold", f.fold},
                     {"test_size", f.test_indices.size()},
                     {"test_indices", f.test_indices}});
  }
  j["folds"] = std::move(folds);

  Json results = Json::array();
  for (const auto& res : r.results) {
    Json e;
    e["repetition"] = res.repetition;
    e["fold"] = res.fold;
    e["strategy"] = std::string(strategy_name(res.strategy));
    e["train_size"] = res.train_size;
    e["resampled_size"] = res.resampled_size;
    e["resampled_minority"] = res.resampled_minority;
    e["test_size"] = res.test_size;
    e["resample_unchanged"] = res.resample_unchanged;
    e["degeneracy_flags"] = res.metrics.degeneracy;
    for (std::size_t f = 0; f < names.size(); ++f) {
      e[std::string(names[f])] = real(report_field(res.metrics, f));
    }
    results.push_back(std::move(e));
  }
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

void write_fold_csv(const ExperimentReport& r, std::ostream& out) {
  out << "strategy,metric,repetition,fold,value\n";
  const auto names = report_field_names();
  for (const auto& res : r.results) {
    for (std::size_t f = 0; f < names.size(); ++f) {
      out << strategy_name(res.strategy) << ',' << names[f] << ',' << res.repetition << ','
          << res.fold << ',' << format_real(report_field(res.metrics, f)) << '\n';
    }
  }
}

std::string rule_model_to_json(const RuleModel& m) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "rule_model";
  j["name"] = m.name;
  j["provenance"] = m.provenance;
  Json rules = Json::array();
  for (const auto& r : m.rules) {
    Json e;
    Json ant = Json::array();
    for (const auto& c : r.antecedent) {
      ant.push_back({{"feature", std::string(feature_name(c.feature))},
                     {"lower", real(c.interval.lower)},
                     {"upper", real(c.interval.upper)},
                     {"lower_open", c.interval.lower_open},
                     {"upper_open", c.interval.upper_open}});
    }
    e["antecedent"] = std::move(ant);
    e["consequent"] = std::string(strategy_name(r.consequent));
    e["measures"] = measures_json(r.measures);
    e["text"] = r.to_string();
    rules.push_back(std::move(e));
  }
  j["rules"] = std::move(rules);
  return j.dump(2) + "\n";
}

RuleModel rule_model_from_json(std::string_view text) {
  const Json j = parse(text);
  try {
    if (j.value("kind", std::string("rule_model")) != "rule_model") {
      throw DataError("document is not a rule model");
    }
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) {
      throw DataError("unsupported rule model schema_version " + std::to_string(version));
    }
    RuleModel m;
    m.name = j.value("name", std::string("user"));
    m.provenance = j.value("provenance", std::string());
    for (const auto& e : j.at("rules")) {
      Rule r;
      for (const auto& c : e.at("antecedent")) {
        const auto fname = c.at("feature").get<std::string>();
        const auto f = parse_feature(fname);
        if (!f) throw DataError("unknown rule feature '" + fname + "'");
        Interval iv;
        iv.lower = read_real(c.at("lower"));
        iv.upper = read_real(c.at("upper"));
        iv.lower_open = c.value("lower_open", true);
        iv.upper_open = c.value("upper_open", false);
        r.antecedent.push_back({*f, iv});
      }
      r.consequent = strategy_from(e.at("consequent"));
      const auto& mj = e.at("measures");
      r.measures.support = read_real(mj.value("support", Json(nullptr)));
      r.measures.confidence = read_real(mj.at("confidence"));
      r.measures.lift = read_real(mj.at("lift"));
      r.measures.leverage = read_real(mj.value("leverage", Json(nullptr)));
      r.measures.conviction = read_real(mj.value("conviction", Json(nullptr)));
      m.rules.push_back(std::move(r));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid rule model document: ") + e.what());
  }
}

std::string recommendation_to_json(const Recommendation& rec, const RuleModel& model,
                                   const Profile& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "recommendation";
  j["model"] = model.name;
  j["strategy"] = std::string(strategy_name(rec.strategy));
  j["fallback"] = rec.fallback;
  j["confidence"] = real(rec.confidence);
  j["lift"] = real(rec.lift);
  j["tied"] = Json::array();
  for (auto s : rec.tied) j["tied"].push_back(std::string(strategy_name(s)));
  Json matched = Json::array();
  for (auto i : rec.matched_rules) {
    const auto& r = model.rules.at(i);
    matched.push_back({{"index", i},
                       {"rule", r.to_string()},
                       {"consequent", std::string(strategy_name(r.consequent))},
                       {"measures", measures_json(r.measures)}});
  }
  j["matched_rules"] = std::move(matched);
  j["profile"] = profile_json(p);
  return j.dump(2) + "\n";
}

std::vector<std::pair<Profile, StrategyId>> read_labelled_profiles(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("labelled profile file is empty");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto name = lower(header[i]);
    if (const auto f = parse_feature(name)) {
      col[std::string(feature_name(*f))] = i;
    } else if (name == "best" || name == "strategy" || name == "best_strategy") {
      col["best"] = i;
    }
  }
  for (Feature f : kFeatures) {
    if (!col.contains(std::string(feature_name(f)))) {
      throw DataError("labelled profiles: missing column for " + std::string(feature_name(f)));
    }
  }
  if (!col.contains("best")) throw DataError("labelled profiles: missing 'best' column");

  std::vector<std::pair<Profile, StrategyId>> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    auto cell = [&](const std::string& key) -> const std::string& {
      const auto i = col.at(key);
      if (i >= cells.size()) throw DataError("row " + std::to_string(line_no) + ": too few fields");
      return cells[i];
    };
    auto number = [&](Feature f) {
      const auto& text = cell(std::string(feature_name(f)));
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (text.empty() || *end != '\0') {
        throw DataError("row " + std::to_string(line_no) + ": non-numeric " +
                        std::string(feature_name(f)) + " value '" + text + "'");
      }
      return v;
    };
    Profile p;
    p.n_instances = static_cast<std::size_t>(number(Feature::instances));
    p.n_attributes = static_cast<std::size_t>(number(Feature::attributes));
    p.imbalance_ratio = number(Feature::imbalance_ratio);
    p.borderline_pct = number(Feature::borderline);
    p.overlap_pct = number(Feature::overlap);
    const auto s = parse_strategy(cell("best"));
    if (!s) throw DataError("row " + std::to_string(line_no) + ": unknown strategy '" + cell("best") + "'");
    out.emplace_back(p, *s);
  }
  return out;
}

}  // namespace imbal
