#include "imbal_cli/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "imbal/dataset.hpp"
#include "imbal/error.hpp"
#include "imbal/eval.hpp"
#include "imbal/io.hpp"
#include "imbal/profile.hpp"
#include "imbal/recommend.hpp"
#include "imbal/resample.hpp"
#include "imbal/rules.hpp"

namespace imbal::cli {

namespace {

namespace fs = std::filesystem;

struct DataOptions {
  std::string path;
  std::string label_col;
  std::string minority;
  std::string format = "auto";

  void add_to(CLI::App& cmd, const std::string& what) {
    cmd.add_option("file", path, what)->required();
    cmd.add_option("--label-col", label_col, "label column of a CSV file (default: last column)");
    cmd.add_option("--minority", minority, "label value to treat as the minority class");
    cmd.add_option("--format", format, "input format")
        ->check(CLI::IsMember({"auto", "csv", "keel"}));
  }
};

bool is_keel(const DataOptions& o) {
  if (o.format != "auto") return o.format == "keel";
  const auto ext = fs::path(o.path).extension().string();
  return ext == ".dat" || ext == ".keel";
}

Dataset load(const DataOptions& o) {
  const std::optional<std::string> minority =
      o.minority.empty() ? std::nullopt : std::optional<std::string>(o.minority);
  if (is_keel(o)) return load_keel(o.path, minority);
  std::string label = o.label_col;
  if (label.empty()) {
    const auto header = csv_header(o.path);
    if (header.empty()) throw DataError("missing CSV header row");
    label = header.back();
  }
  return load_csv(o.path, label, minority);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write file: " + path);
  f << text;
  if (!f) throw DataError("write failed: " + path);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<StrategyId> parse_strategies(const std::string& text) {
  if (text == "all") return {kEvaluationStrategies.begin(), kEvaluationStrategies.end()};
  std::vector<StrategyId> out;
  for (const auto& name : split_list(text)) {
    const auto s = parse_strategy(name);
    if (!s) throw std::invalid_argument("unknown strategy '" + name + "'");
    if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
  }
  if (out.empty()) throw std::invalid_argument("no strategies given");
  return out;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  if (text == "auto") return {};
  std::vector<std::size_t> grid;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v == 0) {
      throw std::invalid_argument("bad --mtry-grid entry '" + item + "'");
    }
    grid.push_back(v);
  }
  if (grid.empty()) throw std::invalid_argument("empty --mtry-grid");
  return grid;
}

bool looks_like_json(const std::string& path) {
  if (fs::path(path).extension() == ".json") return true;
  std::ifstream in(path);
  char c = 0;
  while (in.get(c)) {
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
  }
  return false;
}

RuleModel load_model(const std::string& spec) {
  if (auto m = builtin_model(spec)) return *m;
  if (!fs::exists(spec)) {
    throw std::invalid_argument("unknown model '" + spec +
                                "' (expected builtin-iba, builtin-overall or a file)");
  }
  return rule_model_from_json(read_text(spec));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Imbalanced-data profiling, resampling, evaluation and strategy recommendation",
               "imbal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "imbal 0.1.0");

  // profile
  DataOptions profile_data;
  std::string profile_out;
  auto* profile_cmd = app.add_subcommand("profile", "Compute the meta-feature profile of a dataset");
  profile_data.add_to(*profile_cmd, "dataset (CSV or KEEL .dat)");
  profile_cmd->add_option("--out", profile_out, "output path (default: stdout)");

  // resample
  DataOptions resample_data;
  std::string resample_method, resample_out;
  ResampleConfig resample_cfg;
  auto* resample_cmd = app.add_subcommand("resample", "Apply one resampling strategy");
  resample_data.add_to(*resample_cmd, "dataset (CSV or KEEL .dat)");
  resample_cmd->add_option("--method", resample_method, "strategy, e.g. smote, rus, smote+tl")
      ->required();
  resample_cmd->add_option("--perc-over", resample_cfg.perc_over, "oversampling percentage")
      ->capture_default_str();
  resample_cmd->add_option("--minority-share", resample_cfg.minority_share,
                           "RUS target minority share")
      ->capture_default_str();
  resample_cmd->add_option("--k-smote", resample_cfg.k_smote, "SMOTE neighbour count")
      ->capture_default_str();
  resample_cmd->add_option("--k-enn", resample_cfg.k_enn, "ENN neighbour count")
      ->capture_default_str();
  resample_cmd->add_option("--seed", resample_cfg.seed, "random seed")->capture_default_str();
  resample_cmd->add_option("--out", resample_out, "output CSV (default: stdout)");

  // evaluate
  DataOptions eval_data;
  std::string eval_strategies = "all", eval_out, eval_csv, eval_grid, eval_blocks = "metric-repetition";
  std::size_t eval_mtry = 0, eval_max_depth = 0;
  ExperimentConfig eval_cfg;
  auto* eval_cmd = app.add_subcommand("evaluate", "Compare strategies under repeated stratified CV");
  eval_data.add_to(*eval_cmd, "dataset (CSV or KEEL .dat)");
  eval_cmd->add_option("--strategies", eval_strategies, "'all' or a comma-separated list")
      ->capture_default_str();
  eval_cmd->add_option("--folds", eval_cfg.folds, "folds per repetition")->capture_default_str();
  eval_cmd->add_option("--repeats", eval_cfg.repeats, "repetitions")->capture_default_str();
  eval_cmd->add_option("--trees", eval_cfg.forest.n_trees, "trees per forest")->capture_default_str();
  eval_cmd->add_option("--mtry", eval_mtry, "features tried per split (default: floor(sqrt(p)))");
  eval_cmd->add_option("--mtry-grid", eval_grid, "'auto' or a list; picks mtry by OOB accuracy");
  eval_cmd->add_option("--max-depth", eval_max_depth, "tree depth limit (default: unlimited)");
  eval_cmd->add_option("--perc-over", eval_cfg.resample.perc_over, "oversampling percentage")
      ->capture_default_str();
  eval_cmd->add_option("--minority-share", eval_cfg.resample.minority_share,
                       "RUS target minority share")
      ->capture_default_str();
  eval_cmd->add_option("--k-smote", eval_cfg.resample.k_smote, "SMOTE neighbour count")
      ->capture_default_str();
  eval_cmd->add_option("--alpha", eval_cfg.alpha, "IBA weighting factor")->capture_default_str();
  eval_cmd->add_option("--blocks", eval_blocks, "Friedman blocks")
      ->check(CLI::IsMember({"metric-repetition", "metric"}))
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval_cfg.seed, "random seed")->capture_default_str();
  eval_cmd->add_option("--threads", eval_cfg.threads, "worker threads")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "report path (default: stdout)");
  eval_cmd->add_option("--csv", eval_csv, "flat per-fold CSV path");

  // mine
  std::string mine_in, mine_out, mine_name = "mined";
  double min_conf = 0.9, min_supp = 0.05;
  std::size_t mine_bins = 5;
  auto* mine_cmd = app.add_subcommand("mine", "Mine a rule model from labelled profiles");
  mine_cmd->add_option("profiles", mine_in, "CSV: instances,attributes,ir,bl,ovl,best")
      ->required();
  mine_cmd->add_option("--min-conf", min_conf, "minimum confidence")->capture_default_str();
  mine_cmd->add_option("--min-supp", min_supp, "minimum support")->capture_default_str();
  mine_cmd->add_option("--bins", mine_bins, "equal-width bins per feature")->capture_default_str();
  mine_cmd->add_option("--name", mine_name, "model name")->capture_default_str();
  mine_cmd->add_option("--out", mine_out, "model path (default: stdout)");

  // recommend
  DataOptions rec_data;
  std::string rec_model = "builtin-overall", rec_out;
  auto* rec_cmd = app.add_subcommand("recommend", "Recommend a strategy from a rule model");
  rec_data.add_to(*rec_cmd, "dataset or profile document");
  rec_cmd->add_option("--model", rec_model, "builtin-iba, builtin-overall or a model file")
      ->capture_default_str();
  rec_cmd->add_option("--out", rec_out, "output path (default: stdout)");

  // generate
  SynthSpec gen;
  std::optional<std::size_t> gen_informative;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic imbalanced dataset");
  gen_cmd->add_option("--n", gen.n, "instances")->required();
  gen_cmd->add_option("--ir", gen.ir_target, "target imbalance ratio")->required();
  gen_cmd->add_option("--features", gen.features, "feature count")->required();
  gen_cmd->add_option("--informative", gen_informative, "informative features (default: all)");
  gen_cmd->add_option("--sep", gen.class_sep, "class separation")->capture_default_str();
  gen_cmd->add_option("--flip", gen.noise_flip_fraction, "label noise fraction")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "output CSV (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*profile_cmd) {
      emit(profile_out, profile_to_json(profile(load(profile_data))), out);
    } else if (*resample_cmd) {
      const auto s = parse_strategy(resample_method);
      if (!s) throw std::invalid_argument("unknown strategy '" + resample_method + "'");
      const auto result = apply(*s, load(resample_data), resample_cfg);
      if (result.unchanged) err << "note: " << strategy_name(*s) << " left the data unchanged\n";
      std::ostringstream csv;
      write_csv(result.data, csv);
      emit(resample_out, csv.str(), out);
    } else if (*eval_cmd) {
      eval_cfg.strategies = parse_strategies(eval_strategies);
      if (eval_mtry > 0) eval_cfg.forest.mtry = eval_mtry;
      if (!eval_grid.empty()) eval_cfg.forest.mtry_grid = parse_grid(eval_grid);
      if (eval_max_depth > 0) eval_cfg.forest.max_depth = eval_max_depth;
      eval_cfg.blocks = eval_blocks == "metric" ? BlockMode::metric : BlockMode::metric_repetition;
      const auto report = run_experiment(load(eval_data), eval_cfg);
      emit(eval_out, report_to_json(report), out);
      if (!eval_csv.empty()) {
        std::ostringstream csv;
        write_fold_csv(report, csv);
        emit(eval_csv, csv.str(), out);
      }
    } else if (*mine_cmd) {
      std::ifstream in(mine_in);
      if (!in) throw DataError("cannot open file: " + mine_in);
      const auto labelled = read_labelled_profiles(in);
      const auto base = to_transactions(labelled, mine_bins);
      RuleModel model;
      model.name = mine_name;
      model.rules = mine_rules(base, min_supp, min_conf);
      model.provenance = "mined from " + fs::path(mine_in).filename().string() + " (" +
                         std::to_string(labelled.size()) + " profiles, min_supp " +
                         format_real(min_supp) + ", min_conf " + format_real(min_conf) + ")";
      if (model.rules.empty()) err << "warning: no rules met the thresholds\n";
      emit(mine_out, rule_model_to_json(model), out);
    } else if (*rec_cmd) {
      const auto model = load_model(rec_model);
      const Profile p = looks_like_json(rec_data.path)
                            ? profile_from_json(read_text(rec_data.path))
                            : profile(load(rec_data));
      const auto rec = recommend(p, model);
      emit(rec_out, recommendation_to_json(rec, model, p), out);
    } else if (*gen_cmd) {
      gen.informative = gen_informative.value_or(gen.features);
      std::ostringstream csv;
      write_csv(make_imbalanced(gen), csv);
      emit(gen_out, csv.str(), out);
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace imbal::cli
