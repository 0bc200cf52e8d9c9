// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit
// status is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "imbal/dataset.hpp"
#include "imbal/eval.hpp"
#include "imbal/metrics.hpp"
#include "imbal/profile.hpp"
#include "imbal/random.hpp"
#include "imbal/recommend.hpp"
#include "imbal/resample.hpp"
#include "imbal/rules.hpp"
#include "imbal_cli/cli.hpp"
#include "oracles.hpp"

using namespace imbal;

namespace {

// Tolerances.
constexpr double kMetricTol = 1e-9;
constexpr double kCutTol = 0.5;
constexpr double kSegmentTol = 1e-9;
constexpr double kIrTol = 0.01;
constexpr double kBlTol = 10.0;   // informative only
constexpr double kOvlTol = 15.0;  // informative only
constexpr double kCdTol = 1e-3;
constexpr std::size_t kOracleSeeds = 100;
constexpr std::size_t kOracleMaxRows = 300;

// Criterion 8 setup: the separation was chosen so that the unresampled
// forest reaches a G-mean near the middle of [0.3, 0.8].
constexpr double kDirectionalSep = 1.5;
constexpr std::size_t kDirectionalSeeds = 10;
constexpr std::size_t kDirectionalWins = 8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

constexpr Label MAJ = Label::majority;
constexpr Label MIN = Label::minority;

// ---------------------------------------------------------------------------

Outcome metric_exactness() {
  const ConfusionCounts c{8, 2, 85, 5};
  // Hand arithmetic: accuracy 0.93, TPR 0.8, TNR 85/90.
  const double tnr = 85.0 / 90.0;
  const double op_expect = 0.93 - (tnr - 0.8) / (tnr + 0.8);
  const double op = optimized_precision(c);

  const ConfusionCounts c2{8, 2, 9, 1};  // TPR 0.8, TNR 0.9
  const double g_expect = std::sqrt(0.8 * 0.9);
  const double iba_expect = (1.0 + 0.1 * (0.8 - 0.9)) * g_expect;

  const std::vector<Label> labels{MIN, MIN, MAJ, MAJ};
  const std::vector<double> scores{0.9, 0.5, 0.5, 0.1};
  // Pairs: (0.9,0.5) win, (0.9,0.1) win, (0.5,0.5) tie, (0.5,0.1) win.
  const double auc_expect = 3.5 / 4.0;
  const auto a = auc(labels, scores);

  double worst = 0.0;
  worst = std::max(worst, std::abs(op - op_expect));
  worst = std::max(worst, std::abs(op - 0.847197452229));
  worst = std::max(worst, std::abs(g_mean(c2) - g_expect));
  worst = std::max(worst, std::abs(iba(c2, 0.1) - iba_expect));
  worst = std::max(worst, std::abs(a.value - auc_expect));
  const bool pass = worst <= kMetricTol && a.defined &&
                    std::abs(g_expect - 0.848528137) < 1e-9 &&
                    std::abs(iba_expect - 0.840042856) < 1e-9;
  return {pass, "OP " + fmt("%.6f", op) + ", IBA " + fmt("%.6f", iba(c2, 0.1)) + ", G-mean " +
                    fmt("%.6f", g_mean(c2)) + ", AUC " + fmt("%.3f", a.value) +
                    ", max error " + fmt("%.1e", worst)};
}

Outcome discretization() {
  const auto table = reference_datasets();
  auto cuts = [&](Feature f) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : table) {
      lo = std::min(lo, feature_value(r.profile, f));
      hi = std::max(hi, feature_value(r.profile, f));
    }
    std::vector<double> out;
    const auto bins = equal_width_bins(lo, hi, 5);
    for (std::size_t i = 0; i + 1 < bins.size(); ++i) out.push_back(bins[i].upper);
    return out;
  };
  // Cut points used by the reference rule models.
  const std::map<Feature, std::vector<double>> expected = {
      {Feature::borderline, {6.75, 12.56, 18.38, 24.19}},
      {Feature::overlap, {27.2, 44.4, 61.6, 78.8}},
      {Feature::attributes, {22.4}},
      {Feature::imbalance_ratio, {48.1, 91.4, 134.7, 178.0}},
  };
  double worst = 0.0;
  std::string detail;
  for (const auto& [f, want] : expected) {
    const auto got = cuts(f);
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    detail += std::string(detail.empty() ? "" : ", ") + std::string(feature_name(f)) + " " +
              fmt("%.2f", got[0]) + ".." + fmt("%.2f", got[3]);
  }
  return {worst <= kCutTol, detail + "; max deviation " + fmt("%.3f", worst)};
}

Outcome recommender_fidelity() {
  const auto [iba_model, overall] = builtin_models();
  const auto p = [](std::string_view name) { return find_reference_dataset(name)->profile; };
  const auto a = recommend(p("Ecoli3"), overall).strategy;
  const auto b = recommend(p("GD1"), overall).strategy;
  const auto c = recommend(p("Newthyroid"), iba_model).strategy;
  const bool pass = a == StrategyId::original && b == StrategyId::smote_tl &&
                    c == StrategyId::smote_tl;
  return {pass, "ecoli3 " + std::string(strategy_name(a)) + ", GD1 " +
                    std::string(strategy_name(b)) + ", newthyroid " + std::string(strategy_name(c))};
}

Outcome resampler_oracles() {
  std::size_t bad_tomek = 0, bad_enn = 0, bad_cnn = 0, bad_oss = 0;
  for (std::size_t seed = 0; seed < kOracleSeeds; ++seed) {
    Rng gen(derive_seed(4, {seed}));
    const std::size_t n = 5 + gen.below(kOracleMaxRows - 4);
    const std::size_t p = 1 + gen.below(4);
    const bool coarse = seed % 2 == 0;
    const auto d = oracle::random_dataset(gen, n, p, 0.1 + 0.3 * gen.uniform(), coarse);

    const auto links = tomek_links(d);
    if (std::set<std::pair<std::size_t, std::size_t>>(links.begin(), links.end()) !=
        oracle::tomek_links(d)) {
      ++bad_tomek;
    }

    ResampleConfig cfg;
    cfg.seed = gen.next();
    for (bool both : {false, true}) {
      if (!(enn(d, cfg, both) == d.subset(oracle::enn_keep(d, cfg.k_enn, both)))) ++bad_enn;
    }

    const auto keep = oracle::cnn_keep(d, cfg.seed);
    bool cnn_ok = cnn(d, cfg) == d.subset(keep);
    const auto pts = oracle::normalized(d);
    for (std::size_t i = 0; i < d.rows() && cnn_ok; ++i) {
      if (std::binary_search(keep.begin(), keep.end(), i)) continue;
      cnn_ok = oracle::knn_vote(pts, d.labels(), keep, i, 1) == d.label(i);
    }
    bad_cnn += !cnn_ok;

    if (!(oss(d, cfg) == d.subset(oracle::oss_keep(d, cfg.seed)))) ++bad_oss;
  }
  const bool pass = bad_tomek + bad_enn + bad_cnn + bad_oss == 0;
  return {pass, std::to_string(kOracleSeeds) + " datasets; mismatches tomek " +
                    std::to_string(bad_tomek) + ", enn " + std::to_string(bad_enn) + ", cnn " +
                    std::to_string(bad_cnn) + ", oss " + std::to_string(bad_oss)};
}

Outcome smote_properties() {
  std::size_t count_fail = 0;
  double worst = 0.0;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    Rng gen(derive_seed(5, {trial}));
    const auto d = oracle::random_dataset(gen, 20 + gen.below(200), 1 + gen.below(5), 0.3, false);
    ResampleConfig cfg;
    cfg.seed = gen.next();
    cfg.perc_over = static_cast<int>(50 * gen.below(14));
    cfg.k_smote = 1 + gen.below(8);
    const auto r = smote(d, cfg);
    const auto minority = d.indices_of(MIN);
    const std::size_t per = static_cast<std::size_t>(cfg.perc_over / 100);
    if (r.rows() - d.rows() != per * minority.size() ||
        r.count(MIN) != d.count(MIN) + per * minority.size()) {
      ++count_fail;
      continue;
    }
    // Each synthetic must lie on a segment from its source to one of the
    // source's k nearest minority neighbours (normalized distance ranking).
    const auto pts = oracle::normalized(d);
    std::vector<std::vector<double>> mpts;
    for (auto i : minority) mpts.push_back(pts[i]);
    const std::size_t k = std::min(cfg.k_smote, minority.size() - 1);
    for (std::size_t a = 0; a < minority.size(); ++a) {
      const auto nn = oracle::ranked(mpts, mpts[a], static_cast<long>(a));
      const auto x = d.row(minority[a]);
      for (std::size_t s = 0; s < per; ++s) {
        const auto syn = r.row(d.rows() + a * per + s);
        double best = INFINITY;
        for (std::size_t j = 0; j < k; ++j) {
          const auto y = d.row(minority[nn[j]]);
          double dd = 0.0, dp = 0.0;
          for (std::size_t f = 0; f < d.cols(); ++f) {
            dd += (y[f] - x[f]) * (y[f] - x[f]);
            dp += (syn[f] - x[f]) * (y[f] - x[f]);
          }
          const double u = dd > 0 ? std::clamp(dp / dd, 0.0, 1.0) : 0.0;
          double res = 0.0;
          for (std::size_t f = 0; f < d.cols(); ++f) {
            const double e = syn[f] - (x[f] + u * (y[f] - x[f]));
            res += e * e;
          }
          best = std::min(best, std::sqrt(res));
        }
        worst = std::max(worst, best);
      }
    }
  }
  return {count_fail == 0 && worst < kSegmentTol,
          "100 trials; count-law failures " + std::to_string(count_fail) +
              ", max segment residual " + fmt("%.1e", worst)};
}

Outcome keel_ground_truth() {
  struct Case {
    const char* file;
    std::size_t n, p;
    double ir, bl, ovl;
  };
  const Case cases[] = {
      {"glass6.dat", 214, 9, 6.38, 7, 73},
      {"new-thyroid1.dat", 215, 5, 4.84, 4, 45},
  };
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto p = profile(load_keel(std::string(IMBAL_TEST_DATA "/keel/") + c.file));
    const bool shape = p.n_instances == c.n && p.n_attributes == c.p;
    const bool ir = std::abs(p.imbalance_ratio - c.ir) <= kIrTol;
    pass = pass && shape && ir;
    const bool bl = std::abs(p.borderline_pct - c.bl) <= kBlTol;
    const bool ovl = std::abs(p.overlap_pct - c.ovl) <= kOvlTol;
    detail += std::string(detail.empty() ? "" : "; ") + c.file + " n/p " +
              std::to_string(p.n_instances) + "/" + std::to_string(p.n_attributes) + " IR " +
              fmt("%.3f", p.imbalance_ratio) + " (want " + fmt("%.2f", c.ir) + ")" + " BL% " +
              fmt("%.1f", p.borderline_pct) + (bl ? "" : " [outside]") + " OVL% " +
              fmt("%.1f", p.overlap_pct) + (ovl ? "" : " [outside]");
  }
  return {pass, detail};
}

Outcome protocol_integrity() {
  SynthSpec s;
  s.n = 300;
  s.features = 4;
  s.ir_target = 9;
  s.class_sep = 1.0;
  s.seed = 7;
  const auto d = make_imbalanced(s);
  ExperimentConfig cfg;
  cfg.folds = 5;
  cfg.repeats = 3;
  cfg.forest.n_trees = 10;
  cfg.seed = 70;
  const auto rep = run_experiment(d, cfg);

  bool ok = true;
  std::string why;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    std::vector<std::size_t> hits(d.rows(), 0);
    for (std::size_t f = 0; f < cfg.folds; ++f) {
      for (auto i : rep.fold_records[r * cfg.folds + f].test_indices) {
        if (i >= d.rows()) {
          ok = false;
          why = "test index outside the dataset";
        } else {
          ++hits[i];
        }
      }
    }
    if (std::any_of(hits.begin(), hits.end(), [](std::size_t h) { return h != 1; })) {
      ok = false;
      why = "repetition " + std::to_string(r) + " folds do not partition the data";
    }
  }

  // Rebuild a sample of fold results by hand: resample the training part
  // only and score on the raw test fold; metrics must agree exactly.
  const auto plan = stratified_folds(d, cfg.folds, cfg.repeats, derive_seed(cfg.seed, {0}));
  std::size_t rebuilt = 0;
  for (const auto& res : rep.results) {
    if ((res.fold + res.repetition) % 4 != 0) continue;
    const auto& rec = rep.fold_records[res.repetition * cfg.folds + res.fold];
    if (plan.test_indices(res.repetition, res.fold) != rec.test_indices) ok = false;
    const auto test = d.subset(rec.test_indices);
    ResampleConfig rc = cfg.resample;
    rc.seed = derive_seed(cfg.seed, {1, res.repetition, res.fold});
    const auto train = apply(res.strategy, d.subset(plan.train_indices(res.repetition, res.fold)), rc);
    ForestConfig fc = cfg.forest;
    fc.seed = derive_seed(cfg.seed, {2, res.repetition, res.fold});
    const auto scores = train_forest(train.data, fc).predict_proba(test);
    std::vector<Label> pred;
    for (double p : scores) pred.push_back(p >= 0.5 ? MIN : MAJ);
    const auto m = metric_suite(test.labels(), pred, scores, cfg.alpha);
    if (res.test_size != rec.test_indices.size() || m.iba != res.metrics.iba ||
        m.accuracy != res.metrics.accuracy || m.auc != res.metrics.auc) {
      ok = false;
      why = "fold result differs from an untouched-test rebuild";
    }
    ++rebuilt;
  }
  return {ok, ok ? std::to_string(cfg.repeats) + " repetitions partition " +
                       std::to_string(d.rows()) + " rows; " + std::to_string(rebuilt) +
                       " fold results rebuilt on untouched test folds"
                 : why};
}

Outcome directional() {
  std::size_t acc_wins = 0, rec_wins = 0;
  double g_sum = 0.0;
  for (std::size_t seed = 0; seed < kDirectionalSeeds; ++seed) {
    SynthSpec s;
    s.n = 1000;
    s.features = 5;
    s.informative = 3;
    s.ir_target = 30;
    s.class_sep = kDirectionalSep;
    s.seed = 100 + seed;
    ExperimentConfig cfg;
    cfg.strategies = {StrategyId::original, StrategyId::rus, StrategyId::smote};
    cfg.forest.n_trees = 100;
    cfg.seed = seed;
    cfg.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto rep = run_experiment(make_imbalanced(s), cfg);
    const auto& orig = rep.summaries[0];
    const auto& rus_s = rep.summaries[1];
    const auto& smote_s = rep.summaries[2];
    g_sum += orig.metric(Metric::g_mean).mean;
    acc_wins += rus_s.metric(Metric::accuracy).mean < orig.metric(Metric::accuracy).mean;
    rec_wins += smote_s.metric(Metric::recall).mean > orig.metric(Metric::recall).mean;
  }
  const double g = g_sum / static_cast<double>(kDirectionalSeeds);
  const bool pass = g >= 0.3 && g <= 0.8 && acc_wins >= kDirectionalWins &&
                    rec_wins >= kDirectionalWins;
  return {pass, "Original G-mean " + fmt("%.3f", g) + "; accuracy(RUS) < accuracy(Original) in " +
                    std::to_string(acc_wins) + "/10 seeds; recall(SMOTE) > recall(Original) in " +
                    std::to_string(rec_wins) + "/10 seeds"};
}

Outcome apriori_equivalence() {
  std::size_t bad = 0, rules = 0, infinite = 0;
  for (std::size_t trial = 0; trial < 200; ++trial) {
    Rng gen(derive_seed(9, {trial}));
    const std::size_t universe = 2 + gen.below(11);  // <= 12 items
    std::vector<ItemSet> t(1 + gen.below(50));
    for (auto& row : t) {
      for (Item i = 0; i < universe; ++i) {
        if (gen.bernoulli(0.3 + 0.3 * static_cast<double>(i % 3) / 2)) row.push_back(i);
      }
    }
    const double min_supp = 0.05 + 0.3 * gen.uniform();
    const auto fs = apriori(t, min_supp);
    const auto all = oracle::power_set(t);
    const double n = static_cast<double>(all.n);

    std::map<ItemSet, std::size_t> got;
    for (const auto& f : fs) got[f.items] = f.count;
    std::map<ItemSet, std::size_t> want;
    for (const auto& [items, count] : all.counts) {
      if (static_cast<double>(count) >= min_supp * n - 1e-9) want[items] = count;
    }
    if (got != want) ++bad;

    for (Item target = 0; target < universe; ++target) {
      for (const auto& r : generate_rules(fs, 0.5, [&](Item i) { return i == target; })) {
        ++rules;
        ItemSet joint = r.antecedent;
        joint.push_back(target);
        std::sort(joint.begin(), joint.end());
        const double sj = static_cast<double>(all.counts.at(joint)) / n;
        const double sa = static_cast<double>(all.counts.at(r.antecedent)) / n;
        const double sc = static_cast<double>(all.counts.at(ItemSet{target})) / n;
        const double conf = sj / sa;
        const double conv = sj == sa ? INFINITY : (1 - sc) / (1 - conf);
        const auto& m = r.measures;
        const bool same = std::abs(m.support - sj) < 1e-12 && std::abs(m.confidence - conf) < 1e-12 &&
                          std::abs(m.lift - conf / sc) < 1e-12 &&
                          std::abs(m.leverage - (sj - sa * sc)) < 1e-12 &&
                          (std::isinf(conv) ? std::isinf(m.conviction) && m.conviction > 0
                                            : std::abs(m.conviction - conv) < 1e-9);
        if (!same) ++bad;
        infinite += std::isinf(conv);
      }
    }
  }
  return {bad == 0 && infinite > 0,
          "200 bases; " + std::to_string(rules) + " rules (" + std::to_string(infinite) +
              " with conf 1); mismatches " + std::to_string(bad)};
}

Outcome statistics() {
  const std::vector<std::vector<double>> perfect(10, {1, 2});
  const auto f = friedman(perfect);

  bool sums_ok = true;
  Rng gen(10);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> block(2 + gen.below(9));
    for (auto& v : block) v = static_cast<double>(gen.below(3));
    const auto r = rank_blocks({block})[0];
    const double k = static_cast<double>(block.size());
    sums_ok = sums_ok && std::accumulate(r.begin(), r.end(), 0.0) == k * (k + 1) / 2;
  }
  const double cd = nemenyi_cd(8, 40);
  const double formula = 3.031 * std::sqrt(8.0 * 9.0 / (6.0 * 40.0));
  const bool pass = std::abs(f.statistic - 10.0) < 1e-12 && sums_ok &&
                    std::abs(cd - 1.660) <= kCdTol && std::abs(cd - formula) < 1e-12;
  return {pass, "Friedman " + fmt("%.6f", f.statistic) + ", rank sums " +
                    (sums_ok ? "k(k+1)/2" : "WRONG") + ", CD(k=8,N=40) " + fmt("%.4f", cd)};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "imbal-acceptance";
  std::filesystem::create_directories(dir);
  const std::string data = IMBAL_TEST_DATA "/keel/glass6.dat";
  auto run = [&](const std::string& threads) {
    const auto out = (dir / ("report-" + threads + ".json")).string();
    const auto csv = (dir / ("folds-" + threads + ".csv")).string();
    std::ostringstream o, e;
    const int code = cli::run({"evaluate", data, "--seed", "7", "--threads", threads, "--out", out,
                               "--csv", csv},
                              o, e);
    std::ifstream a(out, std::ios::binary), b(csv, std::ios::binary);
    std::ostringstream text;
    text << a.rdbuf() << b.rdbuf();
    return std::make_pair(code, text.str());
  };
  const auto one = run("1");
  const auto eight = run("8");
  const bool pass = one.first == 0 && eight.first == 0 && !one.second.empty() &&
                    one.second == eight.second;
  return {pass, "glass6, 8 strategies, 10x5 folds: " + std::to_string(one.second.size()) +
                    " bytes, " + (one.second == eight.second ? "identical" : "DIFFERENT")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criteria to run (default: all)")
      ->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "metric exactness", metric_exactness},
      {2, "discretization cut points", discretization},
      {3, "recommender fidelity", recommender_fidelity},
      {4, "resampler oracle equivalence", resampler_oracles},
      {5, "SMOTE count law and geometry", smote_properties},
      {6, "KEEL ground truth", keel_ground_truth},
      {7, "protocol integrity", protocol_integrity},
      {8, "directional end-to-end", directional},
      {9, "Apriori equivalence", apriori_equivalence},
      {10, "statistics", statistics},
      {11, "determinism across thread counts", determinism},
  };

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
