#include "imbal/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "imbal/random.hpp"

namespace imbal {

namespace {

constexpr std::array<std::string_view, 11> kFieldNames = {
    "accuracy", "precision_min", "precision_maj", "precision", "recall",  "recall_maj",
    "f_measure", "g_mean",       "auc",           "op",        "iba",
};

std::size_t field_of(Metric m) {
  switch (m) {
    case Metric::accuracy: return 0;
    case Metric::precision: return 3;
    case Metric::recall: return 4;
    case Metric::f_measure: return 6;
    case Metric::g_mean: return 7;
    case Metric::auc: return 8;
    case Metric::op: return 9;
    case Metric::iba: return 10;
  }
  return 0;
}

Summary summarize(std::span<const double> xs) {
  Summary s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

// q_alpha for k = 2..10 (two-tailed Nemenyi, studentized range / sqrt 2).
constexpr std::array<double, 9> kQ05 = {1.960, 2.343, 2.569, 2.728, 2.850,
                                        2.949, 3.031, 3.102, 3.164};
constexpr std::array<double, 9> kQ10 = {1.645, 2.052, 2.291, 2.459, 2.589,
                                        2.693, 2.780, 2.855, 2.920};

}  // namespace

std::span<const std::string_view> report_field_names() { return kFieldNames; }

double report_field(const MetricReport& r, std::size_t field) {
  switch (field) {
    case 0: return r.accuracy;
    case 1: return r.precision_min;
    case 2: return r.precision_maj;
    case 3: return r.precision_macro;
    case 4: return r.recall_min;
    case 5: return r.recall_maj;
    case 6: return r.f_measure;
    case 7: return r.g_mean;
    case 8: return r.auc;
    case 9: return r.op;
    case 10: return r.iba;
  }
  throw std::out_of_range("report field index");
}

Summary StrategySummary::metric(Metric m) const { return fields.at(field_of(m)); }

ExperimentReport run_experiment(const Dataset& d, const ExperimentConfig& cfg) {
  if (cfg.strategies.empty()) throw std::invalid_argument("no strategies to evaluate");
  const auto plan = stratified_folds(d, cfg.folds, cfg.repeats, derive_seed(cfg.seed, {0}));
  const std::size_t k = cfg.strategies.size();

  ExperimentReport report;
  report.n_instances = d.rows();
  report.n_attributes = d.cols();
  report.folds = cfg.folds;
  report.repeats = cfg.repeats;
  report.seed = cfg.seed;
  report.alpha = cfg.alpha;
  report.blocks = cfg.blocks;
  report.strategies = cfg.strategies;

  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    for (std::size_t f = 0; f < cfg.folds; ++f) {
      report.fold_records.push_back({r, f, plan.test_indices(r, f)});
    }
  }

  const std::size_t n_items = report.fold_records.size() * k;
  report.results.resize(n_items);
  std::vector<std::exception_ptr> errors(n_items);

  auto work = [&](std::size_t item) {
    const auto& rec = report.fold_records[item / k];
    const StrategyId strategy = cfg.strategies[item % k];
    try {
      const auto train = d.subset(plan.train_indices(rec.repetition, rec.fold));
      const auto test = d.subset(rec.test_indices);

      ResampleConfig rcfg = cfg.resample;
      rcfg.seed = derive_seed(cfg.seed, {1, rec.repetition, rec.fold});
      const auto resampled = apply(strategy, train, rcfg);

      ForestConfig fcfg = cfg.forest;
      fcfg.seed = derive_seed(cfg.seed, {2, rec.repetition, rec.fold});
      fcfg.threads = 1;
      const auto model = train_forest(resampled.data, fcfg);

      const auto scores = model.predict_proba(test);
      std::vector<Label> predicted;
      predicted.reserve(scores.size());
      for (double s : scores) predicted.push_back(s >= 0.5 ? Label::minority : Label::majority);

      FoldResult& out = report.results[item];
      out.repetition = rec.repetition;
      out.fold = rec.fold;
      out.strategy = strategy;
      out.train_size = train.rows();
      out.resampled_size = resampled.data.rows();
      out.resampled_minority = resampled.data.count(Label::minority);
      out.test_size = test.rows();
      out.resample_unchanged = resampled.unchanged;
      out.metrics = metric_suite(test.labels(), predicted, scores, cfg.alpha);
    } catch (...) {
      errors[item] = std::current_exception();
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, n_items));
  if (threads == 1) {
    for (std::size_t i = 0; i < n_items; ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n_items; i += threads) work(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Per-strategy summaries over all K x R fold results.
  const std::size_t n_fields = kFieldNames.size();
  report.summaries.resize(k);
  for (std::size_t s = 0; s < k; ++s) {
    auto& sum = report.summaries[s];
    sum.strategy = cfg.strategies[s];
    for (std::size_t f = 0; f < n_fields; ++f) {
      std::vector<double> xs;
      for (std::size_t i = s; i < n_items; i += k) xs.push_back(report_field(report.results[i].metrics, f));
      sum.fields.push_back(summarize(xs));
    }
  }

  // Blocks: metric-major, then repetition.
  for (Metric m : kRankedMetrics) {
    if (cfg.blocks == BlockMode::metric) {
      std::vector<double> row(k);
      for (std::size_t s = 0; s < k; ++s) row[s] = report.summaries[s].metric(m).mean;
      report.block_values.push_back(std::move(row));
      continue;
    }
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
      std::vector<double> row(k, 0.0);
      for (std::size_t f = 0; f < cfg.folds; ++f) {
        for (std::size_t s = 0; s < k; ++s) {
          const auto& res = report.results[(r * cfg.folds + f) * k + s];
          row[s] += metric_value(res.metrics, m);
        }
      }
      for (auto& v : row) v /= static_cast<double>(cfg.folds);
      report.block_values.push_back(std::move(row));
    }
  }
  report.block_ranks = rank_blocks(report.block_values, true);
  const double n_blocks = static_cast<double>(report.block_ranks.size());
  for (std::size_t s = 0; s < k; ++s) {
    double total = 0.0;
    for (const auto& row : report.block_ranks) total += row[s];
    report.summaries[s].average_rank = total / n_blocks;
  }
  if (k >= 2 && report.block_ranks.size() >= 2) report.friedman = friedman(report.block_ranks);
  if (k >= 2 && k <= 10) report.nemenyi_cd = nemenyi_cd(k, report.block_ranks.size(), 0.05);
  report.best = select_best(report.summaries);
  return report;
}

std::vector<std::vector<double>> rank_blocks(const std::vector<std::vector<double>>& values,
                                             bool higher_is_better) {
  std::vector<std::vector<double>> ranks;
  ranks.reserve(values.size());
  for (const auto& block : values) {
    const std::size_t k = block.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return higher_is_better ? block[a] > block[b] : block[a] < block[b];
    });
    std::vector<double> r(k);
    for (std::size_t g = 0; g < k;) {
      std::size_t h = g;
      while (h < k && block[order[h]] == block[order[g]]) ++h;
      // Positions g..h-1 hold ranks g+1..h.
      const double mid = (static_cast<double>(g + 1) + static_cast<double>(h)) / 2.0;
      for (std::size_t i = g; i < h; ++i) r[order[i]] = mid;
      g = h;
    }
    ranks.push_back(std::move(r));
  }
  return ranks;
}

FriedmanResult friedman(const std::vector<std::vector<double>>& ranks) {
  const std::size_t n = ranks.size();
  if (n < 2) throw std::invalid_argument("Friedman test needs at least 2 blocks");
  const std::size_t k = ranks.front().size();
  if (k < 2) throw std::invalid_argument("Friedman test needs at least 2 treatments");

  double sum_sq = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double total = 0.0;
    for (const auto& row : ranks) {
      if (row.size() != k) throw std::invalid_argument("ragged rank matrix");
      total += row[j];
    }
    const double mean = total / static_cast<double>(n);
    sum_sq += mean * mean;
  }
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double stat = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  if (std::abs(stat) < 1e-12) stat = 0.0;

  FriedmanResult out;
  out.statistic = stat;
  out.df = k - 1;
  if (stat <= 0.0) {
    out.p_value = 1.0;
  } else {
    const boost::math::chi_squared dist(static_cast<double>(out.df));
    out.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  }
  return out;
}

double nemenyi_q(std::size_t k, double alpha) {
  if (k < 2 || k > 10) throw std::invalid_argument("Nemenyi table covers 2 to 10 strategies");
  if (std::abs(alpha - 0.05) < 1e-12) return kQ05[k - 2];
  if (std::abs(alpha - 0.10) < 1e-12) return kQ10[k - 2];
  throw std::invalid_argument("Nemenyi table covers alpha 0.05 and 0.10 only");
}

double nemenyi_cd(std::size_t k, std::size_t n_blocks, double alpha) {
  if (n_blocks < 1) throw std::invalid_argument("critical difference needs at least one block");
  const double kd = static_cast<double>(k);
  return nemenyi_q(k, alpha) * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n_blocks)));
}

StrategyId select_best(std::span<const StrategySummary> summaries) {
  if (summaries.empty()) throw std::invalid_argument("no strategies to select from");
  const StrategySummary* best = &summaries.front();
  for (const auto& s : summaries.subspan(1)) {
    const auto key = [](const StrategySummary& x) {
      return std::make_tuple(-x.average_rank, x.metric(Metric::iba).mean, x.metric(Metric::op).mean,
                             -static_cast<int>(x.strategy));
    };
    if (key(s) > key(*best)) best = &s;
  }
  return best->strategy;
}

}  // namespace imbal
