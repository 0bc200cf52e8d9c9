#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imbal/dataset.hpp"
#include "imbal/forest.hpp"
#include "imbal/metrics.hpp"
#include "imbal/resample.hpp"

namespace imbal {

/// How ranking blocks are formed from fold results.
enum class BlockMode : std::uint8_t {
  metric_repetition,  // one block per (metric, repetition): N = 8 R
  metric,             // one block per metric, averaged over all folds: N = 8
};

struct ExperimentConfig {
  std::vector<StrategyId> strategies{kEvaluationStrategies.begin(), kEvaluationStrategies.end()};
  ResampleConfig resample;
  ForestConfig forest;
  std::size_t folds = 10;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  double alpha = 0.1;
  BlockMode blocks = BlockMode::metric_repetition;
};

struct FoldRecord {
  std::size_t repetition = 0;
  std::size_t fold = 0;
  std::vector<std::size_t> test_indices;  // indices into the input dataset
};

struct FoldResult {
  std::size_t repetition = 0;
  std::size_t fold = 0;
  StrategyId strategy = StrategyId::original;
  std::size_t train_size = 0;
  std::size_t resampled_size = 0;
  std::size_t resampled_minority = 0;
  std::size_t test_size = 0;
  bool resample_unchanged = false;
  MetricReport metrics;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
};

struct StrategySummary {
  StrategyId strategy = StrategyId::original;
  std::vector<Summary> fields;  // parallel to report_field_names()
  double average_rank = 0.0;

  Summary metric(Metric m) const;
};

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t df = 0;
};

struct ExperimentReport {
  std::size_t n_instances = 0;
  std::size_t n_attributes = 0;
  std::size_t folds = 0;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  double alpha = 0.1;
  BlockMode blocks = BlockMode::metric_repetition;
  std::vector<StrategyId> strategies;
  std::vector<FoldRecord> fold_records;  // ordered by (repetition, fold)
  std::vector<FoldResult> results;       // ordered by (repetition, fold, strategy)
  std::vector<StrategySummary> summaries;
  std::vector<std::vector<double>> block_values;  // N x k
  std::vector<std::vector<double>> block_ranks;   // N x k
  std::optional<FriedmanResult> friedman;
  std::optional<double> nemenyi_cd;
  StrategyId best = StrategyId::original;
};

/// Field names and accessors for every value of a MetricReport that is
/// summarized and written to reports.
std::span<const std::string_view> report_field_names();
double report_field(const MetricReport& r, std::size_t field);

/// Repeated stratified cross-validation. For every repetition, fold and
/// strategy only the training part is resampled; the forest is scored on
/// the untouched test fold. Results do not depend on `threads`.
ExperimentReport run_experiment(const Dataset& d, const ExperimentConfig& cfg);

/// Rank 1 is best; tied values share the mean of their ranks.
std::vector<std::vector<double>> rank_blocks(const std::vector<std::vector<double>>& values,
                                             bool higher_is_better = true);

/// Friedman chi-square from average ranks over N blocks and k treatments,
/// p-value from chi-square with k - 1 degrees of freedom.
FriedmanResult friedman(const std::vector<std::vector<double>>& ranks);

/// Studentized-range based critical value q_alpha for k in [2, 10] and
/// alpha in {0.05, 0.10}.
double nemenyi_q(std::size_t k, double alpha = 0.05);
/// Critical difference q_alpha * sqrt(k (k + 1) / (6 N)).
double nemenyi_cd(std::size_t k, std::size_t n_blocks, double alpha = 0.05);

/// Lowest average rank; ties go to higher mean IBA, then higher mean OP,
/// then the earlier strategy in StrategyId order.
StrategyId select_best(std::span<const StrategySummary> summaries);

}  // namespace imbal
