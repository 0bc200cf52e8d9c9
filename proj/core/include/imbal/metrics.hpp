#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "imbal/dataset.hpp"

namespace imbal {

/// Positive = minority.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;

  std::size_t total() const noexcept { return tp + fn + tn + fp; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(std::span<const Label> actual, std::span<const Label> predicted);

/// Bit flags naming metrics whose 0/0 was replaced by 0.
enum Degeneracy : std::uint32_t {
  kNoDegeneracy = 0,
  kAccuracyUndefined = 1u << 0,
  kTprUndefined = 1u << 1,
  kTnrUndefined = 1u << 2,
  kPrecisionMinUndefined = 1u << 3,
  kPrecisionMajUndefined = 1u << 4,
  kFMeasureUndefined = 1u << 5,
  kOpUndefined = 1u << 6,
  kAucUndefined = 1u << 7,
};

struct MetricReport {
  double accuracy = 0.0;
  double precision_min = 0.0;
  double precision_maj = 0.0;
  double precision_macro = 0.0;
  double recall_min = 0.0;  // TPR
  double recall_maj = 0.0;  // TNR
  double f_measure = 0.0;
  double g_mean = 0.0;
  double auc = 0.0;
  double op = 0.0;
  double iba = 0.0;
  double alpha = 0.1;
  std::uint32_t degeneracy = kNoDegeneracy;
};

/// Accuracy, precisions, recalls and F-measure. Other fields stay 0.
MetricReport rates(const ConfusionCounts& c);

double g_mean(const ConfusionCounts& c);
/// Optimized precision: accuracy - |TNR - TPR| / (TNR + TPR);
/// accuracy - 1 when TNR + TPR = 0.
double optimized_precision(const ConfusionCounts& c);
/// TPR - TNR.
double dominance(const ConfusionCounts& c);
/// (1 + alpha * dominance) * base.
double iba(const ConfusionCounts& c, double alpha, double base);
inline double iba(const ConfusionCounts& c, double alpha = 0.1) { return iba(c, alpha, g_mean(c)); }

struct AucResult {
  double value = 0.0;
  bool defined = false;
};
/// Mann-Whitney AUC with half credit for tied scores.
AucResult auc(std::span<const Label> actual, std::span<const double> scores);

MetricReport metric_suite(std::span<const Label> actual, std::span<const Label> predicted,
                          std::span<const double> scores, double alpha = 0.1);

/// The eight metrics used for ranking strategies.
enum class Metric : std::uint8_t { accuracy, precision, recall, f_measure, auc, g_mean, op, iba };
inline constexpr std::array<Metric, 8> kRankedMetrics = {
    Metric::accuracy, Metric::precision, Metric::recall, Metric::f_measure,
    Metric::auc,      Metric::g_mean,    Metric::op,     Metric::iba,
};
std::string_view metric_name(Metric m);
double metric_value(const MetricReport& r, Metric m);

}  // namespace imbal
