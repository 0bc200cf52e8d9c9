#include "imbal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace imbal {

namespace {

double ratio(std::size_t num, std::size_t den, std::uint32_t flag, std::uint32_t& flags) {
  if (den == 0) {
    flags |= flag;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double tpr(const ConfusionCounts& c) {
  std::uint32_t f = 0;
  return ratio(c.tp, c.tp + c.fn, 0, f);
}

double tnr(const ConfusionCounts& c) {
  std::uint32_t f = 0;
  return ratio(c.tn, c.tn + c.fp, 0, f);
}

double accuracy(const ConfusionCounts& c) {
  std::uint32_t f = 0;
  return ratio(c.tp + c.tn, c.total(), 0, f);
}

}  // namespace

ConfusionCounts confusion(std::span<const Label> actual, std::span<const Label> predicted) {
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument("actual and predicted label counts differ");
  }
  if (actual.empty()) throw std::invalid_argument("confusion counts need at least one label");
  ConfusionCounts c;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const bool pos = actual[i] == Label::minority;
    const bool pred_pos = predicted[i] == Label::minority;
    if (pos) {
      (pred_pos ? c.tp : c.fn)++;
    } else {
      (pred_pos ? c.fp : c.tn)++;
    }
  }
  return c;
}

MetricReport rates(const ConfusionCounts& c) {
  MetricReport r;
  auto& flags = r.degeneracy;
  r.accuracy = ratio(c.tp + c.tn, c.total(), kAccuracyUndefined, flags);
  r.recall_min = ratio(c.tp, c.tp + c.fn, kTprUndefined, flags);
  r.recall_maj = ratio(c.tn, c.tn + c.fp, kTnrUndefined, flags);
  r.precision_min = ratio(c.tp, c.tp + c.fp, kPrecisionMinUndefined, flags);
  r.precision_maj = ratio(c.tn, c.tn + c.fn, kPrecisionMajUndefined, flags);
  r.precision_macro = (r.precision_min + r.precision_maj) / 2.0;
  const double pr = r.precision_min + r.recall_min;
  if (pr > 0.0) {
    r.f_measure = 2.0 * r.precision_min * r.recall_min / pr;
  } else {
    r.degeneracy |= kFMeasureUndefined;
  }
  return r;
}

double g_mean(const ConfusionCounts& c) { return std::sqrt(tpr(c) * tnr(c)); }

double optimized_precision(const ConfusionCounts& c) {
  const double p = tpr(c);
  const double n = tnr(c);
  const double acc = accuracy(c);
  if (p + n == 0.0) return acc - 1.0;
  return acc - std::abs(n - p) / (n + p);
}

double dominance(const ConfusionCounts& c) { return tpr(c) - tnr(c); }

double iba(const ConfusionCounts& c, double alpha, double base) {
  return (1.0 + alpha * dominance(c)) * base;
}

AucResult auc(std::span<const Label> actual, std::span<const double> scores) {
  if (actual.size() != scores.size()) throw std::invalid_argument("label and score counts differ");
  std::vector<std::size_t> order(actual.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Walk groups of equal score in ascending order; every positive beats the
  // negatives already passed and ties with the negatives in its own group.
  double wins = 0.0;
  std::size_t neg_below = 0, n_pos = 0, n_neg = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t h = g;
    std::size_t pos = 0, neg = 0;
    while (h < order.size() && scores[order[h]] == scores[order[g]]) {
      (actual[order[h]] == Label::minority ? pos : neg)++;
      ++h;
    }
    wins += static_cast<double>(pos) * static_cast<double>(neg_below) +
            0.5 * static_cast<double>(pos) * static_cast<double>(neg);
    neg_below += neg;
    n_pos += pos;
    n_neg += neg;
    g = h;
  }
  if (n_pos == 0 || n_neg == 0) return {0.0, false};
  return {wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg)), true};
}

MetricReport metric_suite(std::span<const Label> actual, std::span<const Label> predicted,
                          std::span<const double> scores, double alpha) {
  const auto c = confusion(actual, predicted);
  MetricReport r = rates(c);
  r.alpha = alpha;
  r.g_mean = g_mean(c);
  r.op = optimized_precision(c);
  if (r.recall_min + r.recall_maj == 0.0) r.degeneracy |= kOpUndefined;
  r.iba = iba(c, alpha, r.g_mean);
  const auto a = auc(actual, scores);
  r.auc = a.value;
  if (!a.defined) r.degeneracy |= kAucUndefined;
  return r;
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::accuracy: return "accuracy";
    case Metric::precision: return "precision";
    case Metric::recall: return "recall";
    case Metric::f_measure: return "f_measure";
    case Metric::auc: return "auc";
    case Metric::g_mean: return "g_mean";
    case Metric::op: return "op";
    case Metric::iba: return "iba";
  }
  return "unknown";
}

double metric_value(const MetricReport& r, Metric m) {
  switch (m) {
    case Metric::accuracy: return r.accuracy;
    case Metric::precision: return r.precision_macro;
    case Metric::recall: return r.recall_min;
    case Metric::f_measure: return r.f_measure;
    case Metric::auc: return r.auc;
    case Metric::g_mean: return r.g_mean;
    case Metric::op: return r.op;
    case Metric::iba: return r.iba;
  }
  return 0.0;
}

}  // namespace imbal
