#include "imbal/profile.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "imbal/error.hpp"
#include "imbal/neighbors.hpp"

namespace imbal {

double imbalance_ratio(const Dataset& d) {
  const auto n_min = d.count(Label::minority);
  const auto n_maj = d.count(Label::majority);
  if (n_min == 0 || n_maj == 0) throw DataError("imbalance ratio needs both classes present");
  return static_cast<double>(n_maj) / static_cast<double>(n_min);
}

double overlap_pct(const Dataset& d) {
  const auto n_min = d.count(Label::minority);
  const auto n_maj = d.count(Label::majority);
  if (n_min < 2 || n_maj < 2) throw DataError("overlap needs at least 2 instances per class");

  // The Fisher ratio is invariant to per-feature affine maps, so it is
  // computed on the normalized copy to keep magnitudes comparable.
  const Dataset norm = min_max_normalize(d);
  double best = -1.0;
  for (std::size_t f = 0; f < norm.cols(); ++f) {
    double sum[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < norm.rows(); ++i) sum[static_cast<int>(norm.label(i))] += norm.at(i, f);
    const double count[2] = {static_cast<double>(n_maj), static_cast<double>(n_min)};
    const double mean[2] = {sum[0] / count[0], sum[1] / count[1]};
    double ss[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < norm.rows(); ++i) {
      const int c = static_cast<int>(norm.label(i));
      const double dv = norm.at(i, f) - mean[c];
      ss[c] += dv * dv;
    }
    const double var = ss[0] / (count[0] - 1.0) + ss[1] / (count[1] - 1.0);
    const double gap = (mean[0] - mean[1]) * (mean[0] - mean[1]);
    double r = 0.0;
    if (var > 0.0) {
      r = gap / var;
    } else if (gap > 0.0) {
      r = std::numeric_limits<double>::infinity();
    } else {
      continue;
    }
    best = std::max(best, r);
  }
  if (best < 0.0) throw DataError("overlap undefined: every feature is constant in both classes");
  if (std::isinf(best)) return 0.0;
  return 100.0 / (1.0 + best);
}

double borderline_pct(const Dataset& d) {
  const auto index = NeighborIndex::from_dataset(d);
  const auto edges = build_mst(index);
  std::vector<bool> marked(d.rows(), false);
  for (const auto& e : edges) {
    if (d.label(e.u) != d.label(e.v)) marked[e.u] = marked[e.v] = true;
  }
  std::size_t count = 0;
  for (bool m : marked) count += m ? 1 : 0;
  return 100.0 * static_cast<double>(count) / static_cast<double>(d.rows());
}

Profile profile(const Dataset& d) {
  Profile p;
  p.n_instances = d.rows();
  p.n_attributes = d.cols();
  p.imbalance_ratio = imbalance_ratio(d);
  p.borderline_pct = borderline_pct(d);
  p.overlap_pct = overlap_pct(d);
  p.minority_label = d.class_name(Label::minority);
  return p;
}

}  // namespace imbal
