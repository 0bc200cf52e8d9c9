#pragma once

#include <cstddef>
#include <string>

#include "imbal/dataset.hpp"

namespace imbal {

/// Imbalance-relevant meta-features of a dataset.
struct Profile {
  std::size_t n_instances = 0;
  std::size_t n_attributes = 0;
  double imbalance_ratio = 1.0;
  double borderline_pct = 0.0;
  double overlap_pct = 0.0;
  std::string minority_label;
};

/// Majority count over minority count.
double imbalance_ratio(const Dataset& d);

/// 100 / (1 + max_f r_f) where r_f is the per-feature Fisher discriminant
/// ratio (mu1 - mu2)^2 / (s1^2 + s2^2) with n-1 variances. Features with
/// equal means and zero variances are skipped; zero variances with distinct
/// means make r_f infinite and the result 0.
double overlap_pct(const Dataset& d);

/// Percentage of instances incident to a cross-class edge of the Euclidean
/// MST over min-max normalized features.
double borderline_pct(const Dataset& d);

Profile profile(const Dataset& d);

}  // namespace imbal
