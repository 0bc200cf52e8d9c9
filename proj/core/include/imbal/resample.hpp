#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imbal/dataset.hpp"
#include "imbal/neighbors.hpp"

namespace imbal {

/// Resampling strategies. The declaration order is the canonical order used
/// for tie-breaks. The first eight form the evaluation set; the last four are
/// the cleaning methods on their own.
enum class StrategyId : std::uint8_t {
  original,
  rus,
  ros,
  smote,
  smote_oss,
  smote_cnn,
  smote_enn,
  smote_tl,
  cnn,
  enn,
  tl,
  oss,
};

inline constexpr std::array<StrategyId, 8> kEvaluationStrategies = {
    StrategyId::original,  StrategyId::rus,       StrategyId::ros,       StrategyId::smote,
    StrategyId::smote_oss, StrategyId::smote_cnn, StrategyId::smote_enn, StrategyId::smote_tl,
};

/// Display name, e.g. "Original", "SMOTE+TL".
std::string_view strategy_name(StrategyId id);
/// Accepts display names and lowercase forms with '+', '-' or '_' separators.
std::optional<StrategyId> parse_strategy(std::string_view text);

struct ResampleConfig {
  int perc_over = 500;
  double minority_share = 0.5;  // RUS target share of minority instances
  std::size_t k_smote = 6;
  std::size_t k_cnn = 1;
  std::size_t k_enn = 3;
  std::uint64_t seed = 0;
};

struct Resampled {
  Dataset data;
  bool unchanged = false;  // set when a precondition made the method a no-op
};

Resampled rus(const Dataset& d, const ResampleConfig& cfg);
Dataset ros(const Dataset& d, const ResampleConfig& cfg);

/// Synthetic points are appended after the input rows, grouped by source
/// minority instance in row order.
Dataset smote(const Dataset& d, const ResampleConfig& cfg);

Dataset cnn(const Dataset& d, const ResampleConfig& cfg);
Dataset enn(const Dataset& d, const ResampleConfig& cfg, bool clean_both_classes);

/// Unordered cross-class pairs (i < j) that are each other's nearest
/// neighbour with no strictly closer third point, over normalized features.
std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const Dataset& d);
std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const NeighborIndex& index);

Dataset tl(const Dataset& d, bool remove_both);
Dataset oss(const Dataset& d, const ResampleConfig& cfg);

/// Runs a strategy. Hybrids apply SMOTE and then clean the augmented set;
/// ENN and TL clean both classes there, CNN and OSS keep their own rules.
Resampled apply(StrategyId strategy, const Dataset& d, const ResampleConfig& cfg);

}  // namespace imbal
