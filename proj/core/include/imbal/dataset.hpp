#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imbal {

/// Binary class code. The minority class is the positive class everywhere.
enum class Label : std::uint8_t { majority = 0, minority = 1 };

constexpr Label other(Label l) noexcept {
  return l == Label::minority ? Label::majority : Label::minority;
}

/// Dense numeric feature matrix (row-major) with binary labels.
///
/// Text class names are kept only for I/O; everything inside the library
/// works on Label codes. Loaders and the generator enforce the ingestion
/// invariants (two classes, minority not larger than majority, n >= 2,
/// p >= 1); resampled datasets may legitimately end up with the minority
/// outnumbering the majority, so the value type itself does not re-check
/// class balance.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<double> values, std::size_t n_features, std::vector<Label> labels,
          std::array<std::string, 2> class_names, std::vector<std::string> feature_names,
          std::string label_name = "class");

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return n_features_; }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_features_, n_features_};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * n_features_ + j]; }
  Label label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::string& label_name() const noexcept { return label_name_; }

  /// Text of a class code; index 0 is the majority name, 1 the minority name.
  const std::string& class_name(Label l) const { return class_names_[static_cast<int>(l)]; }
  const std::array<std::string, 2>& class_names() const noexcept { return class_names_; }

  std::size_t count(Label l) const noexcept;
  std::vector<std::size_t> indices_of(Label l) const;

  /// Rows at the given indices, in the given order (duplicates allowed).
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Same schema, new rows.
  Dataset with_rows(std::vector<double> values, std::vector<Label> labels) const;

  /// Throws DataError unless the ingestion invariants hold.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> values_;
  std::size_t n_features_ = 0;
  std::vector<Label> labels_;
  std::array<std::string, 2> class_names_;
  std::vector<std::string> feature_names_;
  std::string label_name_ = "class";
};

/// Encodes text labels into Label codes.
///
/// With no explicit minority the rarer label is chosen; equal counts go to
/// the lexicographically smaller text. Throws DataError on fewer or more than
/// two distinct labels, an unknown explicit minority, or an explicit minority
/// that outnumbers the other class.
struct EncodedLabels {
  std::vector<Label> codes;
  std::array<std::string, 2> class_names;  // {majority, minority}
};
EncodedLabels encode_labels(std::span<const std::string> labels,
                            const std::optional<std::string>& minority = std::nullopt);

Dataset read_csv(std::istream& in, const std::string& label_column,
                 const std::optional<std::string>& minority = std::nullopt);
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::optional<std::string>& minority = std::nullopt);

/// Header names of a CSV file, for callers that default the label column.
std::vector<std::string> csv_header(const std::filesystem::path& path);

/// Minimal KEEL .dat reader: @relation/@attribute/@inputs/@outputs/@data.
Dataset read_keel(std::istream& in, const std::optional<std::string>& minority = std::nullopt);
Dataset load_keel(const std::filesystem::path& path,
                  const std::optional<std::string>& minority = std::nullopt);

/// Writes a header row and data rows; the label is the final column and
/// reals use 12 significant digits.
void write_csv(const Dataset& d, std::ostream& out);
void save_csv(const Dataset& d, const std::filesystem::path& path);

/// Fold membership for R repetitions of stratified K-fold splitting.
/// Fold indices are 0-based.
struct FoldPlan {
  std::size_t folds = 0;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint32_t>> assignments;  // [repetition][instance]

  std::vector<std::size_t> test_indices(std::size_t repetition, std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t repetition, std::size_t fold) const;
};

/// Each class is shuffled and dealt round-robin; the majority deal continues
/// where the minority deal stopped so fold sizes also differ by at most one.
FoldPlan stratified_folds(const Dataset& d, std::size_t folds, std::size_t repeats,
                          std::uint64_t seed);

struct SynthSpec {
  std::size_t n = 1000;
  std::size_t features = 2;
  std::size_t informative = 2;
  double ir_target = 10.0;
  double class_sep = 1.0;
  double noise_flip_fraction = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticDataset {
  Dataset data;
  std::vector<Label> clean_labels;  // labels before noise flipping
};

/// Two unit-variance Gaussian clusters at -sep/2 (majority) and +sep/2
/// (minority) on each informative axis, standard-normal noise elsewhere.
SyntheticDataset generate_imbalanced(const SynthSpec& spec);
Dataset make_imbalanced(const SynthSpec& spec);

/// Per-feature affine map onto [0, 1]; constant columns map to 0.5.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  explicit MinMaxScaler(const Dataset& d);

  double transform(std::size_t feature, double value) const;
  std::vector<double> transform(std::span<const double> row) const;
  /// Whole matrix, row-major.
  std::vector<double> transform_all(const Dataset& d) const;

 private:
  std::vector<double> min_;
  std::vector<double> range_;
};

Dataset min_max_normalize(const Dataset& d);

}  // namespace imbal
