#include "imbal/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "imbal/error.hpp"
#include "imbal/format.hpp"
#include "imbal/random.hpp"

namespace imbal {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cur.push_back(c);
    } else if (c == ',' && !quoted) {
      out.push_back(unquote(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(unquote(cur));
  return out;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && lower(s.substr(0, prefix.size())) == prefix;
}

std::vector<std::string> split_names(std::string_view list) {
  std::vector<std::string> names;
  for (auto& f : split_fields(list)) {
    if (!f.empty()) names.push_back(f);
  }
  return names;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

}  // namespace

Dataset::Dataset(std::vector<double> values, std::size_t n_features, std::vector<Label> labels,
                 std::array<std::string, 2> class_names, std::vector<std::string> feature_names,
                 std::string label_name)
    : values_(std::move(values)),
      n_features_(n_features),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)),
      feature_names_(std::move(feature_names)),
      label_name_(std::move(label_name)) {
  if (n_features_ == 0 && !labels_.empty()) {
    throw std::invalid_argument("dataset needs at least one feature");
  }
  if (values_.size() != labels_.size() * n_features_) {
    throw std::invalid_argument("feature matrix size does not match rows x features");
  }
  if (feature_names_.empty()) {
    for (std::size_t j = 0; j < n_features_; ++j) feature_names_.push_back("f" + std::to_string(j + 1));
  }
  if (feature_names_.size() != n_features_) {
    throw std::invalid_argument("feature name count does not match feature count");
  }
}

std::size_t Dataset::count(Label l) const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

std::vector<std::size_t> Dataset::indices_of(Label l) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == l) out.push_back(i);
  }
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * n_features_);
  std::vector<Label> labels;
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  return with_rows(std::move(values), std::move(labels));
}

Dataset Dataset::with_rows(std::vector<double> values, std::vector<Label> labels) const {
  return Dataset(std::move(values), n_features_, std::move(labels), class_names_, feature_names_,
                 label_name_);
}

void Dataset::validate() const {
  if (rows() < 2) throw DataError("empty dataset: at least 2 instances are required");
  if (cols() < 1) throw DataError("dataset has no feature columns");
  const std::size_t n_min = count(Label::minority);
  const std::size_t n_maj = count(Label::majority);
  if (n_min == 0 || n_maj == 0) throw DataError("dataset must contain exactly two classes");
  if (n_min > n_maj) {
    throw DataError("minority class '" + class_name(Label::minority) +
                    "' outnumbers the majority class");
  }
}

EncodedLabels encode_labels(std::span<const std::string> labels,
                            const std::optional<std::string>& minority) {
  std::map<std::string, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  if (counts.size() > 2) throw DataError("more than two classes in label column");
  if (counts.size() < 2) throw DataError("label column must contain two classes");

  // std::map iterates lexicographically, so on equal counts the first wins.
  auto first = counts.begin();
  auto second = std::next(first);
  std::string min_name;
  if (minority) {
    if (!counts.contains(*minority)) {
      throw DataError("minority label '" + *minority + "' not present in data");
    }
    min_name = *minority;
  } else {
    min_name = second->second < first->second ? second->first : first->first;
  }
  const std::string maj_name = min_name == first->first ? second->first : first->first;
  if (counts[min_name] > counts[maj_name]) {
    throw DataError("designated minority label '" + min_name + "' is the larger class");
  }

  EncodedLabels out;
  out.class_names = {maj_name, min_name};
  out.codes.reserve(labels.size());
  for (const auto& l : labels) out.codes.push_back(l == min_name ? Label::minority : Label::majority);
  return out;
}

Dataset read_csv(std::istream& in, const std::string& label_column,
                 const std::optional<std::string>& minority) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing CSV header row");
  const auto header = split_fields(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw DataError("label column '" + label_column + "' not found");
  const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_col) feature_names.push_back(header[j]);
  }
  if (feature_names.empty()) throw DataError("CSV has no feature columns");

  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError("row " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_col) {
        labels.push_back(fields[j]);
        continue;
      }
      const auto v = parse_real(fields[j]);
      if (!v) {
        throw DataError("row " + std::to_string(line_no) + ", column '" + header[j] +
                        "': non-numeric value '" + fields[j] + "'");
      }
      values.push_back(*v);
    }
  }
  if (labels.empty()) throw DataError("empty dataset");
  auto enc = encode_labels(labels, minority);
  const std::size_t n_features = feature_names.size();
  Dataset d(std::move(values), n_features, std::move(enc.codes),
            std::move(enc.class_names), std::move(feature_names), label_column);
  d.validate();
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::optional<std::string>& minority) {
  auto in = open_input(path);
  return read_csv(in, label_column, minority);
}

std::vector<std::string> csv_header(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing CSV header row");
  return split_fields(line);
}

Dataset read_keel(std::istream& in, const std::optional<std::string>& minority) {
  struct Attribute {
    std::string name;
    bool nominal = false;
  };
  std::vector<Attribute> attributes;
  std::vector<std::string> inputs;
  std::optional<std::string> output;
  bool in_data = false;

  std::vector<std::vector<std::string>> rows;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (!in_data && line.front() == '@') {
      if (starts_with_ci(line, "@attribute")) {
        auto rest = trim(line.substr(10));
        std::string name;
        if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
          const auto close = rest.find(rest.front(), 1);
          if (close == std::string_view::npos) throw DataError("malformed @attribute line");
          name = std::string(rest.substr(1, close - 1));
          rest = trim(rest.substr(close + 1));
        } else {
          const auto end = rest.find_first_of(" \t{[");
          name = std::string(rest.substr(0, end));
          rest = end == std::string_view::npos ? std::string_view{} : trim(rest.substr(end));
        }
        Attribute a{name, false};
        if (!rest.empty() && rest.front() == '{') {
          a.nominal = true;
        } else {
          const auto type = lower(rest.substr(0, rest.find_first_of(" \t[")));
          if (type != "real" && type != "integer" && type != "numeric") a.nominal = true;
        }
        attributes.push_back(std::move(a));
      } else if (starts_with_ci(line, "@inputs")) {
        inputs = split_names(line.substr(7));
      } else if (starts_with_ci(line, "@outputs") || starts_with_ci(line, "@output")) {
        const auto skip = starts_with_ci(line, "@outputs") ? 8 : 7;
        const auto names = split_names(line.substr(skip));
        if (names.size() != 1) throw DataError("exactly one @outputs attribute is supported");
        output = names.front();
      } else if (starts_with_ci(line, "@data")) {
        in_data = true;
      }
      continue;
    }
    if (!in_data) throw DataError("line " + std::to_string(line_no) + ": data before @data");
    auto fields = split_fields(line);
    for (auto& f : fields) f = std::string(trim(f));
    rows.push_back(std::move(fields));
  }

  if (!in_data) throw DataError("no @data section");
  if (attributes.empty()) throw DataError("no @attribute declarations");
  auto find_attr = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      if (attributes[i].name == name) return i;
    }
    return attributes.size();
  };
  const std::size_t out_idx = output ? find_attr(*output) : attributes.size() - 1;
  if (out_idx == attributes.size()) throw DataError("output attribute not declared: " + *output);

  std::vector<std::size_t> input_idx;
  if (!inputs.empty()) {
    for (const auto& name : inputs) {
      const auto i = find_attr(name);
      if (i == attributes.size()) throw DataError("input attribute not declared: " + name);
      input_idx.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      if (i != out_idx) input_idx.push_back(i);
    }
  }
  std::vector<std::string> feature_names;
  for (auto i : input_idx) {
    if (attributes[i].nominal) {
      throw DataError("non-numeric feature unsupported: " + attributes[i].name);
    }
    feature_names.push_back(attributes[i].name);
  }
  if (rows.empty()) throw DataError("empty dataset");

  std::vector<double> values;
  values.reserve(rows.size() * input_idx.size());
  std::vector<std::string> labels;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    if (fields.size() != attributes.size()) {
      throw DataError("data row " + std::to_string(r + 1) + ": expected " +
                      std::to_string(attributes.size()) + " values, found " +
                      std::to_string(fields.size()));
    }
    for (auto i : input_idx) {
      const auto v = parse_real(fields[i]);
      if (!v) {
        throw DataError("data row " + std::to_string(r + 1) + ", attribute '" +
                        attributes[i].name + "': non-numeric value '" + fields[i] + "'");
      }
      values.push_back(*v);
    }
    labels.push_back(fields[out_idx]);
  }
  auto enc = encode_labels(labels, minority);
  const std::size_t n_features = feature_names.size();
  Dataset d(std::move(values), n_features, std::move(enc.codes),
            std::move(enc.class_names), std::move(feature_names), attributes[out_idx].name);
  d.validate();
  return d;
}

Dataset load_keel(const std::filesystem::path& path, const std::optional<std::string>& minority) {
  auto in = open_input(path);
  return read_keel(in, minority);
}

void write_csv(const Dataset& d, std::ostream& out) {
  for (const auto& name : d.feature_names()) out << name << ',';
  out << d.label_name() << '\n';
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (double v : d.row(i)) out << format_real(v) << ',';
    out << d.class_name(d.label(i)) << '\n';
  }
}

void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  write_csv(d, out);
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t repetition, std::size_t fold) const {
  std::vector<std::size_t> out;
  const auto& a = assignments.at(repetition);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t repetition, std::size_t fold) const {
  std::vector<std::size_t> out;
  const auto& a = assignments.at(repetition);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_folds(const Dataset& d, std::size_t folds, std::size_t repeats,
                          std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("fold count must be at least 2");
  if (repeats < 1) throw std::invalid_argument("repetition count must be at least 1");
  for (Label l : {Label::minority, Label::majority}) {
    const auto c = d.count(l);
    if (c < folds) {
      throw DataError("class '" + d.class_name(l) + "' has " + std::to_string(c) +
                      " instances, fewer than " + std::to_string(folds) + " folds");
    }
  }

  FoldPlan plan{folds, repeats, seed, {}};
  plan.assignments.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    Rng rng(derive_seed(seed, {r}));
    auto minority = d.indices_of(Label::minority);
    auto majority = d.indices_of(Label::majority);
    rng.shuffle(std::span(minority));
    rng.shuffle(std::span(majority));

    std::vector<std::uint32_t> a(d.rows(), 0);
    std::size_t slot = 0;
    for (auto i : minority) a[i] = static_cast<std::uint32_t>(slot++ % folds);
    for (auto i : majority) a[i] = static_cast<std::uint32_t>(slot++ % folds);
    plan.assignments.push_back(std::move(a));
  }
  return plan;
}

SyntheticDataset generate_imbalanced(const SynthSpec& spec) {
  if (spec.features < 1) throw std::invalid_argument("at least one feature required");
  if (spec.informative > spec.features) {
    throw std::invalid_argument("informative feature count exceeds feature count");
  }
  if (!(spec.ir_target >= 1.0)) throw std::invalid_argument("imbalance ratio must be >= 1");
  if (!(spec.class_sep > 0.0)) throw std::invalid_argument("class separation must be > 0");
  if (!(spec.noise_flip_fraction >= 0.0 && spec.noise_flip_fraction < 1.0)) {
    throw std::invalid_argument("label flip fraction must lie in [0, 1)");
  }

  const auto n_min = static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.n) / (spec.ir_target + 1.0)));
  if (n_min < 1 || spec.n < 2 || n_min > spec.n - n_min) {
    throw DataError("n = " + std::to_string(spec.n) +
                    " is too small to realize the requested imbalance ratio");
  }

  Rng rng(spec.seed);
  std::vector<Label> truth(spec.n, Label::majority);
  std::fill(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(n_min), Label::minority);
  rng.shuffle(std::span(truth));

  const double half = spec.class_sep / 2.0;
  std::vector<double> values;
  values.reserve(spec.n * spec.features);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double centre = truth[i] == Label::minority ? half : -half;
    for (std::size_t j = 0; j < spec.features; ++j) {
      const double z = rng.normal();
      values.push_back(j < spec.informative ? centre + z : z);
    }
  }

  std::vector<Label> labels = truth;
  if (spec.noise_flip_fraction > 0.0) {
    for (auto& l : labels) {
      if (rng.bernoulli(spec.noise_flip_fraction)) l = other(l);
    }
  }

  Dataset d(std::move(values), spec.features, std::move(labels), {"negative", "positive"}, {},
            "class");
  d.validate();
  return {std::move(d), std::move(truth)};
}

Dataset make_imbalanced(const SynthSpec& spec) { return generate_imbalanced(spec).data; }

MinMaxScaler::MinMaxScaler(const Dataset& d) : min_(d.cols(), 0.0), range_(d.cols(), 0.0) {
  if (d.empty()) return;
  std::vector<double> max(d.cols());
  const auto first = d.row(0);
  std::copy(first.begin(), first.end(), min_.begin());
  std::copy(first.begin(), first.end(), max.begin());
  for (std::size_t i = 1; i < d.rows(); ++i) {
    const auto r = d.row(i);
    for (std::size_t j = 0; j < d.cols(); ++j) {
      min_[j] = std::min(min_[j], r[j]);
      max[j] = std::max(max[j], r[j]);
    }
  }
  for (std::size_t j = 0; j < d.cols(); ++j) range_[j] = max[j] - min_[j];
}

double MinMaxScaler::transform(std::size_t feature, double value) const {
  const double range = range_[feature];
  return range > 0.0 ? (value - min_[feature]) / range : 0.5;
}

std::vector<double> MinMaxScaler::transform(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = transform(j, row[j]);
  return out;
}

std::vector<double> MinMaxScaler::transform_all(const Dataset& d) const {
  std::vector<double> out;
  out.reserve(d.values().size());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const auto r = d.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out.push_back(transform(j, r[j]));
  }
  return out;
}

Dataset min_max_normalize(const Dataset& d) {
  const MinMaxScaler scaler(d);
  return d.with_rows(scaler.transform_all(d), d.labels());
}

}  // namespace imbal
