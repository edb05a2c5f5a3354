#include "lognet/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace lognet {
namespace {

constexpr const char* kLabelColumn = "class";

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string where(std::size_t line, const std::string& column) {
  return "line " + std::to_string(line) + ", column '" + column + "'";
}

}  // namespace

const char* to_string(FeatureKind kind) {
  return kind == FeatureKind::kQuantitative ? "quantitative" : "boolean";
}

FeatureKind parse_feature_kind(const std::string& text) {
  const std::string t = trim(text);
  if (t == "quantitative" || t == "q") return FeatureKind::kQuantitative;
  if (t == "boolean" || t == "b") return FeatureKind::kBoolean;
  throw DatasetError("unknown feature kind '" + t + "' (expected quantitative or boolean)");
}

const char* to_string(Polarity p) { return p == Polarity::kDirect ? "direct" : "inverted"; }

Polarity parse_polarity(const std::string& text) {
  if (text == "direct") return Polarity::kDirect;
  if (text == "inverted") return Polarity::kInverted;
  throw DatasetError("unknown polarity '" + text + "'");
}

const char* to_string(SplitStrategy s) {
  return s == SplitStrategy::kInterleave ? "interleave" : "random";
}

void validate_feature_names(const std::vector<FeatureSpec>& features) {
  std::set<std::string> seen;
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j].name.empty())
      throw DatasetError("feature " + std::to_string(j) + " has an empty name");
    if (!seen.insert(features[j].name).second)
      throw DatasetError("duplicate feature name '" + features[j].name + "' at column " + std::to_string(j));
  }
}

LearningSet::LearningSet(std::vector<FeatureSpec> features, std::vector<std::vector<double>> rows,
                         std::vector<std::uint8_t> labels)
    : features_(std::move(features)), rows_(std::move(rows)), labels_(std::move(labels)) {
  validate_feature_names(features_);
  if (rows_.size() != labels_.size()) throw DatasetError("row count and label count differ");
  if (rows_.size() < 2) throw DatasetError("a learning set needs at least 2 instances");
  std::size_t ones = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (labels_[i] > 1) throw DatasetError("non-binary label at instance " + std::to_string(i));
    ones += labels_[i];
    if (rows_[i].size() != features_.size())
      throw DatasetError("instance " + std::to_string(i) + " has " + std::to_string(rows_[i].size()) +
                         " values, expected " + std::to_string(features_.size()));
    for (std::size_t j = 0; j < features_.size(); ++j) {
      const double x = rows_[i][j];
      if (!std::isfinite(x))
        throw DatasetError("non-finite value at instance " + std::to_string(i) + ", feature '" +
                           features_[j].name + "'");
      if (features_[j].kind == FeatureKind::kBoolean && x != 0.0 && x != 1.0)
        throw DatasetError("boolean feature '" + features_[j].name + "' has value other than 0/1 at instance " +
                           std::to_string(i));
    }
  }
  if (ones == 0 || ones == rows_.size())
    throw DatasetError("learning set must contain both classes (labels 0 and 1)");
}

std::vector<double> LearningSet::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(row.at(j));
  return out;
}

Schema parse_schema(const std::string& text) {
  Schema schema;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find('=');
    if (sep == std::string::npos) sep = line.find(':');
    if (sep == std::string::npos)
      throw DatasetError("schema line " + std::to_string(line_no) + ": expected 'name = kind'");
    const std::string name = trim(line.substr(0, sep));
    if (name.empty()) throw DatasetError("schema line " + std::to_string(line_no) + ": empty feature name");
    FeatureKind kind;
    try {
      kind = parse_feature_kind(line.substr(sep + 1));
    } catch (const DatasetError& e) {
      throw DatasetError("schema line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!schema.emplace(name, kind).second)
      throw DatasetError("schema line " + std::to_string(line_no) + ": duplicate feature '" + name + "'");
  }
  return schema;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Schema load_schema(const std::string& path) { return parse_schema(read_file(path)); }

RawTable parse_raw_csv(const std::string& text) {
  RawTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw DatasetError("CSV is empty (no header row)");
  return table;
}

LearningSet parse_csv(const std::string& text, const std::optional<Schema>& schema) {
  // Track source line numbers for diagnostics.
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> body;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header.empty()) {
      header = split_line(line);
    } else {
      body.emplace_back(line_no, split_line(line));
    }
  }
  if (header.empty()) throw DatasetError("CSV is empty (no header row)");

  const auto label_it = std::find(header.begin(), header.end(), kLabelColumn);
  if (label_it == header.end()) throw DatasetError("missing label column 'class' in header");
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());
  if (std::count(header.begin(), header.end(), kLabelColumn) > 1)
    throw DatasetError("label column 'class' appears more than once");

  std::vector<FeatureSpec> features;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_col) continue;
    features.push_back({header[c], FeatureKind::kBoolean});
    feature_cols.push_back(c);
  }
  validate_feature_names(features);
  if (schema) {
    for (auto& f : features) {
      auto it = schema->find(f.name);
      if (it == schema->end()) throw DatasetError("feature '" + f.name + "' is not declared in the schema");
      f.kind = it->second;
    }
    for (const auto& [name, kind] : *schema) {
      if (std::none_of(features.begin(), features.end(), [&](const FeatureSpec& f) { return f.name == name; }))
        throw DatasetError("schema declares feature '" + name + "' which is not in the CSV header");
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::uint8_t> labels;
  for (const auto& [ln, cells] : body) {
    if (cells.size() != header.size())
      throw DatasetError("line " + std::to_string(ln) + ": expected " + std::to_string(header.size()) +
                         " cells, found " + std::to_string(cells.size()));
    const auto label = parse_number(cells[label_col]);
    if (!label || (*label != 0.0 && *label != 1.0))
      throw DatasetError(where(ln, kLabelColumn) + ": non-binary label '" + cells[label_col] + "'");
    labels.push_back(static_cast<std::uint8_t>(*label));
    std::vector<double> row;
    row.reserve(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
      const auto& cell = cells[feature_cols[j]];
      const auto value = parse_number(cell);
      if (!value || !std::isfinite(*value))
        throw DatasetError(where(ln, features[j].name) + ": non-numeric value '" + cell + "'");
      if (features[j].kind == FeatureKind::kBoolean && schema && *value != 0.0 && *value != 1.0)
        throw DatasetError(where(ln, features[j].name) + ": boolean feature must be 0 or 1, got '" + cell + "'");
      row.push_back(*value);
    }
    rows.push_back(std::move(row));
  }

  if (!schema) {
    for (std::size_t j = 0; j < features.size(); ++j) {
      const bool all_bits = std::all_of(rows.begin(), rows.end(),
                                        [j](const auto& r) { return r[j] == 0.0 || r[j] == 1.0; });
      features[j].kind = all_bits ? FeatureKind::kBoolean : FeatureKind::kQuantitative;
    }
  }
  return LearningSet(std::move(features), std::move(rows), std::move(labels));
}

LearningSet load_csv(const std::string& path, const std::optional<Schema>& schema) {
  return parse_csv(read_file(path), schema);
}

Threshold quantize_feature(const std::vector<double>& values, const std::vector<std::uint8_t>& labels) {
  const std::size_t n = values.size();
  if (n != labels.size()) throw std::invalid_argument("values and labels differ in length");
  if (n < 2) throw std::invalid_argument("quantization needs at least 2 instances");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::size_t ones = 0;
  for (auto y : labels) ones += (y != 0);
  const std::size_t zeros = n - ones;

  const double lo = values[order.front()];
  double sentinel = lo - 1.0;
  if (!(sentinel < lo)) sentinel = std::nextafter(lo, -std::numeric_limits<double>::infinity());

  // Sentinel: every instance is above u, so direct predicts all ones.
  Threshold best{sentinel, Polarity::kDirect, zeros, false};
  if (ones < best.train_errors) best = {sentinel, Polarity::kInverted, ones, false};

  if (values[order.front()] == values[order.back()]) {
    best.degenerate = true;
    return best;
  }

  // Sweep boundaries in increasing u. `below_ones` / `below_zeros` count
  // instances strictly below the boundary.
  std::size_t below_ones = 0;
  std::size_t below_zeros = 0;
  for (std::size_t p = 1; p < n; ++p) {
    const std::size_t prev = order[p - 1];
    (labels[prev] != 0 ? below_ones : below_zeros) += 1;
    const double a = values[prev];
    const double b = values[order[p]];
    if (!(a < b)) continue;
    double u = a + (b - a) / 2.0;
    if (!(u > a && u <= b)) u = b;
    const std::size_t direct = below_ones + (zeros - below_zeros);
    const std::size_t inverted = n - direct;
    if (direct < best.train_errors) {
      best = {u, Polarity::kDirect, direct, false};
    }
    if (inverted < best.train_errors) {
      best = {u, Polarity::kInverted, inverted, false};
    }
  }
  return best;
}

BooleanLearningSet::BooleanLearningSet(std::vector<FeatureSpec> features, std::vector<BitVector> columns,
                                       BitVector labels, QuantizationSpec provenance)
    : features_(std::move(features)),
      columns_(std::move(columns)),
      labels_(std::move(labels)),
      provenance_(std::move(provenance)) {
  if (features_.size() != columns_.size()) throw DatasetError("feature count and column count differ");
  if (provenance_.thresholds.size() != features_.size())
    throw DatasetError("quantization spec does not cover every feature");
  if (labels_.size() < 2) throw DatasetError("a learning set needs at least 2 instances");
  for (const auto& c : columns_) {
    if (c.size() != labels_.size()) throw DatasetError("sensor column length differs from label count");
  }
}

BitVector BooleanLearningSet::row(std::size_t i) const {
  if (i >= n()) throw std::out_of_range("instance index out of range");
  BitVector r(m());
  for (std::size_t j = 0; j < m(); ++j) r.set(j, columns_[j].get(i));
  return r;
}

BooleanLearningSet BooleanLearningSet::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n()) throw std::invalid_argument("permutation length differs from n");
  std::vector<BitVector> cols;
  cols.reserve(m());
  for (const auto& c : columns_) cols.push_back(select(c, perm));
  return BooleanLearningSet(features_, std::move(cols), select(labels_, perm), provenance_);
}

BooleanLearningSet make_boolean_set(const std::vector<std::vector<std::uint8_t>>& rows,
                                    const std::vector<std::uint8_t>& labels, std::vector<std::string> names) {
  if (rows.empty()) throw DatasetError("no instances");
  const std::size_t m = rows.front().size();
  if (names.empty()) {
    for (std::size_t j = 0; j < m; ++j) names.push_back("x" + std::to_string(j));
  }
  if (names.size() != m) throw DatasetError("name count differs from row width");
  std::vector<FeatureSpec> features;
  for (auto& name : names) features.push_back({std::move(name), FeatureKind::kBoolean});
  validate_feature_names(features);
  std::vector<BitVector> cols(m, BitVector(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) throw DatasetError("ragged bit rows");
    for (std::size_t j = 0; j < m; ++j) {
      if (rows[i][j] > 1) throw DatasetError("bit rows must contain only 0/1");
      cols[j].set(i, rows[i][j] != 0);
    }
  }
  return BooleanLearningSet(std::move(features), std::move(cols), BitVector::from_bits(labels),
                            QuantizationSpec{std::vector<std::optional<Threshold>>(m)});
}

BooleanLearningSet binarize(const LearningSet& set, const std::optional<QuantizationSpec>& spec) {
  const std::size_t m = set.m();
  QuantizationSpec qspec;
  if (spec) {
    if (spec->thresholds.size() != m)
      throw DatasetError("quantization spec covers " + std::to_string(spec->thresholds.size()) +
                         " features, expected " + std::to_string(m));
    for (std::size_t j = 0; j < m; ++j) {
      const bool quantitative = set.features()[j].kind == FeatureKind::kQuantitative;
      if (quantitative && !spec->thresholds[j])
        throw DatasetError("quantization spec has no threshold for quantitative feature '" +
                           set.features()[j].name + "'");
      if (!quantitative && spec->thresholds[j])
        throw DatasetError("quantization spec has a threshold for boolean feature '" + set.features()[j].name +
                           "'");
    }
    qspec = *spec;
  } else {
    qspec.thresholds.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (set.features()[j].kind == FeatureKind::kQuantitative)
        qspec.thresholds[j] = quantize_feature(set.column(j), set.labels());
    }
  }

  std::vector<BitVector> cols(m, BitVector(set.n()));
  for (std::size_t i = 0; i < set.n(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double x = set.rows()[i][j];
      cols[j].set(i, qspec.thresholds[j] ? qspec.thresholds[j]->apply(x) : x != 0.0);
    }
  }
  return BooleanLearningSet(set.features(), std::move(cols), BitVector::from_bits(set.labels()), std::move(qspec));
}

BitVector binarize_row(const std::vector<FeatureSpec>& features, const QuantizationSpec& spec,
                       const std::vector<double>& raw) {
  if (raw.size() != features.size())
    throw DatasetError("row has " + std::to_string(raw.size()) + " values, expected " +
                       std::to_string(features.size()));
  if (spec.thresholds.size() != features.size()) throw DatasetError("quantization spec width mismatch");
  BitVector bits(features.size());
  for (std::size_t j = 0; j < features.size(); ++j) {
    const double x = raw[j];
    if (!std::isfinite(x)) throw DatasetError("non-finite value for feature '" + features[j].name + "'");
    if (spec.thresholds[j]) {
      bits.set(j, spec.thresholds[j]->apply(x));
    } else {
      if (x != 0.0 && x != 1.0)
        throw DatasetError("boolean feature '" + features[j].name + "' must be 0 or 1");
      bits.set(j, x != 0.0);
    }
  }
  return bits;
}

SplitAB split_ab(std::size_t n, SplitStrategy strategy, std::uint64_t seed) {
  if (n < 4) throw DatasetError("A/B split needs at least 4 instances");
  SplitAB split;
  if (strategy == SplitStrategy::kInterleave) {
    for (std::size_t i = 0; i < n; ++i) (i % 2 == 0 ? split.a : split.b).push_back(i);
    return split;
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Fisher-Yates on raw engine output keeps splits identical across
  // standard library implementations.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t k = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(idx[i], idx[k]);
  }
  const std::size_t half = (n + 1) / 2;
  split.a.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(half));
  split.b.assign(idx.begin() + static_cast<std::ptrdiff_t>(half), idx.end());
  std::sort(split.a.begin(), split.a.end());
  std::sort(split.b.begin(), split.b.end());
  return split;
}

}  // namespace lognet
