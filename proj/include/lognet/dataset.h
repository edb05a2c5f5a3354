#ifndef LOGNET_DATASET_H_
#define LOGNET_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lognet/bitvec.h"

namespace lognet {

// Input problems (malformed files, contract violations on user data).
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FeatureKind { kQuantitative, kBoolean };

const char* to_string(FeatureKind kind);
FeatureKind parse_feature_kind(const std::string& text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kBoolean;
  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

// Labeled instances with raw feature values. Construction validates every
// invariant: n >= 2, both classes present, unique nonempty names, finite
// quantitative values and 0/1 boolean values.
class LearningSet {
 public:
  LearningSet(std::vector<FeatureSpec> features, std::vector<std::vector<double>> rows,
              std::vector<std::uint8_t> labels);

  std::size_t n() const { return rows_.size(); }
  std::size_t m() const { return features_.size(); }
  const std::vector<FeatureSpec>& features() const { return features_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  std::vector<double> column(std::size_t j) const;

 private:
  std::vector<FeatureSpec> features_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::uint8_t> labels_;
};

void validate_feature_names(const std::vector<FeatureSpec>& features);

// name -> kind. Parsed from a sidecar of `name = kind` lines.
using Schema = std::unordered_map<std::string, FeatureKind>;

Schema parse_schema(const std::string& text);
Schema load_schema(const std::string& path);

// Header row of feature names plus a final `class` column. Without a schema,
// a column is boolean when every cell is 0 or 1 and quantitative otherwise.
LearningSet parse_csv(const std::string& text, const std::optional<Schema>& schema);
LearningSet load_csv(const std::string& path, const std::optional<Schema>& schema);

// Unlabeled rows for prediction. A trailing `class` column, if present, is
// ignored. Returns the header and raw cell text per row.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
RawTable parse_raw_csv(const std::string& text);
std::string read_file(const std::string& path);

enum class Polarity {
  kDirect,    // z = 1 iff x >= u
  kInverted,  // z = 0 iff x >= u
};

const char* to_string(Polarity p);
Polarity parse_polarity(const std::string& text);

struct Threshold {
  double u = 0.0;
  Polarity polarity = Polarity::kDirect;
  std::size_t train_errors = 0;
  bool degenerate = false;  // feature was constant on the learning set

  bool apply(double x) const {
    const bool above = x >= u;
    return polarity == Polarity::kDirect ? above : !above;
  }
  friend bool operator==(const Threshold&, const Threshold&) = default;
};

// Error-minimizing threshold over midpoints of consecutive distinct sorted
// values plus one sentinel below the minimum. Ties prefer the smaller u, then
// direct polarity.
Threshold quantize_feature(const std::vector<double>& values, const std::vector<std::uint8_t>& labels);

// One optional Threshold per feature, present exactly for quantitative ones.
struct QuantizationSpec {
  std::vector<std::optional<Threshold>> thresholds;
  friend bool operator==(const QuantizationSpec&, const QuantizationSpec&) = default;
};

class BooleanLearningSet {
 public:
  BooleanLearningSet(std::vector<FeatureSpec> features, std::vector<BitVector> columns, BitVector labels,
                     QuantizationSpec provenance);

  std::size_t n() const { return labels_.size(); }
  std::size_t m() const { return columns_.size(); }
  const std::vector<FeatureSpec>& features() const { return features_; }
  const BitVector& column(std::size_t j) const { return columns_.at(j); }
  const std::vector<BitVector>& columns() const { return columns_; }
  const BitVector& labels() const { return labels_; }
  const QuantizationSpec& provenance() const { return provenance_; }

  // Sensor bits of instance i, one per feature.
  BitVector row(std::size_t i) const;

  // Same data with instances reordered: new instance t is old instance perm[t].
  BooleanLearningSet permuted(const std::vector<std::size_t>& perm) const;

 private:
  std::vector<FeatureSpec> features_;
  std::vector<BitVector> columns_;
  BitVector labels_;
  QuantizationSpec provenance_;
};

// Builds a boolean learning set directly from bit rows; all features boolean.
BooleanLearningSet make_boolean_set(const std::vector<std::vector<std::uint8_t>>& rows,
                                    const std::vector<std::uint8_t>& labels,
                                    std::vector<std::string> names = {});

BooleanLearningSet binarize(const LearningSet& set, const std::optional<QuantizationSpec>& spec = std::nullopt);

// Quantizes one raw instance with a stored spec. Throws DatasetError when the
// row width or a boolean cell does not fit the schema.
BitVector binarize_row(const std::vector<FeatureSpec>& features, const QuantizationSpec& spec,
                       const std::vector<double>& raw);

enum class SplitStrategy { kInterleave, kSeededRandom };

const char* to_string(SplitStrategy s);

struct SplitAB {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

// Partitions instance indices 0..n-1 into two halves differing in size by at
// most one. Interleave puts even positions in A; seeded-random shuffles with a
// fixed-seed Mersenne twister and gives A the first ceil(n/2).
SplitAB split_ab(std::size_t n, SplitStrategy strategy, std::uint64_t seed = 0);

}  // namespace lognet

#endif  // LOGNET_DATASET_H_
