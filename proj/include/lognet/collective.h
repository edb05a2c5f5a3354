#ifndef LOGNET_COLLECTIVE_H_
#define LOGNET_COLLECTIVE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lognet/dataset.h"
#include "lognet/network.h"

namespace lognet {

// Non-negative exact fraction. Not reduced: 6/9 stays 6/9 for display,
// comparisons are by value.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    const auto lhs = static_cast<unsigned __int128>(a.num) * b.den;
    const auto rhs = static_cast<unsigned __int128>(b.num) * a.den;
    return lhs <=> rhs;
  }
  friend bool operator==(const Fraction& a, const Fraction& b) { return (a <=> b) == 0; }
};

// Accepts "p/q", integers and plain decimals ("0.8" becomes 8/10 exactly).
Fraction parse_fraction(const std::string& text);

// Six decimal places, e.g. "0.666667".
std::string format_decimal(const Fraction& f);

inline constexpr const char* kDefaultChi0 = "0.8";

enum class Vote { kZero, kOne, kAbstain };

const char* to_string(Vote v);

struct Decision {
  Vote label = Vote::kAbstain;
  std::size_t l1 = 0;  // votes for the taken decision (half of L on a tie)
  std::size_t L = 0;
  Fraction chi;        // l1 / L
  bool plausible = false;
};

class Collective {
 public:
  // Throws std::invalid_argument when empty or when two members share a
  // structure, or chi0 is outside (0, 1].
  Collective(std::vector<Expr> members, Fraction chi0 = parse_fraction(kDefaultChi0));

  const std::vector<Expr>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Fraction& chi0() const { return chi0_; }
  Collective with_chi0(Fraction chi0) const { return Collective(members_, chi0); }

  // Union of sensors read by any member, ascending.
  std::vector<std::size_t> relevant_features() const;

 private:
  std::vector<Expr> members_;
  Fraction chi0_;
};

// Majority vote of the members on one sensor row. An exact tie abstains.
Decision vote(const Collective& c, const BitVector& sensor_row);

inline constexpr std::size_t kMaxCubeBits = 24;

struct CoherenceRow {
  BitVector bits;  // values of the enumerated sensors, in `features` order
  Decision decision;
};

struct CoherenceMap {
  std::vector<std::size_t> features;  // enumerated sensors; all others are don't-care (fed 0)
  std::vector<CoherenceRow> rows;     // ascending binary order, first feature most significant
};

// Sensors a coherence map over `c` enumerates. Throws std::length_error
// above kMaxCubeBits.
std::vector<std::size_t> cube_features(const Collective& c, std::size_t m, bool restrict_to_used);

// Calls `visit` for every combination of `features` in ascending binary
// order (first feature most significant) without materializing the table.
void visit_cube(const Collective& c, const std::vector<std::size_t>& features, std::size_t m,
                const std::function<void(const BitVector&, const Decision&)>& visit);

// Enumerates every combination of the relevant sensors (restricted to the
// members' sensors when `restrict_to_used`, otherwise all m). Throws
// std::length_error above kMaxCubeBits sensors.
CoherenceMap coherence_map(const Collective& c, std::size_t m, bool restrict_to_used = true);

// Expands a combination of the enumerated sensors into a full-width row.
BitVector expand_row(const BitVector& bits, const std::vector<std::size_t>& features, std::size_t m);

// CSV with columns: <feature names>..., label, l1, L, chi, plausible.
std::string coherence_map_csv(const CoherenceMap& map, const std::vector<FeatureSpec>& features);

struct ClassifiedRow {
  std::optional<Decision> decision;
  std::string error;  // set when the row does not fit the schema
};

// Quantizes each raw row with the stored spec, then votes. Bad rows are
// reported individually and do not stop the batch.
std::vector<ClassifiedRow> classify_batch(const Collective& c, const std::vector<FeatureSpec>& features,
                                          const QuantizationSpec& qspec,
                                          const std::vector<std::vector<double>>& raw_rows);

}  // namespace lognet

#endif  // LOGNET_COLLECTIVE_H_
