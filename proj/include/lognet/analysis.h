#ifndef LOGNET_ANALYSIS_H_
#define LOGNET_ANALYSIS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lognet/dataset.h"
#include "lognet/synthesis.h"

namespace lognet {

using BigInt = boost::multiprecision::cpp_int;

// Upper bound on networks generated in layer r from m sensors:
// C(m,2) * 10^r * m^(r-1).
BigInt q_layer(std::size_t m, std::size_t r);

// Number of Boolean functions of m variables, 2^(2^m).
BigInt q_star(std::size_t m);

inline constexpr std::size_t kMaxCountSensors = 20;

struct ComplexityReport {
  std::size_t m = 0;
  std::size_t r_star = 0;
  std::vector<BigInt> q_per_layer;  // r = 1..r_star
  BigInt q_sum;
  BigInt q_star;
  bool holds = false;               // q_sum < q_star
  std::string ratio;                // q_star / q_sum, in scientific notation
  std::optional<std::string> note;  // discrepancy with a published worked example
};

// Throws std::invalid_argument for m < 2, r_star < 1 or m > kMaxCountSensors.
ComplexityReport check_inequality(std::size_t m, std::size_t r_star);

std::string format_report(const ComplexityReport& report);
std::string format_report_json(const ComplexityReport& report);

inline constexpr std::size_t kOracleMaxSensors = 6;
inline constexpr std::size_t kOracleMaxDepth = 3;

struct OracleLayer {
  std::size_t depth = 0;
  std::size_t count = 0;  // networks generated at this depth
  std::size_t best_mu = 0;
  std::string best_signature;  // first network reaching best_mu in generation order
};

// Every network of the layered grammar up to depth r_max, with no selection
// and no deduplication. Throws std::invalid_argument beyond
// kOracleMaxSensors sensors or kOracleMaxDepth layers.
std::vector<OracleLayer> enumerate_unpruned(const BooleanLearningSet& bset, std::size_t r_max);

struct GapRow {
  std::size_t depth = 0;
  std::size_t oracle_depth_mu = 0;  // best over networks of exactly this depth
  std::size_t oracle_best_mu = 0;   // best over depths 0..depth (0 = raw sensors)
  std::size_t synthesis_mu = 0;     // best loss synthesis holds by this depth
  std::size_t gap = 0;              // synthesis_mu - oracle_best_mu
};

struct GapReport {
  Outcome outcome = Outcome::kExhausted;
  std::size_t synthesis_layer = 0;  // where synthesis stopped
  std::size_t synthesis_mu = 0;     // loss synthesis ended with
  std::size_t oracle_best_mu = 0;   // best over depths 0..r_max
  std::size_t oracle_best_depth = 0;
  std::size_t gap = 0;              // synthesis_mu - oracle_best_mu
  std::vector<GapRow> rows;
};

// Compares what the greedy selection achieves within r_max layers against
// exhaustive search. Once synthesis has stopped, its final loss is carried to
// deeper rows.
GapReport pruning_gap(const BooleanLearningSet& bset, std::size_t r_max, const SynthesisConfig& config = {});

std::string format_gap(const GapReport& report);

}  // namespace lognet

#endif  // LOGNET_ANALYSIS_H_
