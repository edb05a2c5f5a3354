#ifndef LOGNET_CLI_H_
#define LOGNET_CLI_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lognet/classic.h"
#include "lognet/dataset.h"
#include "lognet/synthesis.h"

namespace lognet {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitExhausted = 2;

// Runs the `lognet` command line. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CompareGrid {
  std::vector<std::pair<double, double>> weights = {{1.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}};
  std::vector<double> deltas = {0.0};
  std::vector<Freedom> freedoms = {Freedom::fraction(0.4), Freedom::fraction(1.0)};
  // Split settings: interleave, then seeded-random with each seed.
  bool interleave = true;
  std::vector<std::uint64_t> seeds = {1, 2};
  std::size_t max_layers = 32;
};

struct CompareRun {
  ClassicConfig config;
  std::size_t depth = 0;
  std::size_t mu = 0;
  std::size_t features = 0;
  std::string structure;
  // Exterior collective obtained alongside this grid point.
  std::string exterior_members;
};

struct CompareReport {
  Outcome exterior_outcome = Outcome::kExhausted;
  std::size_t exterior_layer = 0;
  std::size_t exterior_mu = 0;
  std::size_t exterior_features = 0;
  std::string exterior_members;  // member signatures joined by "; "
  std::vector<CompareRun> classic;
  std::size_t classic_distinct = 0;  // distinct classic structures across the grid
  bool exterior_fixed = true;        // exterior result identical at every grid point
};

CompareReport compare_methods(const BooleanLearningSet& bset, const CompareGrid& grid,
                              const SynthesisConfig& exterior_config = {});

std::string format_compare(const CompareReport& report);

}  // namespace lognet

#endif  // LOGNET_CLI_H_
