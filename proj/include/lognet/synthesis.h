#ifndef LOGNET_SYNTHESIS_H_
#define LOGNET_SYNTHESIS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lognet/dataset.h"
#include "lognet/network.h"

namespace lognet {

struct SynthesisConfig {
  std::size_t max_layers = 32;
  // Survivors kept per layer; absent means every survivor feeds the next layer.
  std::optional<std::size_t> width_cap;
  bool dedup = true;
  // Worker threads for candidate evaluation. The result does not depend on it.
  std::size_t threads = 1;
  // When set, candidates are generated in a permuted order. The result does
  // not depend on it either; tests use it to check order independence.
  std::optional<std::uint64_t> generation_order_seed;
  // Keep every layer's survivors in the result (memory grows with the run).
  bool record_layers = false;

  void validate() const;
};

// A generated network plus the losses of the two networks it was built from:
// its parent (a previous-layer network, or sensor j in layer 1) and the
// attached sensor k.
struct ScoredCandidate {
  Candidate candidate;
  std::size_t parent_mu = 0;
  std::size_t feature_mu = 0;
};

struct Survivor {
  Candidate candidate;
  std::size_t parent_mu = 0;
  std::size_t feature_mu = 0;
  std::string signature;
};

struct LayerTrace {
  std::size_t layer = 0;
  std::size_t generated = 0;
  std::size_t passed = 0;     // satisfied mu < min(parent_mu, feature_mu)
  std::size_t deduped = 0;    // removed as structural duplicates
  std::size_t truncated = 0;  // removed by width_cap
  std::size_t survivors = 0;
  std::optional<std::size_t> min_mu;  // over survivors
};

struct LayerState {
  std::size_t r = 0;
  std::vector<Survivor> survivors;
  std::vector<std::size_t> feature_mus;
};

enum class Outcome { kSuccess, kExhausted };
enum class ExhaustReason { kNoSurvivors, kLayerBudget };

const char* to_string(Outcome o);
const char* to_string(ExhaustReason r);

struct SynthesisResult {
  Outcome outcome = Outcome::kExhausted;
  // Success: the layer r* whose zero-loss survivors form the collective.
  // Exhausted: the layer at which synthesis stopped (the first layer with no
  // survivors, or the budget layer).
  std::size_t layer = 0;
  std::optional<ExhaustReason> reason;
  // Success: every zero-loss survivor of layer r*. Exhausted: the lowest-loss
  // networks found so far (sensors themselves when no layer had survivors).
  std::vector<Candidate> members;
  std::size_t best_mu = 0;
  // Set when a raw sensor already had zero loss and r* = 0.
  bool sensor_shortcut = false;
  std::vector<std::size_t> feature_mus;
  std::vector<LayerTrace> trace;
  std::vector<LayerState> layers;  // filled when config.record_layers
};

// Loss of each sensor used as a classifier on its own.
std::vector<std::size_t> feature_losses(const BooleanLearningSet& bset);

// All C(m,2) * 10 layer-1 networks g(x_j, x_k), j < k, in (j, k, gate) order.
std::vector<ScoredCandidate> generate_layer1(const BooleanLearningSet& bset);

// Every parent extended with every sensor and gate: |parents| * m * 10
// networks in (parent, k, gate) order.
std::vector<ScoredCandidate> generate_layer_r(const std::vector<Candidate>& parents, const BooleanLearningSet& bset);

struct SelectionOptions {
  std::optional<std::size_t> width_cap;
  bool dedup = true;
};

struct Selection {
  std::vector<Survivor> survivors;  // ascending mu, then signature
  std::size_t passed = 0;
  std::size_t deduped = 0;
  std::size_t truncated = 0;
};

// Keeps candidates whose loss is strictly below both constituent losses, then
// drops structural duplicates, orders and truncates.
Selection select_exterior_addition(std::vector<ScoredCandidate> candidates, const SelectionOptions& options);

SynthesisResult synthesize(const BooleanLearningSet& bset, const SynthesisConfig& config = {});

}  // namespace lognet

#endif  // LOGNET_SYNTHESIS_H_
