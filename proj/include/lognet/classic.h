#ifndef LOGNET_CLASSIC_H_
#define LOGNET_CLASSIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lognet/dataset.h"
#include "lognet/network.h"

namespace lognet {

// Number of candidates carried between layers: either an absolute count or
// a fraction of L1 = C(m,2).
class Freedom {
 public:
  static Freedom count(std::size_t n);
  static Freedom fraction(double f);
  // "0.4" is a fraction, "12" is a count.
  static Freedom parse(const std::string& text);

  bool is_fraction() const { return is_fraction_; }
  double value() const { return value_; }
  std::size_t resolve(std::size_t l1) const;
  std::string to_string() const;

 private:
  bool is_fraction_ = true;
  double value_ = 0.4;
};

struct ClassicConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 0.0;
  Freedom freedom = Freedom::fraction(0.4);
  SplitStrategy split = SplitStrategy::kInterleave;
  std::uint64_t seed = 0;
  std::size_t max_layers = 32;

  void validate() const;
};

// Gate with fewest errors on `subset` for inputs (u1, u2); ties go to the
// lowest id.
GateId fit_gate(const BitVector& u1, const BitVector& u2, const BitVector& labels,
                std::span<const std::size_t> subset);

// Disagreement between the A-fitted and B-fitted outputs on the whole set.
std::size_t unbias(const BitVector& out_a, const BitVector& out_b);

// Whole-set error of the A fit plus that of the B fit.
std::size_t regularity(const BitVector& out_a, const BitVector& out_b, const BitVector& labels);

// alpha * bu + beta * reg. Throws std::invalid_argument for negative weights
// or alpha = beta = 0.
double convolution(double bu, double reg, double alpha, double beta);

struct FittedCandidate {
  // Sensor sequence: the layer-1 pair, then one sensor per further layer.
  std::vector<std::size_t> structure;
  Expr fit_a;  // gates chosen on subset A along the whole chain
  Expr fit_b;
  BitVector out_a;  // on the whole set
  BitVector out_b;
  std::size_t bu = 0;
  std::size_t reg = 0;
  double cr = 0.0;
  std::string key;  // "[x0 x1 x4]"
};

struct ClassicLayerTrace {
  std::size_t layer = 0;
  std::size_t generated = 0;
  std::size_t kept = 0;
  double cr_min = 0.0;
  std::string best_key;
};

struct ClassicResult {
  Expr model;                   // best structure refit on the whole set
  std::size_t mu = 0;           // whole-set loss of `model`
  std::size_t selected_layer = 0;
  std::size_t layers_generated = 0;
  double cr_min = 0.0;
  std::vector<std::string> tied_keys;  // structures sharing the selected CR
  std::vector<ClassicLayerTrace> trace;
  SplitAB split;
  std::size_t freedom = 0;
};

// One classic layer: fits and scores every structure, keeps the F best by
// (cr, key). `parents` empty means layer 1.
std::vector<FittedCandidate> classic_layer(const std::vector<FittedCandidate>& parents, const BooleanLearningSet& bset,
                                           const SplitAB& split, const ClassicConfig& config,
                                           std::size_t* generated = nullptr);

// Refits a structure greedily on every instance, layer by layer.
Expr refit_structure(const std::vector<std::size_t>& structure, const BooleanLearningSet& bset);

ClassicResult synthesize_classic(const BooleanLearningSet& bset, const ClassicConfig& config = {});

}  // namespace lognet

#endif  // LOGNET_CLASSIC_H_
