#ifndef LOGNET_NETWORK_H_
#define LOGNET_NETWORK_H_

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "lognet/bitvec.h"
#include "lognet/dataset.h"
#include "lognet/gates.h"

namespace lognet {

// A layered logical network. Either a leaf reading one sensor, or a gate
// combining a previous-layer network (left) with one raw sensor (right).
// A layer-1 node has two leaf inputs with left index < right index.
//
// Expr is an immutable handle; copies share structure, so a parent network
// feeding several consumers is stored once.
class Expr {
 public:
  // The leaf x0.
  Expr() : Expr(leaf(0)) {}

  static Expr leaf(std::size_t feature);
  // Throws std::invalid_argument when the layer-1 ordering rule is violated.
  static Expr node(GateId gate, const Expr& left, std::size_t right_feature);

  bool is_leaf() const { return node_->left == nullptr; }
  // Leaf index for a leaf; the right-hand sensor for a node.
  std::size_t feature() const { return node_->feature; }
  GateId gate() const { return node_->gate; }
  Expr left() const;
  // Number of gate nodes along the left spine; equals the layer index.
  std::size_t depth() const { return node_->depth; }

  // Canonical text: `x3` for a leaf, `(g<id> <left> x<k>)` for a node.
  std::string signature() const;

  // Identity of the shared node, for structural sharing in renderings.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    std::size_t feature = 0;
    GateId gate;
    std::shared_ptr<const Node> left;
    std::size_t depth = 0;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Inverse of Expr::signature. Enforces the grammar; throws
// std::invalid_argument on malformed text.
Expr parse_signature(std::string_view text);

// Evaluates on one instance. Throws std::out_of_range for feature indices
// beyond the row width.
bool eval(const Expr& expr, const BitVector& sensor_row);

// Bit-parallel evaluation over every instance of the set.
BitVector outputs(const Expr& expr, const BooleanLearningSet& bset);
BitVector outputs(const Expr& expr, const std::vector<BitVector>& columns);

// Hamming distance between outputs and labels. Throws on length mismatch.
std::size_t loss_mu(const BitVector& outputs, const BitVector& labels);

std::set<std::size_t> features_used(const Expr& expr);

// A network with its outputs on the learning set and its loss.
struct Candidate {
  Expr expr;
  BitVector outputs;
  std::size_t mu = 0;
};

Candidate make_candidate(const Expr& expr, const BooleanLearningSet& bset);

}  // namespace lognet

#endif  // LOGNET_NETWORK_H_
