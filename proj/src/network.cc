#include "lognet/network.h"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace lognet {

Expr Expr::leaf(std::size_t feature) {
  auto n = std::make_shared<Node>();
  n->feature = feature;
  return Expr(std::move(n));
}

Expr Expr::node(GateId gate, const Expr& left, std::size_t right_feature) {
  if (left.is_leaf() && !(left.feature() < right_feature))
    throw std::invalid_argument("layer-1 node requires left sensor index < right sensor index");
  auto n = std::make_shared<Node>();
  n->feature = right_feature;
  n->gate = gate;
  n->left = left.node_;
  n->depth = left.depth() + 1;
  return Expr(std::move(n));
}

Expr Expr::left() const {
  if (is_leaf()) throw std::logic_error("leaf has no left child");
  return Expr(node_->left);
}

std::string Expr::signature() const {
  std::string prefix;
  std::string suffix;
  const Node* n = node_.get();
  while (n->left) {
    prefix += "(g" + std::to_string(n->gate.value()) + " ";
    suffix.insert(0, " x" + std::to_string(n->feature) + ")");
    n = n->left.get();
  }
  return prefix + "x" + std::to_string(n->feature) + suffix;
}

bool operator==(const Expr& a, const Expr& b) {
  const Expr::Node* x = a.node_.get();
  const Expr::Node* y = b.node_.get();
  while (x != y) {
    if (x->depth != y->depth || x->feature != y->feature) return false;
    if (x->left == nullptr) return true;
    if (x->gate != y->gate) return false;
    x = x->left.get();
    y = y->left.get();
  }
  return true;
}

namespace {

class SignatureParser {
 public:
  explicit SignatureParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("malformed expression '" + std::string(text_) + "' at offset " +
                                std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::size_t number() {
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(text_[pos_] - '0');
      if (value > (std::size_t{1} << 40)) fail("index too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected a number");
    return value;
  }

  std::size_t sensor() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != 'x') fail("expected sensor 'x<k>'");
    ++pos_;
    return number();
  }

  Expr expr() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != 'g') fail("expected gate 'g<id>'");
      ++pos_;
      const std::size_t id = number();
      if (id >= static_cast<std::size_t>(kGateCount)) fail("gate id out of range");
      Expr left = expr();
      const std::size_t right = sensor();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      try {
        return Expr::node(GateId(static_cast<int>(id)), left, right);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    return Expr::leaf(sensor());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Left spine from the top node down to (excluding) the leaf.
std::vector<Expr> spine(const Expr& expr) {
  std::vector<Expr> nodes;
  Expr cur = expr;
  while (!cur.is_leaf()) {
    nodes.push_back(cur);
    cur = cur.left();
  }
  nodes.push_back(cur);
  return nodes;
}

}  // namespace

Expr parse_signature(std::string_view text) { return SignatureParser(text).parse(); }

bool eval(const Expr& expr, const BitVector& sensor_row) {
  const auto nodes = spine(expr);
  bool value = sensor_row.at(nodes.back().feature());
  for (auto it = nodes.rbegin() + 1; it != nodes.rend(); ++it)
    value = eval_gate(it->gate(), value, sensor_row.at(it->feature()));
  return value;
}

BitVector outputs(const Expr& expr, const std::vector<BitVector>& columns) {
  const auto nodes = spine(expr);
  BitVector value = columns.at(nodes.back().feature());
  BitVector next(value.size());
  for (auto it = nodes.rbegin() + 1; it != nodes.rend(); ++it) {
    apply_gate(it->gate(), value, columns.at(it->feature()), next);
    std::swap(value, next);
  }
  return value;
}

BitVector outputs(const Expr& expr, const BooleanLearningSet& bset) { return outputs(expr, bset.columns()); }

std::size_t loss_mu(const BitVector& outputs, const BitVector& labels) { return hamming(outputs, labels); }

std::set<std::size_t> features_used(const Expr& expr) {
  std::set<std::size_t> used;
  for (const auto& n : spine(expr)) used.insert(n.feature());
  return used;
}

Candidate make_candidate(const Expr& expr, const BooleanLearningSet& bset) {
  BitVector out = outputs(expr, bset);
  const std::size_t mu = loss_mu(out, bset.labels());
  return Candidate{expr, std::move(out), mu};
}

}  // namespace lognet
