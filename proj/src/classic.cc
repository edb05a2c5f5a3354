#include "lognet/classic.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lognet {
namespace {

std::string structure_key(const std::vector<std::size_t>& structure) {
  std::string key = "[";
  for (std::size_t i = 0; i < structure.size(); ++i) {
    if (i) key += ' ';
    key += "x" + std::to_string(structure[i]);
  }
  return key + "]";
}

FittedCandidate fit_candidate(std::vector<std::size_t> structure, const Expr* parent_a, const Expr* parent_b,
                              const BitVector& in_a, const BitVector& in_b, std::size_t k,
                              const BooleanLearningSet& bset, const SplitAB& split, const ClassicConfig& config) {
  const BitVector& col = bset.column(k);
  const GateId ga = fit_gate(in_a, col, bset.labels(), split.a);
  const GateId gb = fit_gate(in_b, col, bset.labels(), split.b);
  FittedCandidate c;
  c.fit_a = Expr::node(ga, parent_a ? *parent_a : Expr::leaf(structure.front()), k);
  c.fit_b = Expr::node(gb, parent_b ? *parent_b : Expr::leaf(structure.front()), k);
  c.out_a = apply_gate(ga, in_a, col);
  c.out_b = apply_gate(gb, in_b, col);
  c.bu = unbias(c.out_a, c.out_b);
  c.reg = regularity(c.out_a, c.out_b, bset.labels());
  c.cr = convolution(static_cast<double>(c.bu), static_cast<double>(c.reg), config.alpha, config.beta);
  c.structure = std::move(structure);
  c.key = structure_key(c.structure);
  return c;
}

bool by_cr(const FittedCandidate& a, const FittedCandidate& b) {
  if (a.cr != b.cr) return a.cr < b.cr;
  return a.key < b.key;
}

}  // namespace

Freedom Freedom::count(std::size_t n) {
  if (n < 1) throw std::invalid_argument("freedom count must be >= 1");
  Freedom f;
  f.is_fraction_ = false;
  f.value_ = static_cast<double>(n);
  return f;
}

Freedom Freedom::fraction(double v) {
  if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("freedom fraction must lie in (0, 1]");
  Freedom f;
  f.is_fraction_ = true;
  f.value_ = v;
  return f;
}

Freedom Freedom::parse(const std::string& text) {
  if (text.find('.') == std::string::npos) {
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
      throw std::invalid_argument("invalid freedom '" + text + "'");
    return count(n);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("invalid freedom '" + text + "'");
  return fraction(v);
}

std::size_t Freedom::resolve(std::size_t l1) const {
  if (!is_fraction_) return static_cast<std::size_t>(value_);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(value_ * static_cast<double>(l1) - 1e-9)));
}

std::string Freedom::to_string() const {
  std::ostringstream out;
  if (is_fraction_) {
    out << value_;
    if (out.str().find('.') == std::string::npos) out << ".0";
  } else {
    out << static_cast<std::size_t>(value_);
  }
  return out.str();
}

void ClassicConfig::validate() const {
  if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("alpha and beta must be non-negative");
  if (alpha + beta <= 0.0) throw std::invalid_argument("alpha + beta must be positive");
  if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
  if (max_layers < 1) throw std::invalid_argument("max_layers must be >= 1");
}

GateId fit_gate(const BitVector& u1, const BitVector& u2, const BitVector& labels,
                std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("cannot fit a gate on an empty subset");
  // Label counts per input pattern p = (u1 << 1) | u2.
  std::size_t ones[4] = {0, 0, 0, 0};
  std::size_t zeros[4] = {0, 0, 0, 0};
  for (std::size_t i : subset) {
    const unsigned p = (u1.at(i) ? 2U : 0U) | (u2.at(i) ? 1U : 0U);
    (labels.at(i) ? ones : zeros)[p] += 1;
  }
  int best = 0;
  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  for (int g = 0; g < kGateCount; ++g) {
    const auto t = gate_truth_table(g).rows;
    std::size_t errors = 0;
    for (unsigned p = 0; p < 4; ++p) errors += t[p] ? zeros[p] : ones[p];
    if (errors < best_errors) {
      best_errors = errors;
      best = g;
    }
  }
  return GateId(best);
}

std::size_t unbias(const BitVector& out_a, const BitVector& out_b) { return hamming(out_a, out_b); }

std::size_t regularity(const BitVector& out_a, const BitVector& out_b, const BitVector& labels) {
  if (out_a.size() != out_b.size()) throw std::invalid_argument("bit vector length mismatch");
  return loss_mu(out_a, labels) + loss_mu(out_b, labels);
}

double convolution(double bu, double reg, double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0) throw std::invalid_argument("criterion weights must be non-negative");
  if (alpha == 0.0 && beta == 0.0) throw std::invalid_argument("criterion weights cannot both be zero");
  return alpha * bu + beta * reg;
}

std::vector<FittedCandidate> classic_layer(const std::vector<FittedCandidate>& parents, const BooleanLearningSet& bset,
                                           const SplitAB& split, const ClassicConfig& config,
                                           std::size_t* generated) {
  const std::size_t m = bset.m();
  if (m < 2) throw std::invalid_argument("classic synthesis needs at least 2 sensors");
  const std::size_t l1 = m * (m - 1) / 2;
  const std::size_t keep = config.freedom.resolve(l1);
  std::vector<FittedCandidate> all;
  if (parents.empty()) {
    all.reserve(l1);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k)
        all.push_back(fit_candidate({j, k}, nullptr, nullptr, bset.column(j), bset.column(j), k, bset, split, config));
    }
  } else {
    all.reserve(parents.size() * m);
    for (const auto& p : parents) {
      for (std::size_t k = 0; k < m; ++k) {
        auto structure = p.structure;
        structure.push_back(k);
        all.push_back(fit_candidate(std::move(structure), &p.fit_a, &p.fit_b, p.out_a, p.out_b, k, bset, split, config));
      }
    }
  }
  if (generated) *generated = all.size();
  std::sort(all.begin(), all.end(), by_cr);
  if (all.size() > keep) all.resize(keep);
  return all;
}

Expr refit_structure(const std::vector<std::size_t>& structure, const BooleanLearningSet& bset) {
  if (structure.size() < 2) throw std::invalid_argument("structure needs at least a sensor pair");
  std::vector<std::size_t> everyone(bset.n());
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = i;
  Expr expr = Expr::leaf(structure[0]);
  BitVector out = bset.column(structure[0]);
  for (std::size_t i = 1; i < structure.size(); ++i) {
    const std::size_t k = structure[i];
    const GateId g = fit_gate(out, bset.column(k), bset.labels(), everyone);
    expr = Expr::node(g, expr, k);
    out = apply_gate(g, out, bset.column(k));
  }
  return expr;
}

ClassicResult synthesize_classic(const BooleanLearningSet& bset, const ClassicConfig& config) {
  config.validate();
  ClassicResult result;
  result.split = split_ab(bset.n(), config.split, config.seed);
  const std::size_t m = bset.m();
  result.freedom = config.freedom.resolve(m < 2 ? 0 : m * (m - 1) / 2);

  std::vector<FittedCandidate> kept;
  std::vector<FittedCandidate> selected_layer;
  for (std::size_t r = 1; r <= config.max_layers; ++r) {
    // Nothing can improve on a zero criterion by more than delta >= 0.
    if (r > 1 && result.cr_min == 0.0) break;
    std::size_t generated = 0;
    auto layer = classic_layer(kept, bset, result.split, config, &generated);
    ClassicLayerTrace t{r, generated, layer.size(), layer.front().cr, layer.front().key};
    result.trace.push_back(t);
    result.layers_generated = r;
    if (r > 1 && t.cr_min + config.delta >= result.cr_min) break;
    result.selected_layer = r;
    result.cr_min = t.cr_min;
    selected_layer = layer;
    kept = std::move(layer);
  }

  // Ties on the criterion are broken by whole-set loss after refit, then key.
  std::size_t best_mu = std::numeric_limits<std::size_t>::max();
  std::string best_key;
  for (const auto& c : selected_layer) {
    if (c.cr != result.cr_min) break;
    result.tied_keys.push_back(c.key);
    Expr e = refit_structure(c.structure, bset);
    const std::size_t mu = loss_mu(outputs(e, bset), bset.labels());
    if (mu < best_mu || (mu == best_mu && c.key < best_key)) {
      best_mu = mu;
      best_key = c.key;
      result.model = e;
      result.mu = mu;
    }
  }
  return result;
}

}  // namespace lognet
