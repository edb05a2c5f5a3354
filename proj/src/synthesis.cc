#include "lognet/synthesis.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace lognet {
namespace {

struct Parent {
  Expr expr;
  const BitVector* outputs;
  std::size_t mu;
};

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

void shuffle_in_place(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t k = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[k]);
  }
}

// Extends `parents[p]` for p in [begin, end) with every admissible sensor and
// gate, keeping only the networks that satisfy the strict-improvement rule.
std::vector<Survivor> extend_and_filter(const std::vector<Parent>& parents, std::size_t begin, std::size_t end,
                                        const std::vector<std::size_t>& parent_order,
                                        const std::vector<std::size_t>& sensor_order,
                                        const std::vector<std::size_t>& gate_order, bool first_layer,
                                        const BooleanLearningSet& bset, const std::vector<std::size_t>& feature_mus) {
  std::vector<Survivor> kept;
  BitVector out(bset.n());
  for (std::size_t pi = begin; pi < end; ++pi) {
    const Parent& parent = parents[parent_order[pi]];
    for (std::size_t k : sensor_order) {
      if (first_layer && k <= parent.expr.feature()) continue;
      const std::size_t bound = std::min(parent.mu, feature_mus[k]);
      if (bound == 0) continue;
      for (std::size_t g : gate_order) {
        const GateId gate(static_cast<int>(g));
        apply_gate(gate, *parent.outputs, bset.column(k), out);
        const std::size_t mu = loss_mu(out, bset.labels());
        if (mu >= bound) continue;
        Expr e = Expr::node(gate, parent.expr, k);
        std::string sig = e.signature();
        kept.push_back(Survivor{Candidate{std::move(e), out, mu}, parent.mu, feature_mus[k], std::move(sig)});
      }
    }
  }
  return kept;
}

void finalize_selection(std::vector<Survivor> passed, const SelectionOptions& options, Selection& sel) {
  sel.passed = passed.size();
  if (options.dedup) {
    std::unordered_set<std::string> seen;
    std::vector<Survivor> unique;
    unique.reserve(passed.size());
    for (auto& s : passed) {
      if (seen.insert(s.signature).second) unique.push_back(std::move(s));
    }
    sel.deduped = passed.size() - unique.size();
    passed = std::move(unique);
  }
  std::sort(passed.begin(), passed.end(), [](const Survivor& a, const Survivor& b) {
    if (a.candidate.mu != b.candidate.mu) return a.candidate.mu < b.candidate.mu;
    return a.signature < b.signature;
  });
  if (options.width_cap && passed.size() > *options.width_cap) {
    sel.truncated = passed.size() - *options.width_cap;
    passed.resize(*options.width_cap);
  }
  sel.survivors = std::move(passed);
}

std::vector<Candidate> lowest_loss(const std::vector<Candidate>& cands) {
  std::vector<Candidate> best;
  if (cands.empty()) return best;
  std::size_t mu = cands.front().mu;
  for (const auto& c : cands) mu = std::min(mu, c.mu);
  for (const auto& c : cands) {
    if (c.mu == mu) best.push_back(c);
  }
  return best;
}

}  // namespace

void SynthesisConfig::validate() const {
  if (max_layers < 1) throw std::invalid_argument("max_layers must be >= 1");
  if (width_cap && *width_cap < 1) throw std::invalid_argument("width_cap must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

const char* to_string(Outcome o) { return o == Outcome::kSuccess ? "success" : "exhausted"; }

const char* to_string(ExhaustReason r) {
  return r == ExhaustReason::kNoSurvivors ? "no-survivors" : "layer-budget";
}

std::vector<std::size_t> feature_losses(const BooleanLearningSet& bset) {
  std::vector<std::size_t> mus;
  mus.reserve(bset.m());
  for (const auto& col : bset.columns()) mus.push_back(loss_mu(col, bset.labels()));
  return mus;
}

std::vector<ScoredCandidate> generate_layer1(const BooleanLearningSet& bset) {
  const std::size_t m = bset.m();
  if (m < 2) throw std::invalid_argument("layer 1 needs at least 2 sensors");
  const auto mus = feature_losses(bset);
  std::vector<ScoredCandidate> out;
  out.reserve(m * (m - 1) / 2 * kGateCount);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      for (int g = 0; g < kGateCount; ++g) {
        BitVector o = apply_gate(GateId(g), bset.column(j), bset.column(k));
        const std::size_t mu = loss_mu(o, bset.labels());
        out.push_back({Candidate{Expr::node(GateId(g), Expr::leaf(j), k), std::move(o), mu}, mus[j], mus[k]});
      }
    }
  }
  return out;
}

std::vector<ScoredCandidate> generate_layer_r(const std::vector<Candidate>& parents, const BooleanLearningSet& bset) {
  if (parents.empty()) throw std::invalid_argument("layer generation needs at least one parent network");
  const auto mus = feature_losses(bset);
  std::vector<ScoredCandidate> out;
  out.reserve(parents.size() * bset.m() * kGateCount);
  for (const auto& p : parents) {
    for (std::size_t k = 0; k < bset.m(); ++k) {
      for (int g = 0; g < kGateCount; ++g) {
        BitVector o = apply_gate(GateId(g), p.outputs, bset.column(k));
        const std::size_t mu = loss_mu(o, bset.labels());
        out.push_back({Candidate{Expr::node(GateId(g), p.expr, k), std::move(o), mu}, p.mu, mus[k]});
      }
    }
  }
  return out;
}

Selection select_exterior_addition(std::vector<ScoredCandidate> candidates, const SelectionOptions& options) {
  std::vector<Survivor> passed;
  for (auto& c : candidates) {
    if (c.candidate.mu < std::min(c.parent_mu, c.feature_mu)) {
      std::string sig = c.candidate.expr.signature();
      passed.push_back(Survivor{std::move(c.candidate), c.parent_mu, c.feature_mu, std::move(sig)});
    }
  }
  Selection sel;
  finalize_selection(std::move(passed), options, sel);
  return sel;
}

SynthesisResult synthesize(const BooleanLearningSet& bset, const SynthesisConfig& config) {
  config.validate();
  SynthesisResult result;
  const std::size_t m = bset.m();
  result.feature_mus = feature_losses(bset);

  std::vector<Candidate> sensors;
  for (std::size_t j = 0; j < m; ++j) sensors.push_back(Candidate{Expr::leaf(j), bset.column(j), result.feature_mus[j]});

  // A sensor that already separates the classes is returned as is.
  std::vector<Candidate> perfect;
  for (const auto& s : sensors) {
    if (s.mu == 0) perfect.push_back(s);
  }
  if (!perfect.empty()) {
    result.outcome = Outcome::kSuccess;
    result.layer = 0;
    result.members = std::move(perfect);
    result.best_mu = 0;
    result.sensor_shortcut = true;
    return result;
  }

  const SelectionOptions sel_opts{config.width_cap, config.dedup};
  std::vector<Candidate> best_so_far = lowest_loss(sensors);
  std::vector<Survivor> current;

  for (std::size_t r = 1; r <= config.max_layers; ++r) {
    const bool first = (r == 1);
    std::vector<Parent> parents;
    if (first) {
      for (const auto& s : sensors) parents.push_back({s.expr, &s.outputs, s.mu});
    } else {
      for (const auto& s : current) parents.push_back({s.candidate.expr, &s.candidate.outputs, s.candidate.mu});
    }

    auto parent_order = identity_order(parents.size());
    auto sensor_order = identity_order(m);
    auto gate_order = identity_order(kGateCount);
    if (config.generation_order_seed) {
      std::mt19937_64 rng(*config.generation_order_seed + 0x9e3779b97f4a7c15ULL * r);
      shuffle_in_place(parent_order, rng);
      shuffle_in_place(sensor_order, rng);
      shuffle_in_place(gate_order, rng);
    }

    LayerTrace trace;
    trace.layer = r;
    if (first) {
      trace.generated = m < 2 ? 0 : m * (m - 1) / 2 * kGateCount;
    } else {
      trace.generated = parents.size() * m * kGateCount;
    }

    std::vector<Survivor> passed;
    const std::size_t workers = std::min(config.threads, std::max<std::size_t>(parents.size(), 1));
    if (workers <= 1) {
      passed = extend_and_filter(parents, 0, parents.size(), parent_order, sensor_order, gate_order, first, bset,
                                 result.feature_mus);
    } else {
      std::vector<std::vector<Survivor>> parts(workers);
      std::vector<std::thread> pool;
      const std::size_t chunk = (parents.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(parents.size(), w * chunk);
        const std::size_t end = std::min(parents.size(), begin + chunk);
        pool.emplace_back([&, w, begin, end] {
          parts[w] = extend_and_filter(parents, begin, end, parent_order, sensor_order, gate_order, first, bset,
                                       result.feature_mus);
        });
      }
      for (auto& t : pool) t.join();
      for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(passed));
    }

    Selection sel;
    finalize_selection(std::move(passed), sel_opts, sel);
    trace.passed = sel.passed;
    trace.deduped = sel.deduped;
    trace.truncated = sel.truncated;
    trace.survivors = sel.survivors.size();
    if (!sel.survivors.empty()) trace.min_mu = sel.survivors.front().candidate.mu;
    result.trace.push_back(trace);
    if (config.record_layers) result.layers.push_back(LayerState{r, sel.survivors, result.feature_mus});

    if (sel.survivors.empty()) {
      result.outcome = Outcome::kExhausted;
      result.reason = ExhaustReason::kNoSurvivors;
      result.layer = r;
      result.members = std::move(best_so_far);
      result.best_mu = result.members.front().mu;
      return result;
    }

    current = std::move(sel.survivors);
    if (current.front().candidate.mu == 0) {
      result.outcome = Outcome::kSuccess;
      result.layer = r;
      for (const auto& s : current) {
        if (s.candidate.mu == 0) result.members.push_back(s.candidate);
      }
      result.best_mu = 0;
      return result;
    }

    best_so_far.clear();
    for (const auto& s : current) {
      if (s.candidate.mu == current.front().candidate.mu) best_so_far.push_back(s.candidate);
    }
  }

  result.outcome = Outcome::kExhausted;
  result.reason = ExhaustReason::kLayerBudget;
  result.layer = config.max_layers;
  result.members = std::move(best_so_far);
  result.best_mu = result.members.front().mu;
  return result;
}

}  // namespace lognet
