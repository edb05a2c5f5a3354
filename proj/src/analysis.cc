#include "lognet/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lognet {
namespace {

constexpr std::size_t kMaxPrintedDigits = 40;

double log10_big(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 53) return std::log10(x.convert_to<double>());
  const std::size_t shift = bits - 53;
  const BigInt top = x >> shift;
  return std::log10(top.convert_to<double>()) + static_cast<double>(shift) * std::log10(2.0);
}

std::string scientific_from_log10(double lg) {
  const double exponent = std::floor(lg);
  double mantissa = std::pow(10.0, lg - exponent);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3fe+%.0f", mantissa, exponent);
  return buf;
}

std::string big_to_text(const BigInt& x, std::size_t m_for_star = 0) {
  std::string s = x.str();
  if (s.size() <= kMaxPrintedDigits) return s;
  if (m_for_star) return "2^" + std::to_string(std::size_t{1} << m_for_star);
  return scientific_from_log10(log10_big(x));
}

std::string grouped(const std::string& digits) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return digits;
  std::string out;
  const std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    out += digits[i];
    if ((n - i - 1) % 3 == 0 && i + 1 < n) out += ',';
  }
  return out;
}

struct OracleEntry {
  BitVector out;
  std::size_t parent;  // index into the previous depth; sensor j at depth 1
  int gate;
  std::size_t k;
};

std::string oracle_signature(const std::vector<std::vector<OracleEntry>>& depths, std::size_t depth,
                             std::size_t index) {
  std::string inner;
  const OracleEntry& e = depths[depth][index];
  if (depth == 1) {
    inner = "x" + std::to_string(e.parent);
  } else {
    inner = oracle_signature(depths, depth - 1, e.parent);
  }
  return "(g" + std::to_string(e.gate) + " " + inner + " x" + std::to_string(e.k) + ")";
}

}  // namespace

BigInt q_layer(std::size_t m, std::size_t r) {
  if (m < 2) throw std::invalid_argument("q_layer needs m >= 2");
  if (r < 1) throw std::invalid_argument("q_layer needs r >= 1");
  BigInt q = BigInt(m) * (m - 1) / 2;
  for (std::size_t i = 0; i < r; ++i) q *= 10;
  for (std::size_t i = 1; i < r; ++i) q *= m;
  return q;
}

BigInt q_star(std::size_t m) {
  if (m > kMaxCountSensors) throw std::invalid_argument("q_star limited to m <= 20");
  BigInt one = 1;
  return one << (std::size_t{1} << m);
}

ComplexityReport check_inequality(std::size_t m, std::size_t r_star) {
  if (m < 2) throw std::invalid_argument("complexity count needs m >= 2");
  if (r_star < 1) throw std::invalid_argument("complexity count needs r* >= 1");
  if (m > kMaxCountSensors) throw std::invalid_argument("complexity count limited to m <= 20");
  ComplexityReport rep;
  rep.m = m;
  rep.r_star = r_star;
  for (std::size_t r = 1; r <= r_star; ++r) {
    rep.q_per_layer.push_back(q_layer(m, r));
    rep.q_sum += rep.q_per_layer.back();
  }
  rep.q_star = q_star(m);
  rep.holds = rep.q_sum < rep.q_star;
  const double lg = static_cast<double>(std::size_t{1} << m) * std::log10(2.0) - log10_big(rep.q_sum);
  rep.ratio = lg >= 0 ? scientific_from_log10(lg) : "<1";
  if (m == 5 && r_star == 2) {
    rep.note = "published worked example states 9,940 for m=5, r*=2; the recurrences give " +
               grouped(rep.q_sum.str());
  }
  return rep;
}

std::string format_report(const ComplexityReport& rep) {
  std::ostringstream out;
  out << "m          " << rep.m << '\n';
  out << "r*         " << rep.r_star << '\n';
  for (std::size_t r = 0; r < rep.q_per_layer.size(); ++r)
    out << "Q(m," << (r + 1) << ")     " << grouped(big_to_text(rep.q_per_layer[r])) << '\n';
  out << "sum Q      " << grouped(big_to_text(rep.q_sum)) << '\n';
  out << "Q*         " << grouped(big_to_text(rep.q_star, rep.m)) << '\n';
  out << "Q*/sum     " << rep.ratio << '\n';
  out << "holds      " << (rep.holds ? "yes (sum Q < Q*)" : "no") << '\n';
  if (rep.note) out << "note       " << *rep.note << '\n';
  return out.str();
}

std::string format_report_json(const ComplexityReport& rep) {
  nlohmann::ordered_json j;
  j["m"] = rep.m;
  j["r_star"] = rep.r_star;
  auto layers = nlohmann::ordered_json::array();
  for (const auto& q : rep.q_per_layer) layers.push_back(big_to_text(q));
  j["q_per_layer"] = layers;
  j["q_sum"] = big_to_text(rep.q_sum);
  j["q_star"] = big_to_text(rep.q_star, rep.m);
  j["ratio"] = rep.ratio;
  j["holds"] = rep.holds;
  if (rep.note) j["note"] = *rep.note;
  return j.dump(2) + "\n";
}

std::vector<OracleLayer> enumerate_unpruned(const BooleanLearningSet& bset, std::size_t r_max) {
  const std::size_t m = bset.m();
  if (m < 2 || m > kOracleMaxSensors)
    throw std::invalid_argument("oracle enumeration needs 2 <= m <= " + std::to_string(kOracleMaxSensors));
  if (r_max < 1 || r_max > kOracleMaxDepth)
    throw std::invalid_argument("oracle enumeration needs 1 <= depth <= " + std::to_string(kOracleMaxDepth));

  const BitVector& labels = bset.labels();
  std::vector<std::vector<OracleEntry>> depths(r_max + 1);
  std::vector<OracleLayer> result;

  for (std::size_t d = 1; d <= r_max; ++d) {
    OracleLayer layer;
    layer.depth = d;
    layer.best_mu = std::numeric_limits<std::size_t>::max();
    const bool keep = d < r_max;
    OracleEntry best_entry{};

    auto visit = [&](const BitVector& in, std::size_t parent, std::size_t k) {
      for (int g = 0; g < kGateCount; ++g) {
        BitVector out = apply_gate(GateId(g), in, bset.column(k));
        const std::size_t mu = hamming(out, labels);
        ++layer.count;
        if (mu < layer.best_mu) {
          layer.best_mu = mu;
          best_entry = OracleEntry{BitVector(), parent, g, k};
        }
        if (keep) depths[d].push_back(OracleEntry{std::move(out), parent, g, k});
      }
    };

    if (d == 1) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) visit(bset.column(j), j, k);
      }
    } else {
      for (std::size_t p = 0; p < depths[d - 1].size(); ++p) {
        for (std::size_t k = 0; k < m; ++k) visit(depths[d - 1][p].out, p, k);
      }
    }

    const std::string inner =
        d == 1 ? "x" + std::to_string(best_entry.parent) : oracle_signature(depths, d - 1, best_entry.parent);
    layer.best_signature =
        "(g" + std::to_string(best_entry.gate) + " " + inner + " x" + std::to_string(best_entry.k) + ")";
    result.push_back(layer);
  }
  return result;
}

GapReport pruning_gap(const BooleanLearningSet& bset, std::size_t r_max, const SynthesisConfig& config) {
  const auto oracle = enumerate_unpruned(bset, r_max);
  SynthesisConfig cfg = config;
  cfg.max_layers = r_max;
  const SynthesisResult synth = synthesize(bset, cfg);

  GapReport rep;
  rep.outcome = synth.outcome;
  rep.synthesis_layer = synth.layer;
  rep.synthesis_mu = synth.best_mu;

  const auto feature_mus = feature_losses(bset);
  std::size_t best_upto = *std::min_element(feature_mus.begin(), feature_mus.end());
  std::size_t held = best_upto;  // synthesis always holds the best sensor
  rep.oracle_best_mu = best_upto;
  rep.oracle_best_depth = 0;

  for (const auto& layer : oracle) {
    if (layer.best_mu < best_upto) {
      best_upto = layer.best_mu;
      rep.oracle_best_mu = best_upto;
      rep.oracle_best_depth = layer.depth;
    }
    if (layer.depth <= synth.trace.size()) {
      const auto& t = synth.trace[layer.depth - 1];
      if (t.min_mu) held = std::min(held, *t.min_mu);
    }
    rep.rows.push_back(GapRow{layer.depth, layer.best_mu, best_upto, held, held - best_upto});
  }
  rep.gap = rep.synthesis_mu - rep.oracle_best_mu;
  return rep;
}

std::string format_gap(const GapReport& rep) {
  std::ostringstream out;
  out << "synthesis  " << to_string(rep.outcome) << " at layer " << rep.synthesis_layer << ", mu = " << rep.synthesis_mu
      << '\n';
  out << "oracle     best mu = " << rep.oracle_best_mu << " at depth " << rep.oracle_best_depth << '\n';
  out << "gap        " << rep.gap << '\n';
  out << "depth  oracle_at_depth  oracle_best  synthesis  gap\n";
  for (const auto& r : rep.rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%5zu  %15zu  %11zu  %9zu  %3zu\n", r.depth, r.oracle_depth_mu, r.oracle_best_mu,
                  r.synthesis_mu, r.gap);
    out << buf;
  }
  return out.str();
}

}  // namespace lognet
