#include "lognet/render.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace lognet {
namespace {

std::string format_threshold(double u) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", u);
  return buf;
}

std::string consequent(const Decision& d) {
  const std::string tally = "the " + std::to_string(d.l1) + " from the " + std::to_string(d.L) + " voted experts";
  if (d.label == Vote::kAbstain) return "no decision (tie) under " + tally;
  return std::string("class = ") + to_string(d.label) + " under " + tally;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string literal_phrase(const FeatureSpec& feature, const std::optional<Threshold>& threshold, bool value) {
  if (!threshold) return value ? feature.name : "no " + feature.name;
  // The sensor is 1 on the `x >= u` side for direct polarity.
  const bool above = (threshold->polarity == Polarity::kDirect) == value;
  return feature.name + (above ? " ≥ " : " < ") + format_threshold(threshold->u);
}

std::string render_rule(const ModelFile& model, const std::vector<std::size_t>& features, const BitVector& bits,
                        const Decision& decision, std::size_t index, const Fraction& chi0) {
  std::ostringstream out;
  const auto g = std::gcd(chi0.num, chi0.den);
  const std::string chi0_text =
      parse_fraction(model.chi0) == chi0 ? model.chi0 : Fraction{chi0.num / g, chi0.den / g}.to_string();
  out << "Rule " << index << ": chi = " << decision.chi.to_string() << " (" << format_decimal(decision.chi) << "), "
      << (decision.plausible ? "plausible" : "non-plausible") << " at chi0 = " << chi0_text << '\n';
  out << "If\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t f = features[i];
    const bool v = bits.at(i);
    out << "  x" << f << " = " << (v ? 1 : 0) << " ("
        << literal_phrase(model.features.at(f), model.quantization.thresholds.at(f), v) << ")"
        << (i + 1 < features.size() ? " and" : "") << '\n';
  }
  out << "Then\n  " << consequent(decision) << '\n';
  return out.str();
}

std::size_t render_rules(const ModelFile& model, const Collective& collective, const RuleSelection& selection,
                         std::string& out) {
  const auto features = cube_features(collective, model.features.size(), !selection.all_features);
  std::size_t index = 0;
  std::size_t written = 0;
  std::ostringstream buf;
  visit_cube(collective, features, model.features.size(), [&](const BitVector& bits, const Decision& d) {
    const std::size_t this_index = index++;
    if (written >= selection.limit) return;
    if (selection.min_chi && d.chi < *selection.min_chi) return;
    if (selection.max_chi && d.chi > *selection.max_chi) return;
    if (written) buf << '\n';
    buf << render_rule(model, features, bits, d, this_index, collective.chi0());
    ++written;
  });
  out += buf.str();
  return written;
}

std::string render_instance_rule(const ModelFile& model, const Collective& collective, const std::vector<double>& raw) {
  const BitVector row = binarize_row(model.features, model.quantization, raw);
  const auto features = collective.relevant_features();
  BitVector bits(features.size());
  std::size_t code = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    bits.set(i, row.get(features[i]));
    code = (code << 1) | (row.get(features[i]) ? 1U : 0U);
  }
  return render_rule(model, features, bits, vote(collective, row), code, collective.chi0());
}

std::string render_matrix(const ModelFile& model) {
  // Hidden nodes keyed by signature so shared sub-networks appear once.
  struct Row {
    std::string sig;
    std::size_t layer;
    Expr expr;
  };
  std::vector<Row> rows;
  std::map<std::string, std::size_t> index_of;
  std::set<std::size_t> used;
  for (const auto& mem : model.members) {
    std::vector<Expr> spine;
    for (Expr e = mem.expr; !e.is_leaf(); e = e.left()) spine.push_back(e);
    for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
      std::string sig = it->signature();
      if (index_of.count(sig)) continue;
      index_of.emplace(sig, rows.size());
      rows.push_back({std::move(sig), it->depth(), *it});
    }
    auto f = features_used(mem.expr);
    used.insert(f.begin(), f.end());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.layer < b.layer; });
  for (std::size_t i = 0; i < rows.size(); ++i) index_of[rows[i].sig] = i;

  const std::vector<std::size_t> cols(used.begin(), used.end());
  std::vector<std::size_t> widths;
  for (std::size_t c : cols) widths.push_back(std::max<std::size_t>(3, ("x" + std::to_string(c)).size()));
  const std::size_t label_width = std::max<std::size_t>(3, ("h" + std::to_string(rows.size())).size());

  std::ostringstream out;
  out << "sensors:";
  for (std::size_t c : cols) out << " x" << c << '=' << model.features.at(c).name;
  out << "\n\nlayer " << pad("row", label_width);
  for (std::size_t i = 0; i < cols.size(); ++i) out << ' ' << pad("x" + std::to_string(cols[i]), widths[i]);
  out << "  from\n";

  std::size_t last_layer = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.layer != last_layer && last_layer != 0) out << '\n';
    last_layer = row.layer;
    out << pad(std::to_string(row.layer), 5) << ' ' << pad("h" + std::to_string(r + 1), label_width);
    const Expr left = row.expr.left();
    const std::string gate = std::to_string(row.expr.gate().value());
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const bool connected = cols[i] == row.expr.feature() || (left.is_leaf() && cols[i] == left.feature());
      out << ' ' << pad(connected ? gate : ".", widths[i]);
    }
    if (!left.is_leaf()) out << "  h" << (index_of.at(left.signature()) + 1);
    out << '\n';
  }

  out << "\noutputs\n";
  for (std::size_t i = 0; i < model.members.size(); ++i) {
    const auto& mem = model.members[i];
    const std::string src = mem.expr.is_leaf() ? "x" + std::to_string(mem.expr.feature())
                                               : "h" + std::to_string(index_of.at(mem.expr.signature()) + 1);
    out << "  y" << (i + 1) << " <- " << src << "   mu=" << mem.mu << "   " << mem.expr.signature() << '\n';
  }
  return out.str();
}

}  // namespace lognet
