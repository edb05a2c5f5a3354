#include "lognet/collective.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lognet {
namespace {

std::uint64_t parse_uint(const std::string& text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("invalid number '" + text + "'");
  return value;
}

}  // namespace

std::string format_decimal(const Fraction& f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", f.to_double());
  return buf;
}

Fraction parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    Fraction f{parse_uint(text.substr(0, slash)), parse_uint(text.substr(slash + 1))};
    if (f.den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return f;
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Fraction{parse_uint(text), 1};
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 18) throw std::invalid_argument("invalid decimal '" + text + "'");
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::uint64_t w = whole.empty() ? 0 : parse_uint(whole);
  return Fraction{w * den + parse_uint(frac), den};
}

const char* to_string(Vote v) {
  switch (v) {
    case Vote::kZero:
      return "0";
    case Vote::kOne:
      return "1";
    default:
      return "abstain";
  }
}

Collective::Collective(std::vector<Expr> members, Fraction chi0) : members_(std::move(members)), chi0_(chi0) {
  if (members_.empty()) throw std::invalid_argument("a collective needs at least one member");
  if (chi0_.num == 0 || chi0_ > Fraction{1, 1}) throw std::invalid_argument("chi0 must lie in (0, 1]");
  std::set<std::string> sigs;
  for (const auto& e : members_) {
    if (!sigs.insert(e.signature()).second)
      throw std::invalid_argument("duplicate collective member " + e.signature());
  }
}

std::vector<std::size_t> Collective::relevant_features() const {
  std::set<std::size_t> used;
  for (const auto& e : members_) {
    auto f = features_used(e);
    used.insert(f.begin(), f.end());
  }
  return {used.begin(), used.end()};
}

Decision vote(const Collective& c, const BitVector& sensor_row) {
  std::size_t ones = 0;
  for (const auto& e : c.members()) ones += eval(e, sensor_row) ? 1 : 0;
  Decision d;
  d.L = c.size();
  const std::size_t zeros = d.L - ones;
  if (ones > zeros) {
    d.label = Vote::kOne;
    d.l1 = ones;
  } else if (zeros > ones) {
    d.label = Vote::kZero;
    d.l1 = zeros;
  } else {
    d.label = Vote::kAbstain;
    d.l1 = ones;
  }
  d.chi = Fraction{d.l1, d.L};
  d.plausible = d.label != Vote::kAbstain && d.chi >= c.chi0();
  return d;
}

BitVector expand_row(const BitVector& bits, const std::vector<std::size_t>& features, std::size_t m) {
  BitVector row(m);
  for (std::size_t i = 0; i < features.size(); ++i) row.set(features[i], bits.at(i));
  return row;
}

std::vector<std::size_t> cube_features(const Collective& c, std::size_t m, bool restrict_to_used) {
  for (const auto& e : c.members()) {
    for (std::size_t f : features_used(e)) {
      if (f >= m) throw std::out_of_range("member reads sensor beyond the schema width");
    }
  }
  std::vector<std::size_t> features;
  if (restrict_to_used) {
    features = c.relevant_features();
  } else {
    for (std::size_t j = 0; j < m; ++j) features.push_back(j);
  }
  if (features.size() > kMaxCubeBits)
    throw std::length_error("coherence map over " + std::to_string(features.size()) +
                            " sensors exceeds the limit of " + std::to_string(kMaxCubeBits) +
                            "; restrict to the sensors the members use");
  return features;
}

void visit_cube(const Collective& c, const std::vector<std::size_t>& features, std::size_t m,
                const std::function<void(const BitVector&, const Decision&)>& visit) {
  const std::size_t width = features.size();
  if (width > kMaxCubeBits) throw std::length_error("cube too large");
  const std::size_t rows = std::size_t{1} << width;
  BitVector bits(width);
  for (std::size_t code = 0; code < rows; ++code) {
    for (std::size_t i = 0; i < width; ++i) bits.set(i, (code >> (width - 1 - i)) & 1U);
    visit(bits, vote(c, expand_row(bits, features, m)));
  }
}

CoherenceMap coherence_map(const Collective& c, std::size_t m, bool restrict_to_used) {
  CoherenceMap map;
  map.features = cube_features(c, m, restrict_to_used);
  map.rows.reserve(std::size_t{1} << map.features.size());
  visit_cube(c, map.features, m,
             [&](const BitVector& bits, const Decision& d) { map.rows.push_back({bits, d}); });
  return map;
}

std::string coherence_map_csv(const CoherenceMap& map, const std::vector<FeatureSpec>& features) {
  std::ostringstream out;
  for (std::size_t f : map.features) out << features.at(f).name << ',';
  out << "label,l1,L,chi,plausible\n";
  for (const auto& row : map.rows) {
    for (std::size_t i = 0; i < row.bits.size(); ++i) out << (row.bits.get(i) ? '1' : '0') << ',';
    const auto& d = row.decision;
    out << to_string(d.label) << ',' << d.l1 << ',' << d.L << ',' << format_decimal(d.chi) << ','
        << (d.plausible ? "true" : "false") << '\n';
  }
  return out.str();
}

std::vector<ClassifiedRow> classify_batch(const Collective& c, const std::vector<FeatureSpec>& features,
                                          const QuantizationSpec& qspec,
                                          const std::vector<std::vector<double>>& raw_rows) {
  std::vector<ClassifiedRow> out;
  out.reserve(raw_rows.size());
  for (const auto& raw : raw_rows) {
    ClassifiedRow row;
    try {
      row.decision = vote(c, binarize_row(features, qspec, raw));
    } catch (const DatasetError& e) {
      row.error = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace lognet
