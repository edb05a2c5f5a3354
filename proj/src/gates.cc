#include "lognet/gates.h"

#include <stdexcept>

namespace lognet {
namespace {

// Row r of a table is the output for u1 = r >> 1, u2 = r & 1.
constexpr std::array<GateTable, kGateCount> kTables = {{
    {{0, 0, 0, 1}},  // g0  u1 AND u2
    {{0, 1, 0, 0}},  // g1  NOT u1 AND u2
    {{0, 1, 1, 1}},  // g2  u1 OR u2
    {{1, 0, 1, 1}},  // g3  u1 OR NOT u2
    {{1, 1, 0, 1}},  // g4  NOT u1 OR u2
    {{1, 1, 1, 0}},  // g5  NAND
    {{0, 0, 1, 0}},  // g6  u1 AND NOT u2
    {{1, 0, 0, 0}},  // g7  NOR
    {{0, 1, 1, 0}},  // g8  XOR
    {{1, 0, 0, 1}},  // g9  XNOR
}};

constexpr std::array<const char*, kGateCount> kNames = {
    "AND", "NOT-u1 AND u2", "OR", "u1 OR NOT-u2", "NOT-u1 OR u2",
    "NAND", "u1 AND NOT-u2", "NOR", "XOR", "XNOR"};

}  // namespace

GateTable gate_truth_table(GateId g) { return kTables[static_cast<std::size_t>(g.value())]; }
GateTable gate_truth_table(int id) { return gate_truth_table(GateId(id)); }

bool eval_gate(GateId g, bool u1, bool u2) {
  return kTables[static_cast<std::size_t>(g.value())].rows[(u1 ? 2U : 0U) | (u2 ? 1U : 0U)] != 0;
}
bool eval_gate(int id, bool u1, bool u2) { return eval_gate(GateId(id), u1, u2); }

void apply_gate(GateId g, const BitVector& u1, const BitVector& u2, BitVector& out) {
  if (u1.size() != u2.size()) throw std::invalid_argument("gate inputs differ in length");
  if (out.size() != u1.size()) out = BitVector(u1.size());
  const auto& t = kTables[static_cast<std::size_t>(g.value())].rows;
  using Word = BitVector::Word;
  const Word m00 = t[0] ? ~Word{0} : 0;
  const Word m01 = t[1] ? ~Word{0} : 0;
  const Word m10 = t[2] ? ~Word{0} : 0;
  const Word m11 = t[3] ? ~Word{0} : 0;
  auto a = u1.words();
  auto b = u2.words();
  auto o = out.mutable_words();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = (m00 & ~a[i] & ~b[i]) | (m01 & ~a[i] & b[i]) | (m10 & a[i] & ~b[i]) | (m11 & a[i] & b[i]);
  }
  out.trim();
}

BitVector apply_gate(GateId g, const BitVector& u1, const BitVector& u2) {
  BitVector out(u1.size());
  apply_gate(g, u1, u2, out);
  return out;
}

std::array<BitVector, kGateCount> apply_all_gates(const BitVector& u1, const BitVector& u2) {
  std::array<BitVector, kGateCount> out;
  for (int g = 0; g < kGateCount; ++g) apply_gate(GateId(g), u1, u2, out[static_cast<std::size_t>(g)]);
  return out;
}

const char* gate_name(GateId g) { return kNames[static_cast<std::size_t>(g.value())]; }

}  // namespace lognet
