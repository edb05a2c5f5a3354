#ifndef LOGNET_GATES_H_
#define LOGNET_GATES_H_

#include <array>
#include <cstdint>
#include <stdexcept>

#include "lognet/bitvec.h"

namespace lognet {

// The alphabet of the ten two-input Boolean functions that depend on both
// inputs. Ids 0..5 follow the published reference table:
//
//   u1 u2 | g0 g1 g2 g3 g4 g5 | g6 g7 g8 g9
//    0  0 |  0  0  0  1  1  1 |  0  1  0  1
//    0  1 |  0  1  1  0  1  1 |  0  0  1  0
//    1  0 |  0  0  1  1  0  1 |  1  0  1  0
//    1  1 |  1  0  1  1  1  0 |  0  0  0  1
//
// g6..g9 (u1 AND NOT u2, NOR, XOR, XNOR) complete the set. Their ids are a
// frozen convention; model files depend on them.
inline constexpr int kGateCount = 10;

class GateId {
 public:
  constexpr GateId() = default;
  constexpr explicit GateId(int id) : id_(static_cast<std::uint8_t>(id)) {
    if (id < 0 || id >= kGateCount) throw std::domain_error("gate id out of range 0..9");
  }
  constexpr int value() const { return id_; }
  friend constexpr auto operator<=>(GateId, GateId) = default;

 private:
  std::uint8_t id_ = 0;
};

// Function values for input pairs (u1,u2) = 00, 01, 10, 11.
struct GateTable {
  std::array<std::uint8_t, 4> rows{};
  friend constexpr bool operator==(const GateTable&, const GateTable&) = default;
};

GateTable gate_truth_table(GateId g);
GateTable gate_truth_table(int id);

bool eval_gate(GateId g, bool u1, bool u2);
bool eval_gate(int id, bool u1, bool u2);

// Bit-parallel application: out[i] = g(u1[i], u2[i]). Sizes must match.
void apply_gate(GateId g, const BitVector& u1, const BitVector& u2, BitVector& out);
BitVector apply_gate(GateId g, const BitVector& u1, const BitVector& u2);

// All ten gates applied to the same inputs, indexed by gate id.
std::array<BitVector, kGateCount> apply_all_gates(const BitVector& u1, const BitVector& u2);

// Short human-readable name ("AND", "XOR", ...).
const char* gate_name(GateId g);

}  // namespace lognet

#endif  // LOGNET_GATES_H_
