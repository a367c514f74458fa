#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "infodyn/thermo.hpp"

namespace infodyn::revlogic {

using Bits = std::vector<std::uint8_t>;

enum class GateKind { kNot, kCnot, kFredkin };

struct Gate {
  GateKind kind;
  unsigned target = 0;   // NOT target / CNOT target / FREDKIN line a
  unsigned control = 0;  // CNOT / FREDKIN control
  unsigned other = 0;    // FREDKIN line b

  static Gate Not(unsigned t) { return {GateKind::kNot, t, 0, 0}; }
  static Gate Cnot(unsigned c, unsigned t) { return {GateKind::kCnot, t, c, 0}; }
  static Gate Fredkin(unsigned c, unsigned a, unsigned b) {
    return {GateKind::kFredkin, a, c, b};
  }
};

// An ordered gate list over W wires. Ancilla wires carry declared input
// constants; garbage wires are dropped from the projected output.
struct Circuit {
  unsigned width = 0;
  std::vector<Gate> gates;
  std::map<unsigned, std::uint8_t> ancilla;  // wire -> constant
  std::set<unsigned> garbage;
  std::vector<unsigned> outputs;  // projected output wires, in order

  void validate() const;
  std::vector<unsigned> input_wires() const;  // non-ancilla wires, ascending
};

void apply_gate(const Gate& gate, Bits& bits);

struct RunResult {
  Bits full;       // all W wires after the last gate
  Bits projected;  // declared output wires only
};

// input supplies the non-ancilla wires in ascending wire order
RunResult run_circuit(const Circuit& circuit, const Bits& input);

struct BijectivityReport {
  bool bijective = false;   // full-width map is a permutation of {0,1}^W
  double bits_erased = 0.0; // log2 preimage collapse of the projected map
};

// exhaustive over 2^(#inputs); width capped at 20 wires
BijectivityReport is_bijective(const Circuit& circuit);

enum class Primitive { kNot, kAnd, kOr, kXor, kCopy };

// FREDKIN-only realization of the primitive; projected map equals its
// truth table and the full-width map is bijective
Circuit synthesize(Primitive primitive);

// kT * (joint entropy, nats, of the garbage wires' marginal) under the
// given distribution over input patterns (empty = uniform)
double erasure_cost(const thermo::ThermalContext& ctx, const Circuit& circuit,
                    const std::vector<double>& input_distribution = {});

// line-oriented text form; bit-exact round trip
std::string serialize(const Circuit& circuit);
Circuit parse(const std::string& text);

}  // namespace infodyn::revlogic
