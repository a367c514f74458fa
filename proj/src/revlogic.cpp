#include "infodyn/revlogic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace infodyn::revlogic {

namespace {

void check_wires(const Gate& g, unsigned width) {
  auto in_range = [&](unsigned w) {
    if (w >= width) throw std::out_of_range("gate wire out of range");
  };
  switch (g.kind) {
    case GateKind::kNot:
      in_range(g.target);
      break;
    case GateKind::kCnot:
      in_range(g.target);
      in_range(g.control);
      if (g.target == g.control) throw std::invalid_argument("CNOT wires must be distinct");
      break;
    case GateKind::kFredkin:
      in_range(g.target);
      in_range(g.control);
      in_range(g.other);
      if (g.target == g.control || g.other == g.control || g.target == g.other) {
        throw std::invalid_argument("FREDKIN wires must be distinct");
      }
      break;
  }
}

}  // namespace

void Circuit::validate() const {
  for (const Gate& g : gates) check_wires(g, width);
  for (const auto& [w, c] : ancilla) {
    if (w >= width) throw std::out_of_range("ancilla wire out of range");
    if (c > 1) throw std::invalid_argument("ancilla constant must be 0 or 1");
  }
  for (unsigned w : garbage) {
    if (w >= width) throw std::out_of_range("garbage wire out of range");
  }
  for (unsigned w : outputs) {
    if (w >= width) throw std::out_of_range("output wire out of range");
    if (garbage.count(w)) throw std::invalid_argument("output wire declared garbage");
  }
}

std::vector<unsigned> Circuit::input_wires() const {
  std::vector<unsigned> in;
  for (unsigned w = 0; w < width; ++w) {
    if (!ancilla.count(w)) in.push_back(w);
  }
  return in;
}

void apply_gate(const Gate& gate, Bits& bits) {
  check_wires(gate, static_cast<unsigned>(bits.size()));
  switch (gate.kind) {
    case GateKind::kNot:
      bits[gate.target] ^= 1;
      break;
    case GateKind::kCnot:
      bits[gate.target] ^= bits[gate.control];
      break;
    case GateKind::kFredkin:
      if (bits[gate.control]) std::swap(bits[gate.target], bits[gate.other]);
      break;
  }
}

RunResult run_circuit(const Circuit& circuit, const Bits& input) {
  circuit.validate();
  const auto in_wires = circuit.input_wires();
  if (input.size() != in_wires.size()) {
    throw std::invalid_argument("input width mismatch");
  }
  Bits state(circuit.width, 0);
  for (const auto& [w, c] : circuit.ancilla) state[w] = c;
  for (std::size_t i = 0; i < in_wires.size(); ++i) state[in_wires[i]] = input[i] & 1;
  for (const Gate& g : circuit.gates) apply_gate(g, state);
  RunResult out;
  out.full = state;
  if (!circuit.outputs.empty()) {
    for (unsigned w : circuit.outputs) out.projected.push_back(state[w]);
  } else {
    for (unsigned w = 0; w < circuit.width; ++w) {
      if (!circuit.garbage.count(w)) out.projected.push_back(state[w]);
    }
  }
  return out;
}

BijectivityReport is_bijective(const Circuit& circuit) {
  circuit.validate();
  if (circuit.width > 20) throw std::invalid_argument("width too large for exhaustive check");
  const auto in_wires = circuit.input_wires();
  const std::uint64_t n_in = 1ull << in_wires.size();

  std::unordered_map<std::uint64_t, int> full_seen;
  std::unordered_map<std::uint64_t, int> proj_seen;
  bool bijective = true;
  for (std::uint64_t x = 0; x < n_in; ++x) {
    Bits input(in_wires.size());
    for (std::size_t i = 0; i < in_wires.size(); ++i) input[i] = (x >> i) & 1;
    const RunResult r = run_circuit(circuit, input);
    std::uint64_t full_key = 0;
    for (std::size_t i = 0; i < r.full.size(); ++i) full_key |= std::uint64_t(r.full[i]) << i;
    std::uint64_t proj_key = 0;
    for (std::size_t i = 0; i < r.projected.size(); ++i) {
      proj_key |= std::uint64_t(r.projected[i]) << i;
    }
    if (++full_seen[full_key] > 1) bijective = false;
    ++proj_seen[proj_key];
  }
  BijectivityReport rep;
  rep.bijective = bijective;
  rep.bits_erased =
      std::log2(double(n_in)) - std::log2(double(proj_seen.size()));
  return rep;
}

Circuit synthesize(Primitive primitive) {
  Circuit c;
  switch (primitive) {
    case Primitive::kNot:
      // wires: 0 = x, 1 = const 1, 2 = const 0; output = wire 1 (!x)
      c.width = 3;
      c.ancilla = {{1, 1}, {2, 0}};
      c.garbage = {0, 2};
      c.outputs = {1};
      c.gates = {Gate::Fredkin(0, 1, 2)};
      break;
    case Primitive::kAnd:
      // wires: 0 = x, 1 = y, 2 = const 0; output = wire 2 (x & y)
      c.width = 3;
      c.ancilla = {{2, 0}};
      c.garbage = {0, 1};
      c.outputs = {2};
      c.gates = {Gate::Fredkin(0, 1, 2)};
      break;
    case Primitive::kOr:
      // wires: 0 = x, 1 = y, 2 = const 1; output = wire 1 (x | y)
      c.width = 3;
      c.ancilla = {{2, 1}};
      c.garbage = {0, 2};
      c.outputs = {1};
      c.gates = {Gate::Fredkin(0, 1, 2)};
      break;
    case Primitive::kXor:
      // wires: 0 = x, 1 = y, 2 = const 1, 3 = const 0
      // first make !y on wire 2, then swap (y, !y) under control x
      c.width = 4;
      c.ancilla = {{2, 1}, {3, 0}};
      c.garbage = {0, 2, 3};
      c.outputs = {1};
      c.gates = {Gate::Fredkin(1, 2, 3), Gate::Fredkin(0, 1, 2)};
      break;
    case Primitive::kCopy:
      // wires: 0 = x, 1 = const 1, 2 = const 0; outputs = (x, copy on wire 2)
      c.width = 3;
      c.ancilla = {{1, 1}, {2, 0}};
      c.garbage = {1};
      c.outputs = {0, 2};
      c.gates = {Gate::Fredkin(0, 1, 2)};
      break;
  }
  c.validate();
  return c;
}

double erasure_cost(const thermo::ThermalContext& ctx, const Circuit& circuit,
                    const std::vector<double>& input_distribution) {
  circuit.validate();
  const auto in_wires = circuit.input_wires();
  const std::uint64_t n_in = 1ull << in_wires.size();
  std::vector<double> dist = input_distribution;
  if (dist.empty()) dist.assign(n_in, 1.0 / double(n_in));
  if (dist.size() != n_in) throw std::invalid_argument("input distribution size mismatch");

  std::vector<unsigned> garbage_wires(circuit.garbage.begin(), circuit.garbage.end());
  std::unordered_map<std::uint64_t, double> marginal;
  for (std::uint64_t x = 0; x < n_in; ++x) {
    if (dist[x] == 0.0) continue;
    Bits input(in_wires.size());
    for (std::size_t i = 0; i < in_wires.size(); ++i) input[i] = (x >> i) & 1;
    const RunResult r = run_circuit(circuit, input);
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < garbage_wires.size(); ++i) {
      key |= std::uint64_t(r.full[garbage_wires[i]]) << i;
    }
    marginal[key] += dist[x];
  }
  double h = 0.0;
  for (const auto& [key, p] : marginal) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return ctx.kT * h;
}

std::string serialize(const Circuit& circuit) {
  std::ostringstream os;
  os << "width " << circuit.width << "\n";
  for (const auto& [w, c] : circuit.ancilla) os << "ancilla " << w << "=" << int(c) << "\n";
  for (unsigned w : circuit.garbage) os << "garbage " << w << "\n";
  for (unsigned w : circuit.outputs) os << "output " << w << "\n";
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::kNot:
        os << "NOT t=" << g.target << "\n";
        break;
      case GateKind::kCnot:
        os << "CNOT c=" << g.control << " t=" << g.target << "\n";
        break;
      case GateKind::kFredkin:
        os << "FREDKIN c=" << g.control << " a=" << g.target << " b=" << g.other << "\n";
        break;
    }
  }
  return os.str();
}

namespace {

unsigned parse_field(const std::string& tok, const char* key) {
  const std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0) throw std::invalid_argument("bad gate field: " + tok);
  return static_cast<unsigned>(std::stoul(tok.substr(prefix.size())));
}

}  // namespace

Circuit parse(const std::string& text) {
  Circuit c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "width") {
      ls >> c.width;
    } else if (head == "ancilla") {
      std::string spec;
      ls >> spec;
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad ancilla line: " + line);
      c.ancilla[static_cast<unsigned>(std::stoul(spec.substr(0, eq)))] =
          static_cast<std::uint8_t>(std::stoul(spec.substr(eq + 1)));
    } else if (head == "garbage") {
      unsigned w;
      ls >> w;
      c.garbage.insert(w);
    } else if (head == "output") {
      unsigned w;
      ls >> w;
      c.outputs.push_back(w);
    } else if (head == "NOT") {
      std::string t;
      ls >> t;
      c.gates.push_back(Gate::Not(parse_field(t, "t")));
    } else if (head == "CNOT") {
      std::string cc, t;
      ls >> cc >> t;
      c.gates.push_back(Gate::Cnot(parse_field(cc, "c"), parse_field(t, "t")));
    } else if (head == "FREDKIN") {
      std::string cc, a, b;
      ls >> cc >> a >> b;
      c.gates.push_back(
          Gate::Fredkin(parse_field(cc, "c"), parse_field(a, "a"), parse_field(b, "b")));
    } else {
      throw std::invalid_argument("unknown circuit line: " + line);
    }
  }
  c.validate();
  return c;
}

}  // namespace infodyn::revlogic
