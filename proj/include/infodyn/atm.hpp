#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "infodyn/refinery.hpp"
#include "infodyn/rng.hpp"
#include "infodyn/thermo.hpp"

namespace infodyn::atm {

// Energy bookkeeping runs on fixed-point micro-bits (1 bit = kT ln2) so the
// ledger is exact and associative; doubles appear only at the reporting edge.
using MicroBits = std::int64_t;
inline constexpr MicroBits kMicroPerBit = 1'000'000;
MicroBits to_micro_bits(double bits);
double micro_to_bits(MicroBits m);

struct WorldSpec {
  enum class Kind { kConstant, kIid, kBand, kBandNoise, kImage };
  Kind kind = Kind::kBand;
  int dim = 1;
  std::uint8_t constant_value = 0;
  double p_one = 0.5;        // iid
  double band_mean = 20.0;   // mean band length N
  double noise = 0.0;        // per-bit flip probability
  std::vector<std::string> image_rows;  // 2D, '#'/'1' black, '.'/'0' white
};

// External memory space. Cells are generated lazily and deterministically
// from the seed; a consumed cell reads as a fresh fair bit with zero energy
// content.
class MemoryWorld {
 public:
  MemoryWorld(WorldSpec spec, std::uint64_t seed);

  std::uint8_t read(std::int64_t x, std::int64_t y = 0);
  void consume(std::int64_t x, std::int64_t y = 0);
  bool is_consumed(std::int64_t x, std::int64_t y = 0) const;
  const WorldSpec& spec() const { return spec_; }

 private:
  std::uint8_t raw_bit(std::int64_t x, std::int64_t y);
  void extend_tape(std::int64_t x);

  WorldSpec spec_;
  CounterRng cell_rng_;
  CounterRng band_rng_;
  CounterRng consumed_rng_;
  std::vector<std::uint8_t> tape_;  // band tape cache for x >= 0
  std::uint8_t band_symbol_ = 0;    // symbol of the band under construction
  std::unordered_set<std::uint64_t> consumed_;
};

struct Action {
  int dx = 1;
  int dy = 0;
  std::vector<std::uint8_t> decision_bits;  // delta vector; each set bit costs 1 bit to reset
};

struct AtmConfig {
  refinery::RefinerKind refiner_kind = refinery::RefinerKind::kDelayXor;
  unsigned predictor_k = 0;
  std::vector<std::uint8_t> predictor_lookup;

  // engine over the refined stream: prior (1/2,1/2), strategy (q0, 1-q0)
  // favoring eps = 0
  double strategy_q0 = 0.95;

  std::vector<Action> default_pattern = {Action{1, 0, {}}};  // free motion
  unsigned context_bits = 0;  // raw-history bits forming the decision context
  std::map<unsigned, Action> decision_table;
  Action error_action{1, 0, {1}};  // used when the context is not in the table

  double initial_balance_bits = 100.0;
  std::optional<double> capacity_bits;
  double overhead_bits_per_step = 0.0;
};

struct StepEvent {
  std::uint64_t step = 0;
  std::int64_t x = 0, y = 0;        // position before the move
  std::uint8_t raw = 0, eps = 0;
  MicroBits energy_in = 0;
  MicroBits energy_out = 0;
  bool acted = false;               // decision-table action (eps = 1)
  MicroBits balance_after = 0;
};

struct LedgerSummary {
  std::uint64_t steps = 0;
  MicroBits initial_balance = 0;
  MicroBits final_balance = 0;
  MicroBits understanding = 0;  // U: engine credit on eps = 0 steps
  MicroBits action_debit = 0;   // A: decision-bit reset charges
  MicroBits production = 0;     // E = U - A
  bool died = false;
  std::uint64_t death_step = 0;
};

class Atm {
 public:
  Atm(AtmConfig config, std::uint64_t seed);

  bool alive() const { return balance_ > 0; }
  MicroBits balance() const { return balance_; }
  StepEvent step(MemoryWorld& world);
  const LedgerSummary& ledger() const { return ledger_; }

 private:
  AtmConfig config_;
  refinery::StreamRefiner refiner_;
  MicroBits balance_ = 0;
  MicroBits yield_fine_ = 0;   // micro-bits credited when eps = 0
  MicroBits yield_error_ = 0;  // micro-bits lost when eps = 1 (negative)
  MicroBits overhead_ = 0;
  std::int64_t x_ = 0, y_ = 0;
  std::uint64_t step_count_ = 0;
  std::size_t pattern_index_ = 0;
  std::uint32_t raw_history_ = 0;
  LedgerSummary ledger_;
};

struct RunResult {
  std::vector<StepEvent> trace;
  LedgerSummary summary;
};

RunResult run(const AtmConfig& config, const WorldSpec& world, std::uint64_t max_steps,
              std::uint64_t seed);

// Simulates the swap-every-I-steps band policy of the measurement-loss
// model: 1 bit per measurement plus the finite wrong-cell shortfall of an
// engine with strategy (q, 1-q). Returns the measured loss per band.
double band_strategy_eval(const thermo::ThermalContext& ctx, double mean_band_length,
                          unsigned period, std::uint64_t steps, std::uint64_t seed,
                          double engine_q = 2.0 / 3.0, double noise = 0.0);

}  // namespace infodyn::atm
