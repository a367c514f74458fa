#include "infodyn/atm.hpp"

#include <cmath>
#include <stdexcept>

namespace infodyn::atm {

MicroBits to_micro_bits(double bits) {
  return static_cast<MicroBits>(std::llround(bits * double(kMicroPerBit)));
}

double micro_to_bits(MicroBits m) { return double(m) / double(kMicroPerBit); }

namespace {

std::uint64_t cell_key(std::int64_t x, std::int64_t y) {
  return (static_cast<std::uint64_t>(x) * 0x100000001b3ULL) ^
         static_cast<std::uint64_t>(y);
}

std::uint8_t image_pixel(const std::vector<std::string>& rows, std::int64_t x,
                         std::int64_t y) {
  const std::int64_t h = static_cast<std::int64_t>(rows.size());
  const std::int64_t w = static_cast<std::int64_t>(rows[0].size());
  const std::int64_t r = ((y % h) + h) % h;
  const std::int64_t c = ((x % w) + w) % w;
  const char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return (ch == '#' || ch == '1') ? 1 : 0;
}

}  // namespace

MemoryWorld::MemoryWorld(WorldSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)),
      cell_rng_(seed, 0x63656c6c),
      band_rng_(seed, 0x62616e64),
      consumed_rng_(seed, 0x636f6e73) {
  if (spec_.kind == WorldSpec::Kind::kImage &&
      (spec_.image_rows.empty() || spec_.image_rows[0].empty())) {
    throw std::invalid_argument("image world needs a nonempty grid");
  }
  band_symbol_ = static_cast<std::uint8_t>(band_rng_.next_u64() & 1);
}

void MemoryWorld::extend_tape(std::int64_t x) {
  while (static_cast<std::int64_t>(tape_.size()) <= x) {
    const std::uint64_t len = band_rng_.next_geometric(spec_.band_mean);
    tape_.insert(tape_.end(), len, band_symbol_);
    band_symbol_ ^= 1;
  }
}

std::uint8_t MemoryWorld::raw_bit(std::int64_t x, std::int64_t y) {
  switch (spec_.kind) {
    case WorldSpec::Kind::kConstant:
      return spec_.constant_value;
    case WorldSpec::Kind::kIid:
      return cell_rng_.at(cell_key(x, y)) < static_cast<std::uint64_t>(
                 spec_.p_one * 18446744073709551615.0)
                 ? 1
                 : 0;
    case WorldSpec::Kind::kBand:
    case WorldSpec::Kind::kBandNoise: {
      std::uint8_t b;
      if (x < 0) {
        b = static_cast<std::uint8_t>(cell_rng_.at(cell_key(x, y)) & 1);
      } else {
        extend_tape(x);
        b = tape_[static_cast<std::size_t>(x)];
      }
      if (spec_.kind == WorldSpec::Kind::kBandNoise && spec_.noise > 0.0) {
        const double u =
            double(cell_rng_.at(cell_key(x, y) ^ 0x6e6f69ULL) >> 11) * 0x1.0p-53;
        if (u < spec_.noise) b ^= 1;
      }
      return b;
    }
    case WorldSpec::Kind::kImage:
      return image_pixel(spec_.image_rows, x, y);
  }
  return 0;
}

std::uint8_t MemoryWorld::read(std::int64_t x, std::int64_t y) {
  if (is_consumed(x, y)) {
    return static_cast<std::uint8_t>(consumed_rng_.next_u64() & 1);
  }
  return raw_bit(x, y);
}

void MemoryWorld::consume(std::int64_t x, std::int64_t y) {
  consumed_.insert(cell_key(x, y));
}

bool MemoryWorld::is_consumed(std::int64_t x, std::int64_t y) const {
  return consumed_.count(cell_key(x, y)) != 0;
}

namespace {

refinery::StreamRefiner make_refiner(const AtmConfig& c) {
  switch (c.refiner_kind) {
    case refinery::RefinerKind::kIdentity:
      return refinery::StreamRefiner::identity();
    case refinery::RefinerKind::kNegation:
      return refinery::StreamRefiner::negation();
    case refinery::RefinerKind::kDelayXor:
      return refinery::StreamRefiner::delay_xor();
    case refinery::RefinerKind::kTablePredictor:
      return refinery::StreamRefiner::table_predictor(c.predictor_k, c.predictor_lookup);
  }
  throw std::invalid_argument("unknown refiner kind");
}

MicroBits decision_cost(const Action& a) {
  MicroBits bits = 0;
  for (std::uint8_t d : a.decision_bits) {
    if (d) bits += 1;
  }
  return bits * kMicroPerBit;
}

}  // namespace

Atm::Atm(AtmConfig config, std::uint64_t seed)
    : config_(std::move(config)), refiner_(make_refiner(config_)) {
  (void)seed;
  if (!(config_.strategy_q0 > 0.0) || !(config_.strategy_q0 < 1.0)) {
    throw std::invalid_argument("engine strategy must be interior");
  }
  if (config_.default_pattern.empty()) {
    throw std::invalid_argument("default motion pattern must be nonempty");
  }
  balance_ = to_micro_bits(config_.initial_balance_bits);
  ledger_.initial_balance = balance_;
  ledger_.final_balance = balance_;
  // per-symbol engine yields against the fixed 1/2 prior, in micro-bits
  yield_fine_ = to_micro_bits(std::log2(2.0 * config_.strategy_q0));
  yield_error_ = to_micro_bits(std::log2(2.0 * (1.0 - config_.strategy_q0)));
  overhead_ = to_micro_bits(config_.overhead_bits_per_step);
}

StepEvent Atm::step(MemoryWorld& world) {
  if (!alive()) throw std::logic_error("dead machine refuses to step");

  StepEvent ev;
  ev.step = step_count_;
  ev.x = x_;
  ev.y = y_;

  const bool spent = world.is_consumed(x_, y_);
  const std::uint8_t raw = world.read(x_, y_);
  const std::uint8_t eps = refiner_.refine(raw);
  ev.raw = raw;
  ev.eps = eps;
  world.consume(x_, y_);
  if (config_.context_bits > 0) {
    raw_history_ = ((raw_history_ << 1) | raw) & ((1u << config_.context_bits) - 1u);
  }

  // ITE: consumed cells carry no extractable energy
  MicroBits yield = 0;
  if (!spent) yield = (eps == 0) ? yield_fine_ : yield_error_;

  MicroBits debit = overhead_;
  const Action* action = nullptr;
  if (eps == 1) {
    // purity checker routes the context into the actuator; the register
    // reset afterwards is what costs energy
    const auto it = config_.decision_table.find(raw_history_);
    action = it != config_.decision_table.end() ? &it->second : &config_.error_action;
    debit += decision_cost(*action);
    ev.acted = true;
  } else {
    action = &config_.default_pattern[pattern_index_];
    pattern_index_ = (pattern_index_ + 1) % config_.default_pattern.size();
  }

  ev.energy_in = yield > 0 ? yield : 0;
  ev.energy_out = debit + (yield < 0 ? -yield : 0);
  balance_ += ev.energy_in - ev.energy_out;
  if (config_.capacity_bits) {
    const MicroBits cap = to_micro_bits(*config_.capacity_bits);
    if (balance_ > cap) balance_ = cap;
  }
  ev.balance_after = balance_;

  x_ += action->dx;
  y_ += action->dy;

  ++step_count_;
  ledger_.steps = step_count_;
  ledger_.final_balance = balance_;
  if (eps == 0 && yield > 0) ledger_.understanding += yield;
  if (ev.acted) ledger_.action_debit += decision_cost(*action);
  ledger_.production = ledger_.understanding - ledger_.action_debit;
  if (balance_ <= 0) {
    ledger_.died = true;
    ledger_.death_step = step_count_;
  }
  return ev;
}

RunResult run(const AtmConfig& config, const WorldSpec& world_spec,
              std::uint64_t max_steps, std::uint64_t seed) {
  MemoryWorld world(world_spec, seed);
  Atm machine(config, seed);
  RunResult out;
  out.trace.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(max_steps, 1u << 20)));
  for (std::uint64_t s = 0; s < max_steps && machine.alive(); ++s) {
    out.trace.push_back(machine.step(world));
  }
  out.summary = machine.ledger();
  return out;
}

double band_strategy_eval(const thermo::ThermalContext& ctx, double mean_band_length,
                          unsigned period, std::uint64_t steps, std::uint64_t seed,
                          double engine_q, double noise) {
  if (!(mean_band_length >= 1.0) || period < 1) {
    throw std::invalid_argument("bad band model parameters");
  }
  WorldSpec spec;
  spec.kind = noise > 0.0 ? WorldSpec::Kind::kBandNoise : WorldSpec::Kind::kBand;
  spec.band_mean = mean_band_length;
  spec.noise = noise;
  MemoryWorld world(spec, seed);

  const double gain_right = std::log2(2.0 * engine_q);
  const double gain_wrong = std::log2(2.0 * (1.0 - engine_q));

  double gained = 0.0;
  std::uint64_t measurements = 0;
  std::uint8_t favored = 0;
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::uint8_t b = world.read(static_cast<std::int64_t>(s));
    if (s % period == 0) {
      ++measurements;  // costs one full bit
      favored = b;
    }
    gained += (b == favored) ? gain_right : gain_wrong;
  }
  const double ideal = double(steps) * gain_right;
  const double loss_bits = double(measurements) + (ideal - gained);
  const double bands = double(steps) / mean_band_length;
  return loss_bits / bands * ctx.kT * thermo::kLn2;
}

}  // namespace infodyn::atm
