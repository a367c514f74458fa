#pragma once

#include <array>
#include <cstddef>
#include <utility>

namespace infodyn::thermo {

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

using ProbPair = std::array<double, 2>;

// Temperature scale fixing the energy unit. All energies returned by this
// module are in absolute units of kT * nats.
struct ThermalContext {
  double kT;
  explicit ThermalContext(double kT_);
  double bit_energy() const { return kT * kLn2; }
  double to_bits(double energy) const { return energy / (kT * kLn2); }
};

// Probability that the favored outcome occurs.
struct Belief {
  double r1;
  explicit Belief(double r1_);
  double r2() const { return 1.0 - r1; }
  ProbPair pair() const { return {r1, 1.0 - r1}; }
};

enum class Handedness { kFavors0, kFavors1 };

// Prior P is fixed by the environment (diaphragm position), strategy Q is
// the engine's own commitment (piston turning point). Only the ratios are
// stored; the underlying geometric lengths are gauge.
struct EngineConfig {
  Handedness handedness;
  ProbPair prior;     // (P1, P2), components in (0,1), sum 1
  ProbPair strategy;  // (Q1, Q2), components in (0,1), sum 1
  EngineConfig(Handedness h, ProbPair p, ProbPair q);

  // compartment index selected by an outcome bit under the handedness
  std::size_t compartment(int outcome) const {
    const int favored = handedness == Handedness::kFavors0 ? 0 : 1;
    return outcome == favored ? 0 : 1;
  }
};

// Band-sequence measurement-loss model: mean band length N, measurement
// every I steps, per-bit error rate eps.
struct BandModel {
  double mean_band_length;     // N >= 1
  unsigned measurement_period;  // I >= 1
  double error_rate;            // 0 <= eps < 1
  BandModel(double n, unsigned i, double eps = 0.0);
};

// E = kT ln 2, the worth of one perfectly known bit
double bit_energy(const ThermalContext& ctx);

// kT ln(Q_i / P_i) for the compartment matching the realized outcome
double outcome_yield(const ThermalContext& ctx, const EngineConfig& engine,
                     int outcome);

// R-weighted average of outcome_yield over both outcomes
double expected_yield(const ThermalContext& ctx, const EngineConfig& engine,
                      const Belief& belief);

// the unique maximizer Q = R (clamped away from {0,1})
ProbPair optimal_strategy(const Belief& belief);

// I(R|P) = sum_i R_i ln(R_i / P_i), in nats; 0*ln 0 := 0
double kl_gain(const ProbPair& r, const ProbPair& p);

// minimal work to generate a belief-distributed bit: kT * H(R) in nats
double generator_cost(const ThermalContext& ctx, const Belief& belief);

struct MinimaxResult {
  double value;       // always 0 at the saddle
  ProbPair strategy;  // attaining Q
  ProbPair prior;     // attaining P
};

// min_P max_Q E(Q,P) = max_Q min_P E(Q,P) = 0, attained at Q = P = R
MinimaxResult minimax_value(const ThermalContext& ctx, const Belief& belief);

// E_loss = (N/I + I/2) kT ln 2 per band
double band_loss(const ThermalContext& ctx, const BandModel& model);

// integer I minimizing band_loss, near sqrt(2N)
unsigned optimal_measurement_period(double mean_band_length);

// eps * ln(1/eps); 0 at eps = 0 by continuity
double small_error_loss_rate(double eps);

// Quadratic expansion of E(Q,P) around the saddle Q = P = R:
//   kT [ (p1^2 - q1^2)/(2 R1) + (p2^2 - q2^2)/(2 R2) ]
// with p1+p2 = 0, q1+q2 = 0 and R+p, R+q interior.
double saddle_expansion(const ThermalContext& ctx, const Belief& belief,
                        const ProbPair& p, const ProbPair& q);

// --- grid-search kernels (serial reference + parallel) -------------------

// argmax over Q1 in {step, 2*step, ...} of expected_yield; returns Q1
double grid_argmax_yield_serial(const ThermalContext& ctx, const ProbPair& prior,
                                const Belief& belief, double step);
double grid_argmax_yield(const ThermalContext& ctx, const ProbPair& prior,
                         const Belief& belief, double step);

struct GridSaddle {
  double value;
  double q1;
  double p1;
};

// nested min over P1 of max over Q1 of E(Q,P) on an n x n interior grid
GridSaddle minimax_grid_serial(const ThermalContext& ctx, const Belief& belief,
                               unsigned n);
GridSaddle minimax_grid(const ThermalContext& ctx, const Belief& belief,
                        unsigned n);

}  // namespace infodyn::thermo
