#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "infodyn/thermo.hpp"

namespace infodyn::refinery {

// Bit vector with conserved 0/1 counts under swap dynamics.
using RegisterVector = std::vector<std::uint8_t>;

enum class SwapMode { kDataControlled, kScheduleControlled };

struct SwapStep {
  unsigned x = 0;
  unsigned y = 0;
  unsigned z = 0;      // control address (data-controlled mode)
  SwapMode mode = SwapMode::kScheduleControlled;
  bool apply = true;   // schedule-controlled mode only

  static SwapStep Data(unsigned x, unsigned y, unsigned z) {
    return {x, y, z, SwapMode::kDataControlled, false};
  }
  static SwapStep Schedule(unsigned x, unsigned y, bool apply = true) {
    return {x, y, 0, SwapMode::kScheduleControlled, apply};
  }
};

using Trajectory = std::vector<SwapStep>;

// N x N symmetric PSD matrix (1/M) sum psi psi^T
struct SampleCovariance {
  unsigned n = 0;
  std::vector<double> q;  // row-major n*n

  static SampleCovariance from_samples(const std::vector<RegisterVector>& samples);
  double at(unsigned i, unsigned j) const { return q[i * n + j]; }
  double trace() const;
};

RegisterVector swap_step(const RegisterVector& psi, const SwapStep& step);

// Z = 1/2 ||C psi - psi||^2 with C the cyclic shift by one position
double uniformity_defect(const RegisterVector& psi);

// F = Tr(H U Q U^T) with H the symmetrized single-step cyclic shift and U
// the product of the per-step permutations (schedule-controlled only).
// Maximizing F minimizes the average defect Zbar = Tr Q - F.
double avg_objective(const SampleCovariance& cov, const Trajectory& traj);

struct OptimizeResult {
  Trajectory trajectory;
  double objective = 0.0;
};

// Greedy best-improvement step appending with annealing restarts.
// Deterministic given the seed; never returns F below the empty baseline.
OptimizeResult optimize_trajectory(const std::vector<RegisterVector>& samples,
                                   unsigned max_len, unsigned budget,
                                   std::uint64_t seed);

// exhaustive oracle over all schedule-controlled trajectories up to max_len
OptimizeResult exhaustive_trajectory(const std::vector<RegisterVector>& samples,
                                     unsigned max_len);

// --- kernel pair: score appending each candidate (x<y) swap to a prefix ---
// Returns the objective for each candidate pair in lexicographic order.
std::vector<double> score_append_serial(const SampleCovariance& cov,
                                        const std::vector<unsigned>& perm);
std::vector<double> score_append(const SampleCovariance& cov,
                                 const std::vector<unsigned>& perm);

// permutation realized by a schedule-controlled trajectory: out[i] = in[perm[i]]
std::vector<unsigned> trajectory_permutation(unsigned n, const Trajectory& traj);
double objective_of_permutation(const SampleCovariance& cov,
                                const std::vector<unsigned>& perm);

// --- streaming refiners --------------------------------------------------

enum class RefinerKind { kIdentity, kNegation, kDelayXor, kTablePredictor };

// Reversible per-bit stream transform; table predictor XORs the input with
// u(previous k bits).
class StreamRefiner {
 public:
  static StreamRefiner identity();
  static StreamRefiner negation();
  static StreamRefiner delay_xor();
  // lookup has 2^k entries indexed by (x_{n-1} ... x_{n-k}) with x_{n-1}
  // in the lowest bit
  static StreamRefiner table_predictor(unsigned k, std::vector<std::uint8_t> lookup);

  RefinerKind kind() const { return kind_; }
  unsigned window() const { return k_; }  // warm-up length

  std::uint8_t refine(std::uint8_t x);
  void reset();

  std::vector<std::uint8_t> refine_stream(const std::vector<std::uint8_t>& xs);

 private:
  StreamRefiner(RefinerKind kind, unsigned k, std::vector<std::uint8_t> lookup);
  std::uint8_t predict() const;

  RefinerKind kind_;
  unsigned k_;
  std::vector<std::uint8_t> lookup_;
  std::uint32_t history_ = 0;  // last k bits, most recent in the lowest bit
};

// Reconstructs the input stream from the refined stream; initial_window
// holds the pre-stream history bits (most recent first).
std::vector<std::uint8_t> invert_refinement(RefinerKind kind,
                                            const std::vector<std::uint8_t>& eps,
                                            const std::vector<std::uint8_t>& initial_window = {},
                                            const std::vector<std::uint8_t>& lookup = {});

// fraction of zeros in the stream
double purity(const std::vector<std::uint8_t>& eps);

// kT ln2 (1 - H2(q)) per bit, H2 the binary entropy in bits
double energy_rate(const thermo::ThermalContext& ctx, double q_hat);

// --- text formats ---------------------------------------------------------
std::string serialize_trajectory(const Trajectory& traj);
Trajectory parse_trajectory(const std::string& text);
std::string serialize_stream(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> parse_stream(const std::string& text);

}  // namespace infodyn::refinery
