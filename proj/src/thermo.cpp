#include "infodyn/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace infodyn::thermo {

namespace {
constexpr double kClamp = 1e-12;

void check_pair(const ProbPair& p, const char* what) {
  if (!(p[0] > 0.0) || !(p[0] < 1.0) || std::abs(p[0] + p[1] - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " must be an interior probability pair");
  }
}
}  // namespace

ThermalContext::ThermalContext(double kT_) : kT(kT_) {
  if (!(kT > 0.0)) throw std::invalid_argument("kT must be positive");
}

Belief::Belief(double r1_) : r1(r1_) {
  if (!(r1 >= 0.0) || !(r1 <= 1.0)) throw std::invalid_argument("belief r1 must lie in [0,1]");
}

EngineConfig::EngineConfig(Handedness h, ProbPair p, ProbPair q)
    : handedness(h), prior(p), strategy(q) {
  check_pair(prior, "prior");
  check_pair(strategy, "strategy");
}

BandModel::BandModel(double n, unsigned i, double eps)
    : mean_band_length(n), measurement_period(i), error_rate(eps) {
  if (!(n >= 1.0)) throw std::invalid_argument("mean band length must be >= 1");
  if (i < 1) throw std::invalid_argument("measurement period must be >= 1");
  if (!(eps >= 0.0) || !(eps < 1.0)) throw std::invalid_argument("error rate must lie in [0,1)");
}

double bit_energy(const ThermalContext& ctx) { return ctx.kT * kLn2; }

double outcome_yield(const ThermalContext& ctx, const EngineConfig& engine, int outcome) {
  const std::size_t i = engine.compartment(outcome);
  return ctx.kT * std::log(engine.strategy[i] / engine.prior[i]);
}

double expected_yield(const ThermalContext& ctx, const EngineConfig& engine,
                      const Belief& belief) {
  const int favored = engine.handedness == Handedness::kFavors0 ? 0 : 1;
  return belief.r1 * outcome_yield(ctx, engine, favored) +
         belief.r2() * outcome_yield(ctx, engine, 1 - favored);
}

ProbPair optimal_strategy(const Belief& belief) {
  const double q1 = std::clamp(belief.r1, kClamp, 1.0 - kClamp);
  return {q1, 1.0 - q1};
}

double kl_gain(const ProbPair& r, const ProbPair& p) {
  check_pair(p, "prior");
  double s = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    if (r[i] > 0.0) s += r[i] * std::log(r[i] / p[i]);
  }
  return s;
}

double generator_cost(const ThermalContext& ctx, const Belief& belief) {
  double h = 0.0;
  for (double r : {belief.r1, belief.r2()}) {
    if (r > 0.0) h -= r * std::log(r);
  }
  return ctx.kT * h;
}

MinimaxResult minimax_value(const ThermalContext& ctx, const Belief& belief) {
  (void)ctx;
  const ProbPair r = optimal_strategy(belief);
  return {0.0, r, r};
}

double band_loss(const ThermalContext& ctx, const BandModel& model) {
  const double n = model.mean_band_length;
  const double i = static_cast<double>(model.measurement_period);
  return (n / i + i / 2.0) * ctx.kT * kLn2;
}

unsigned optimal_measurement_period(double mean_band_length) {
  const double ideal = std::sqrt(2.0 * mean_band_length);
  const unsigned lo = std::max(1u, static_cast<unsigned>(std::floor(ideal)));
  const unsigned hi = lo + 1;
  const auto loss = [&](unsigned i) {
    return mean_band_length / i + i / 2.0;
  };
  return loss(lo) <= loss(hi) ? lo : hi;
}

double small_error_loss_rate(double eps) {
  if (!(eps >= 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in [0,1)");
  if (eps == 0.0) return 0.0;
  return eps * std::log(1.0 / eps);
}

double saddle_expansion(const ThermalContext& ctx, const Belief& belief,
                        const ProbPair& p, const ProbPair& q) {
  if (std::abs(p[0] + p[1]) > 1e-12 || std::abs(q[0] + q[1]) > 1e-12) {
    throw std::invalid_argument("perturbations must sum to zero");
  }
  const ProbPair r = belief.pair();
  for (std::size_t i = 0; i < 2; ++i) {
    const double pp = r[i] + p[i];
    const double qq = r[i] + q[i];
    if (!(pp > 0.0) || !(pp < 1.0) || !(qq > 0.0) || !(qq < 1.0)) {
      throw std::domain_error("perturbed probabilities leave (0,1)");
    }
  }
  double e = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    e += (p[i] * p[i] - q[i] * q[i]) / (2.0 * r[i]);
  }
  return ctx.kT * e;
}

namespace {

double yield_at(double kT, double r1, double q1, double p1) {
  return kT * (r1 * std::log(q1 / p1) + (1.0 - r1) * std::log((1.0 - q1) / (1.0 - p1)));
}

template <bool Parallel>
double grid_argmax_impl(const ThermalContext& ctx, const ProbPair& prior,
                        const Belief& belief, double step) {
  const long n = std::lround(1.0 / step) - 1;
  double best = -1e300;
  long best_i = 1;
#pragma omp parallel if (Parallel)
  {
    double lbest = -1e300;
    long lbest_i = 1;
#pragma omp for nowait
    for (long i = 1; i <= n; ++i) {
      const double q1 = i * step;
      const double v = yield_at(ctx.kT, belief.r1, q1, prior[0]);
      if (v > lbest || (v == lbest && i < lbest_i)) {
        lbest = v;
        lbest_i = i;
      }
    }
#pragma omp critical
    {
      if (lbest > best || (lbest == best && lbest_i < best_i)) {
        best = lbest;
        best_i = lbest_i;
      }
    }
  }
  return best_i * step;
}

template <bool Parallel>
GridSaddle minimax_grid_impl(const ThermalContext& ctx, const Belief& belief, unsigned n) {
  const double h = 1.0 / (n + 1);
  GridSaddle out{1e300, 0.0, 0.0};
#pragma omp parallel if (Parallel)
  {
    GridSaddle local{1e300, 0.0, 0.0};
#pragma omp for nowait
    for (long ip = 1; ip <= static_cast<long>(n); ++ip) {
      const double p1 = ip * h;
      double inner = -1e300;
      double inner_q = 0.0;
      for (long iq = 1; iq <= static_cast<long>(n); ++iq) {
        const double q1 = iq * h;
        const double v = yield_at(ctx.kT, belief.r1, q1, p1);
        if (v > inner) {
          inner = v;
          inner_q = q1;
        }
      }
      if (inner < local.value || (inner == local.value && p1 < local.p1)) {
        local = {inner, inner_q, p1};
      }
    }
#pragma omp critical
    {
      if (local.value < out.value || (local.value == out.value && local.p1 < out.p1)) {
        out = local;
      }
    }
  }
  return out;
}

}  // namespace

double grid_argmax_yield_serial(const ThermalContext& ctx, const ProbPair& prior,
                                const Belief& belief, double step) {
  return grid_argmax_impl<false>(ctx, prior, belief, step);
}

double grid_argmax_yield(const ThermalContext& ctx, const ProbPair& prior,
                         const Belief& belief, double step) {
  return grid_argmax_impl<true>(ctx, prior, belief, step);
}

GridSaddle minimax_grid_serial(const ThermalContext& ctx, const Belief& belief, unsigned n) {
  return minimax_grid_impl<false>(ctx, belief, n);
}

GridSaddle minimax_grid(const ThermalContext& ctx, const Belief& belief, unsigned n) {
  return minimax_grid_impl<true>(ctx, belief, n);
}

}  // namespace infodyn::thermo
