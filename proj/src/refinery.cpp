#include "infodyn/refinery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "infodyn/rng.hpp"

namespace infodyn::refinery {

namespace {

void check_step(const SwapStep& s, unsigned n) {
  if (s.x >= n || s.y >= n) throw std::out_of_range("swap address out of range");
  if (s.x == s.y) throw std::invalid_argument("swap addresses must differ");
  if (s.mode == SwapMode::kDataControlled) {
    if (s.z >= n) throw std::out_of_range("control address out of range");
    if (s.z == s.x || s.z == s.y) throw std::invalid_argument("control address collides");
  }
}

}  // namespace

SampleCovariance SampleCovariance::from_samples(const std::vector<RegisterVector>& samples) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  const unsigned n = static_cast<unsigned>(samples[0].size());
  SampleCovariance cov;
  cov.n = n;
  cov.q.assign(std::size_t(n) * n, 0.0);
  for (const auto& psi : samples) {
    if (psi.size() != n) throw std::invalid_argument("sample width mismatch");
    for (unsigned i = 0; i < n; ++i) {
      if (!psi[i]) continue;
      for (unsigned j = 0; j < n; ++j) {
        if (psi[j]) cov.q[std::size_t(i) * n + j] += 1.0;
      }
    }
  }
  const double inv = 1.0 / double(samples.size());
  for (double& v : cov.q) v *= inv;
  return cov;
}

double SampleCovariance::trace() const {
  double t = 0.0;
  for (unsigned i = 0; i < n; ++i) t += at(i, i);
  return t;
}

RegisterVector swap_step(const RegisterVector& psi, const SwapStep& step) {
  check_step(step, static_cast<unsigned>(psi.size()));
  RegisterVector out = psi;
  const bool apply =
      step.mode == SwapMode::kDataControlled ? psi[step.z] != 0 : step.apply;
  if (apply) std::swap(out[step.x], out[step.y]);
  return out;
}

double uniformity_defect(const RegisterVector& psi) {
  const std::size_t n = psi.size();
  if (n < 2) throw std::invalid_argument("register too short");
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = double(psi[(i + 1) % n]) - double(psi[i]);
    z += d * d;
  }
  return 0.5 * z;
}

std::vector<unsigned> trajectory_permutation(unsigned n, const Trajectory& traj) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (const SwapStep& s : traj) {
    check_step(s, n);
    if (s.mode != SwapMode::kScheduleControlled) {
      throw std::invalid_argument("trajectory permutation requires schedule-controlled steps");
    }
    if (s.apply) std::swap(perm[s.x], perm[s.y]);
  }
  return perm;
}

double objective_of_permutation(const SampleCovariance& cov,
                                const std::vector<unsigned>& perm) {
  const unsigned n = cov.n;
  double f = 0.0;
  for (unsigned i = 0; i < n; ++i) {
    f += cov.at(perm[i], perm[(i + 1) % n]);
  }
  return f;
}

double avg_objective(const SampleCovariance& cov, const Trajectory& traj) {
  return objective_of_permutation(cov, trajectory_permutation(cov.n, traj));
}

namespace {

template <bool Parallel>
std::vector<double> score_append_impl(const SampleCovariance& cov,
                                      const std::vector<unsigned>& perm) {
  const unsigned n = cov.n;
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned x = 0; x + 1 < n; ++x) {
    for (unsigned y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
  }
  std::vector<double> scores(pairs.size());
#pragma omp parallel for if (Parallel)
  for (long idx = 0; idx < static_cast<long>(pairs.size()); ++idx) {
    std::vector<unsigned> p = perm;
    std::swap(p[pairs[idx].first], p[pairs[idx].second]);
    scores[idx] = objective_of_permutation(cov, p);
  }
  return scores;
}

}  // namespace

std::vector<double> score_append_serial(const SampleCovariance& cov,
                                        const std::vector<unsigned>& perm) {
  return score_append_impl<false>(cov, perm);
}

std::vector<double> score_append(const SampleCovariance& cov,
                                 const std::vector<unsigned>& perm) {
  return score_append_impl<true>(cov, perm);
}

namespace {

struct Candidate {
  bool noop;
  unsigned x, y;
};

std::vector<Candidate> candidate_steps(unsigned n) {
  std::vector<Candidate> cands;
  cands.push_back({true, 0, 0});
  for (unsigned x = 0; x + 1 < n; ++x) {
    for (unsigned y = x + 1; y < n; ++y) cands.push_back({false, x, y});
  }
  return cands;
}

double eval_slots(const SampleCovariance& cov, const std::vector<Candidate>& slots) {
  std::vector<unsigned> perm(cov.n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (const Candidate& c : slots) {
    if (!c.noop) std::swap(perm[c.x], perm[c.y]);
  }
  return objective_of_permutation(cov, perm);
}

}  // namespace

OptimizeResult optimize_trajectory(const std::vector<RegisterVector>& samples,
                                   unsigned max_len, unsigned budget,
                                   std::uint64_t seed) {
  const SampleCovariance cov = SampleCovariance::from_samples(samples);
  const unsigned n = cov.n;
  const auto cands = candidate_steps(n);
  CounterRng rng(seed, /*stream=*/0x7261006a);

  std::vector<Candidate> best_slots(max_len, Candidate{true, 0, 0});
  double best_f = eval_slots(cov, best_slots);
  const double baseline = best_f;

  const unsigned restarts = std::max(1u, budget);
  for (unsigned r = 0; r < restarts; ++r) {
    std::vector<Candidate> slots(max_len, Candidate{true, 0, 0});
    if (r > 0) {
      for (auto& s : slots) s = cands[rng.next_below(cands.size())];
    }
    double f = eval_slots(cov, slots);
    // coordinate ascent over the slots until a fixpoint
    bool improved = true;
    while (improved) {
      improved = false;
      for (unsigned j = 0; j < max_len; ++j) {
        const Candidate saved = slots[j];
        Candidate best_c = saved;
        double best_v = f;
        for (const Candidate& c : cands) {
          slots[j] = c;
          const double v = eval_slots(cov, slots);
          if (v > best_v + 1e-15) {
            best_v = v;
            best_c = c;
          }
        }
        slots[j] = best_c;
        if (best_v > f + 1e-15) {
          f = best_v;
          improved = true;
        }
      }
    }
    if (f > best_f + 1e-15) {
      best_f = f;
      best_slots = slots;
    }
  }

  OptimizeResult out;
  out.objective = std::max(best_f, baseline);
  for (const Candidate& c : best_slots) {
    if (!c.noop) out.trajectory.push_back(SwapStep::Schedule(c.x, c.y));
  }
  return out;
}

OptimizeResult exhaustive_trajectory(const std::vector<RegisterVector>& samples,
                                     unsigned max_len) {
  const SampleCovariance cov = SampleCovariance::from_samples(samples);
  const unsigned n = cov.n;
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned x = 0; x + 1 < n; ++x) {
    for (unsigned y = x + 1; y < n; ++y) pairs.emplace_back(x, y);
  }

  OptimizeResult best;
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  best.objective = objective_of_permutation(cov, perm);

  Trajectory current;
  auto dfs = [&](auto&& self, std::vector<unsigned>& p, unsigned depth) -> void {
    if (depth == max_len) return;
    for (const auto& [x, y] : pairs) {
      std::swap(p[x], p[y]);
      current.push_back(SwapStep::Schedule(x, y));
      const double f = objective_of_permutation(cov, p);
      if (f > best.objective + 1e-15) {
        best.objective = f;
        best.trajectory = current;
      }
      self(self, p, depth + 1);
      current.pop_back();
      std::swap(p[x], p[y]);
    }
  };
  dfs(dfs, perm, 0);
  return best;
}

// --- streaming refiners ----------------------------------------------------

StreamRefiner::StreamRefiner(RefinerKind kind, unsigned k, std::vector<std::uint8_t> lookup)
    : kind_(kind), k_(k), lookup_(std::move(lookup)) {
  if (k_ > 20) throw std::invalid_argument("history window too large");
  if (k_ > 0 && lookup_.size() != (std::size_t(1) << k_)) {
    throw std::invalid_argument("lookup table size must be 2^k");
  }
}

StreamRefiner StreamRefiner::identity() {
  return StreamRefiner(RefinerKind::kIdentity, 0, {});
}
StreamRefiner StreamRefiner::negation() {
  return StreamRefiner(RefinerKind::kNegation, 0, {});
}
StreamRefiner StreamRefiner::delay_xor() {
  return StreamRefiner(RefinerKind::kDelayXor, 1, {0, 1});
}
StreamRefiner StreamRefiner::table_predictor(unsigned k, std::vector<std::uint8_t> lookup) {
  return StreamRefiner(RefinerKind::kTablePredictor, k, std::move(lookup));
}

std::uint8_t StreamRefiner::predict() const {
  switch (kind_) {
    case RefinerKind::kIdentity:
      return 0;
    case RefinerKind::kNegation:
      return 1;
    case RefinerKind::kDelayXor:
    case RefinerKind::kTablePredictor:
      return lookup_[history_];
  }
  return 0;
}

std::uint8_t StreamRefiner::refine(std::uint8_t x) {
  x &= 1;
  const std::uint8_t eps = x ^ predict();
  if (k_ > 0) {
    history_ = ((history_ << 1) | x) & ((1u << k_) - 1u);
  }
  return eps;
}

void StreamRefiner::reset() { history_ = 0; }

std::vector<std::uint8_t> StreamRefiner::refine_stream(const std::vector<std::uint8_t>& xs) {
  std::vector<std::uint8_t> out;
  out.reserve(xs.size());
  for (std::uint8_t x : xs) out.push_back(refine(x));
  return out;
}

std::vector<std::uint8_t> invert_refinement(RefinerKind kind,
                                            const std::vector<std::uint8_t>& eps,
                                            const std::vector<std::uint8_t>& initial_window,
                                            const std::vector<std::uint8_t>& lookup) {
  StreamRefiner r = [&] {
    switch (kind) {
      case RefinerKind::kIdentity:
        return StreamRefiner::identity();
      case RefinerKind::kNegation:
        return StreamRefiner::negation();
      case RefinerKind::kDelayXor:
        return StreamRefiner::delay_xor();
      case RefinerKind::kTablePredictor:
        return StreamRefiner::table_predictor(
            static_cast<unsigned>(std::log2(double(lookup.size())) + 0.5), lookup);
    }
    throw std::invalid_argument("unknown refiner kind");
  }();
  if (initial_window.size() > r.window()) {
    throw std::invalid_argument("initial window longer than refiner history");
  }
  // feed the pre-stream history; most recent bit first in initial_window
  std::vector<std::uint8_t> xs;
  for (auto it = initial_window.rbegin(); it != initial_window.rend(); ++it) {
    (void)r.refine(*it);
  }
  xs.reserve(eps.size());
  for (std::uint8_t e : eps) {
    // x = eps ^ u(history); running refine(x) then yields eps and updates state
    StreamRefiner probe = r;
    const std::uint8_t x = probe.refine(0) ^ (e & 1);
    (void)r.refine(x);
    xs.push_back(x);
  }
  return xs;
}

double purity(const std::vector<std::uint8_t>& eps) {
  if (eps.empty()) throw std::invalid_argument("empty stream");
  std::size_t zeros = 0;
  for (std::uint8_t e : eps) {
    if ((e & 1) == 0) ++zeros;
  }
  return double(zeros) / double(eps.size());
}

double energy_rate(const thermo::ThermalContext& ctx, double q_hat) {
  if (!(q_hat >= 0.0) || !(q_hat <= 1.0)) throw std::invalid_argument("q must lie in [0,1]");
  double h2 = 0.0;
  for (double p : {q_hat, 1.0 - q_hat}) {
    if (p > 0.0) h2 -= p * std::log2(p);
  }
  return ctx.kT * thermo::kLn2 * (1.0 - h2);
}

// --- text formats ----------------------------------------------------------

std::string serialize_trajectory(const Trajectory& traj) {
  std::ostringstream os;
  for (const SwapStep& s : traj) {
    if (s.mode == SwapMode::kScheduleControlled) {
      os << "SWAP " << s.x << " " << s.y << " " << (s.apply ? 1 : 0) << "\n";
    } else {
      os << "DATA " << s.x << " " << s.y << " " << s.z << "\n";
    }
  }
  return os.str();
}

Trajectory parse_trajectory(const std::string& text) {
  Trajectory traj;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "SWAP") {
      unsigned x, y;
      int apply;
      ls >> x >> y >> apply;
      traj.push_back(SwapStep::Schedule(x, y, apply != 0));
    } else if (head == "DATA") {
      unsigned x, y, z;
      ls >> x >> y >> z;
      traj.push_back(SwapStep::Data(x, y, z));
    } else {
      throw std::invalid_argument("unknown trajectory line: " + line);
    }
  }
  return traj;
}

std::string serialize_stream(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size() + 1);
  for (std::uint8_t b : bits) s.push_back((b & 1) ? '1' : '0');
  s.push_back('\n');
  return s;
}

std::vector<std::uint8_t> parse_stream(const std::string& text) {
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c == '0') bits.push_back(0);
    else if (c == '1') bits.push_back(1);
    else if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
    else throw std::invalid_argument("stream may contain only 0/1 characters");
  }
  return bits;
}

}  // namespace infodyn::refinery
