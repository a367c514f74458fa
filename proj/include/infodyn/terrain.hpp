#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace infodyn::terrain {

using Vec = std::array<double, 2>;  // dim 1 uses component 0 only

// Resource density V(x) with gradient access. Analytic forms or a sampled
// grid with bilinear interpolation.
class TerrainField {
 public:
  static TerrainField constant(int dim, double value);
  static TerrainField linear(int dim, Vec gradient);              // V = g . x
  static TerrainField harmonic(int dim, double k, Vec center);    // V = k/2 |x-c|^2
  struct GaussianBump {
    double amplitude;
    Vec center;
    double sigma;
  };
  static TerrainField gaussians(int dim, std::vector<GaussianBump> bumps);
  // header "rows cols x0 y0 dx dy", then row-major values
  static TerrainField grid(const std::string& text);

  int dim() const { return dim_; }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;  // throws std::domain_error outside a grid

 private:
  TerrainField() = default;
  int dim_ = 1;
  std::function<double(const Vec&)> value_;
  std::function<Vec(const Vec&)> gradient_;
};

struct RobotParams {
  double mu = 1.0;       // motion difficulty
  double eps = 1.0;      // suction coefficient
  double temperature = 1.0;
  double initial_resource = 0.0;  // U0
  double dt = 1e-3;
  void validate() const;
};

struct Path {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<Vec> points;  // uniform time grid
};

// S[x] = integral (mu xdot^2/2 - eps V(x)) dt, trapezoidal, central velocities
double entropy_functional(const Path& path, const TerrainField& field,
                          const RobotParams& params);

// free-energy ledger F = U0 - T S
double free_energy(const Path& path, const TerrainField& field, const RobotParams& params);

// discrete rule x(t+dt) = -(dt^2/mu) eps grad V(x) + 2 x(t) - x(t-dt)
Vec next_step(const Vec& x_prev, const Vec& x_curr, const TerrainField& field,
              const RobotParams& params);

// per-sample E = mu v^2/2 + eps V(x) with centered velocities; this is the
// resource flow, not an energy
std::vector<double> flow_invariant(const Path& path, const TerrainField& field,
                                   const RobotParams& params);
double max_relative_drift(const std::vector<double>& series);

struct PlanResult {
  Path path;
  bool converged = false;
  double terminal_miss = 0.0;
  unsigned iterations = 0;
};

// strategic phase: shooting (secant on terminal miss) for the initial
// velocity; operational phase: next_step integration only
PlanResult plan(const Vec& start, const Vec& goal, double t0, double t1,
                const TerrainField& field, const RobotParams& params,
                double tolerance = 1e-6, unsigned max_iterations = 100);

// exhaustive oracle over tiny instances: each interior sample restricted to
// a small candidate set
Path brute_force_path(const Vec& start, const Vec& goal, double t0, double t1,
                      const TerrainField& field, const RobotParams& params,
                      const std::vector<std::vector<Vec>>& candidates);

std::string path_to_csv(const Path& path, const TerrainField& field,
                        const RobotParams& params);

}  // namespace infodyn::terrain
