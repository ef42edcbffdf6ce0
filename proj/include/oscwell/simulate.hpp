#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oscwell/potential.hpp"
#include "oscwell/stats.hpp"

namespace oscwell {

struct SimStart {
  bool on_boundary_a = false;  // start at (a(y0), y0) = (x*_-(y0) + rho_hat, y0)
  double x = -1.0;
  double y = 0.0;
};

/// Euler-Maruyama configuration for the fast-slow SDE
///   dx = b/eps dt + sigma/sqrt(eps) dW^x,   dy = dt + sigma rho dW^y.
struct SimConfig {
  double epsilon = 0.2;
  double sigma = 0.45;
  double rho = 0.5;
  double dt = 2e-4;
  double rho_hat = 0.3;
  std::uint64_t seed = 12345;
  std::size_t n_paths = 1000;
  double max_time = 200.0;
  SimStart start;
  unsigned threads = 1;
};

/// Validates the time-step constraints dt <= 0.01 eps and dt <= 0.01 eps / w_max^2.
void check_sim_config(const SimConfig& config, const GeometrySweep& geometry);

/// Streams one path; the observer sees (t, x, y) after every step and returns
/// false to stop. Deterministic given (seed, path_index). Throws Blowup when
/// |x| exceeds 10 L.
void simulate_path(const SimConfig& config, const PotentialModel& model,
                   std::size_t path_index,
                   const std::function<bool(double, double, double)>& observer);

struct Trajectory {
  std::vector<double> t, x, y;
};
Trajectory sample_path(const SimConfig& config, const PotentialModel& model,
                       std::size_t path_index, std::size_t stride, double t_end);

struct HitResult {
  HittingStats stats;
  std::vector<double> tau;  // completed first-passage times, path order
};

/// First-passage times to B = {x >= b(y)}, b(y) = x*_+(y) - rho_hat, with
/// linear interpolation inside the crossing step. Throws ExcessCensoring when
/// more than 1% of paths hit max_time.
HitResult first_hit_B(const SimConfig& config, const PotentialModel& model,
                      const GeometrySweep& geometry);

/// Fraction of n paths from (x, y) that reach A = {x <= a(y)} before B.
struct CommittorEstimate {
  double p_hit_a = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};
CommittorEstimate empirical_committor(const SimConfig& config, const PotentialModel& model,
                                      const GeometrySweep& geometry, double x, double y,
                                      std::size_t n);

struct Histogram2D {
  std::size_t nx = 0, ny = 0;
  double x_lo = 0.0, x_hi = 0.0;
  std::vector<double> mass;  // row-major [ix * ny + iy], normalised to 1
  double& at(std::size_t ix, std::size_t iy) { return mass[ix * ny + iy]; }
  double at(std::size_t ix, std::size_t iy) const { return mass[ix * ny + iy]; }
};

/// Time-average occupation histogram over (x, y mod 1), averaged over several
/// independent sub-trajectories (deterministic regardless of worker count).
Histogram2D empirical_invariant(const SimConfig& config, const PotentialModel& model,
                                double burn_in, double total, std::size_t nx, std::size_t ny,
                                double x_lo, double x_hi, std::size_t n_chains = 8);

}  // namespace oscwell
