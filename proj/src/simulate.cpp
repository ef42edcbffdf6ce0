#include "oscwell/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "oscwell/errors.hpp"
#include "oscwell/parallel.hpp"
#include "oscwell/rng.hpp"

namespace oscwell {

void check_sim_config(const SimConfig& config, const GeometrySweep& geometry) {
  if (config.dt > 0.01 * config.epsilon) {
    throw ConfigError("dt must satisfy dt <= 0.01 eps");
  }
  double omega_max2 = 0.0;
  for (const auto& g : geometry.slices) {
    omega_max2 = std::max({omega_max2, g.omega_minus * g.omega_minus,
                           g.omega_plus * g.omega_plus, g.omega0 * g.omega0});
  }
  if (config.dt > 0.01 * config.epsilon / omega_max2) {
    throw ConfigError("dt must satisfy dt <= 0.01 eps / omega_max^2");
  }
}

namespace {

// Domain separation for the sub-step bridge uniforms.
constexpr std::uint64_t kBridgeSalt = 0x9E3779B97F4A7C15ull;

// Probability that the Brownian bridge between two sub-threshold endpoints
// crossed the level in between; removes the O(sqrt(dt)) first-passage bias of
// the discretely observed chain.
inline bool bridge_crossed(double gap_start, double gap_end, double step_var,
                           std::uint64_t seed, std::uint64_t stream, std::uint64_t step) {
  if (gap_start <= 0.0 || gap_end <= 0.0) return true;
  const double expo = 2.0 * gap_start * gap_end / step_var;
  if (expo > 36.0) return false;
  return rng_uniform(seed ^ kBridgeSalt, stream, step) < std::exp(-expo);
}

struct Stepper {
  const PotentialModel& model;
  double eps, sigma, rho, dt;
  double drift_gain, noise_x, noise_y;
  double blowup_at;
  std::uint64_t seed;

  Stepper(const SimConfig& c, const PotentialModel& m)
      : model(m),
        eps(c.epsilon),
        sigma(c.sigma),
        rho(c.rho),
        dt(c.dt),
        drift_gain(c.dt / c.epsilon),
        noise_x(c.sigma / std::sqrt(c.epsilon) * std::sqrt(c.dt)),
        noise_y(c.sigma * c.rho * std::sqrt(c.dt)),
        blowup_at(10.0 * (m.confinement_l > 0.0 ? m.confinement_l : 1.0)),
        seed(c.seed) {}

  // One Euler-Maruyama step; y is tracked on the real line and reduced mod 1
  // only inside the potential evaluation.
  inline void step(std::size_t path, std::uint64_t k, double& x, double& y) const {
    const auto [zx, zy] = rng_normal_pair(seed, path, k);
    const double y_mod = y - std::floor(y);
    x += drift_gain * model.drift(x, y_mod) + noise_x * zx;
    y += dt + noise_y * zy;
    if (std::abs(x) > blowup_at) {
      throw Blowup("simulate_path: |x| exceeded 10 L; decrease dt");
    }
  }
};

double start_x(const SimConfig& c, const GeometrySweep* geometry) {
  if (c.start.on_boundary_a) {
    if (!geometry) throw ConfigError("boundary start requires geometry");
    return geometry->x_minus(c.start.y) + c.rho_hat;
  }
  return c.start.x;
}

std::uint64_t step_budget(double max_time, double dt) {
  const double steps = std::ceil(max_time / dt);
  return steps < 9e18 ? static_cast<std::uint64_t>(steps) : static_cast<std::uint64_t>(9e18);
}

}  // namespace

void simulate_path(const SimConfig& config, const PotentialModel& model,
                   std::size_t path_index,
                   const std::function<bool(double, double, double)>& observer) {
  const Stepper st(config, model);
  double x = config.start.x, y = config.start.y;
  const std::uint64_t max_steps = step_budget(config.max_time, config.dt);
  for (std::uint64_t k = 0; k < max_steps; ++k) {
    st.step(path_index, k, x, y);
    if (!observer(static_cast<double>(k + 1) * config.dt, x, y)) return;
  }
}

Trajectory sample_path(const SimConfig& config, const PotentialModel& model,
                       std::size_t path_index, std::size_t stride, double t_end) {
  Trajectory out;
  std::size_t count = 0;
  out.t.push_back(0.0);
  out.x.push_back(config.start.x);
  out.y.push_back(config.start.y);
  simulate_path(config, model, path_index, [&](double t, double x, double y) {
    if (++count % stride == 0) {
      out.t.push_back(t);
      out.x.push_back(x);
      out.y.push_back(y);
    }
    return t < t_end;
  });
  return out;
}

HitResult first_hit_B(const SimConfig& config, const PotentialModel& model,
                      const GeometrySweep& geometry) {
  check_sim_config(config, geometry);
  const Stepper st(config, model);
  const double x0 = start_x(config, &geometry);
  const std::uint64_t max_steps = step_budget(config.max_time, config.dt);
  const double step_var = config.sigma * config.sigma / config.epsilon * config.dt;
  std::vector<double> tau(config.n_paths, -1.0);
  parallel_for(config.n_paths, config.threads, [&](std::size_t p) {
    double x = x0, y = config.start.y;
    double b_prev = geometry.x_plus(config.start.y) - config.rho_hat;
    for (std::uint64_t k = 0; k < max_steps; ++k) {
      const double x_prev = x;
      st.step(p, k, x, y);
      const double y_mod = y - std::floor(y);
      const double b_here = geometry.x_plus(y_mod) - config.rho_hat;
      if (x >= b_here) {
        const double theta = std::clamp((b_here - x_prev) / (x - x_prev), 0.0, 1.0);
        tau[p] = (static_cast<double>(k) + theta) * config.dt;
        return;
      }
      if (bridge_crossed(b_prev - x_prev, b_here - x, step_var, config.seed, p, k)) {
        tau[p] = (static_cast<double>(k) + 0.5) * config.dt;
        return;
      }
      b_prev = b_here;
    }
  });
  HitResult res;
  std::size_t censored = 0;
  for (double t : tau) {
    if (t < 0.0) {
      ++censored;
    } else {
      res.tau.push_back(t);
    }
  }
  if (static_cast<double>(censored) > 0.01 * static_cast<double>(config.n_paths)) {
    throw ExcessCensoring("first_hit_B: " + std::to_string(censored) + " of " +
                          std::to_string(config.n_paths) + " paths censored at max_time");
  }
  res.stats = summarize_hitting(res.tau, censored);
  return res;
}

CommittorEstimate empirical_committor(const SimConfig& config, const PotentialModel& model,
                                      const GeometrySweep& geometry, double x, double y,
                                      std::size_t n) {
  const Stepper st(config, model);
  const std::uint64_t max_steps = step_budget(config.max_time, config.dt);
  const double step_var = config.sigma * config.sigma / config.epsilon * config.dt;
  std::vector<char> hit_a(n, 0);
  parallel_for(n, config.threads, [&](std::size_t p) {
    double xx = x, yy = y;
    double a_prev = geometry.x_minus(y - std::floor(y)) + config.rho_hat;
    double b_prev = geometry.x_plus(y - std::floor(y)) - config.rho_hat;
    for (std::uint64_t k = 0; k < max_steps; ++k) {
      const double x_prev = xx;
      st.step(p, k, xx, yy);
      const double y_mod = yy - std::floor(yy);
      const double a_here = geometry.x_minus(y_mod) + config.rho_hat;
      const double b_here = geometry.x_plus(y_mod) - config.rho_hat;
      if (xx <= a_here ||
          bridge_crossed(x_prev - a_prev, xx - a_here, step_var, config.seed, p, k)) {
        hit_a[p] = 1;
        return;
      }
      if (xx >= b_here ||
          bridge_crossed(b_prev - x_prev, b_here - xx, step_var, config.seed + 1, p, k)) {
        hit_a[p] = 2;
        return;
      }
      a_prev = a_here;
      b_prev = b_here;
    }
  });
  std::size_t a_count = 0, resolved = 0;
  for (char c : hit_a) {
    if (c == 1) ++a_count;
    if (c != 0) ++resolved;
  }
  CommittorEstimate est;
  est.n = resolved;
  if (resolved > 0) {
    est.p_hit_a = static_cast<double>(a_count) / static_cast<double>(resolved);
    est.stderr_ = std::sqrt(std::max(est.p_hit_a * (1.0 - est.p_hit_a), 1e-12) /
                            static_cast<double>(resolved));
  }
  return est;
}

Histogram2D empirical_invariant(const SimConfig& config, const PotentialModel& model,
                                double burn_in, double total, std::size_t nx, std::size_t ny,
                                double x_lo, double x_hi, std::size_t n_chains) {
  Histogram2D hist;
  hist.nx = nx;
  hist.ny = ny;
  hist.x_lo = x_lo;
  hist.x_hi = x_hi;
  hist.mass.assign(nx * ny, 0.0);
  const double span = total / static_cast<double>(n_chains);
  std::vector<std::vector<double>> partial(n_chains);
  const std::uint64_t burn_steps =
      static_cast<std::uint64_t>(std::ceil(burn_in / config.dt));
  const std::uint64_t span_steps = static_cast<std::uint64_t>(std::ceil(span / config.dt));
  const Stepper st(config, model);
  parallel_for(n_chains, config.threads, [&](std::size_t c) {
    std::vector<double> acc(nx * ny, 0.0);
    double x = config.start.x, y = config.start.y + static_cast<double>(c) * 0.37;
    for (std::uint64_t k = 0; k < burn_steps + span_steps; ++k) {
      st.step(c, k, x, y);
      if (k < burn_steps) continue;
      const double y_mod = y - std::floor(y);
      if (x <= x_lo || x >= x_hi) continue;
      const std::size_t ix = static_cast<std::size_t>((x - x_lo) / (x_hi - x_lo) *
                                                      static_cast<double>(nx));
      const std::size_t iy =
          std::min(static_cast<std::size_t>(y_mod * static_cast<double>(ny)), ny - 1);
      acc[std::min(ix, nx - 1) * ny + iy] += 1.0;
    }
    partial[c] = std::move(acc);
  });
  for (std::size_t c = 0; c < n_chains; ++c) {
    for (std::size_t i = 0; i < hist.mass.size(); ++i) hist.mass[i] += partial[c][i];
  }
  double tot = 0.0;
  for (double m : hist.mass) tot += m;
  if (tot > 0.0) {
    for (double& m : hist.mass) m /= tot;
  }
  return hist;
}

}  // namespace oscwell
