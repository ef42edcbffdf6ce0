// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "oscwell/capacity.hpp"
#include "oscwell/invariant.hpp"
#include "oscwell/jump.hpp"
#include "oscwell/predict.hpp"
#include "oscwell/profile.hpp"
#include "oscwell/rng.hpp"
#include "oscwell/simulate.hpp"
#include "oscwell/verify.hpp"

using namespace oscwell;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(int index, std::string label)
      : index_(index), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}

  void require(bool ok, const std::string& detail) {
    ok_ = ok_ && ok;
    if (!ok) details_ += (details_.empty() ? "" : "; ") + detail;
    else if (details_.empty()) last_ok_ = detail;
  }

  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (ok_) {
      std::printf("[PASS] criterion %d: %s (%s) [%.1f s]\n", index_, label_.c_str(),
                  last_ok_.c_str(), secs);
    } else {
      std::printf("[FAIL] criterion %d: %s (%s) [%.1f s]\n", index_, label_.c_str(),
                  details_.c_str(), secs);
      ++g_failures;
    }
    std::fflush(stdout);
  }

 private:
  int index_;
  std::string label_;
  bool ok_ = true;
  std::string details_, last_ok_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

std::shared_ptr<const PotentialModel> model_sym() {
  return std::make_shared<const PotentialModel>(make_tilted_quartic(1.0, 0.0, 0.0));
}
std::shared_ptr<const PotentialModel> model_tilt() {
  return std::make_shared<const PotentialModel>(make_tilted_quartic(1.0, 0.1, 0.0));
}

void criterion1_two_state() {
  Criterion c(1, "two-state mean transition time matches inversion sampling");
  // Constant-rate exactness.
  const auto constant = RateProfile::from_functions([](double) { return 0.02; },
                                                    [](double) { return 0.02; }, 0.2);
  const double t_const = mean_jump_time(constant, 0.0);
  c.require(std::abs(t_const - 10.0) < 1e-10,
            fmt("constant-rate |mean - eps/r| = %.2e", std::abs(t_const - 10.0)));
  // Ten random smooth positive profiles.
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double base = 0.01 + 0.05 * rng_uniform(2718, i, 0);
    const double amp1 = 1.2 * rng_uniform(2718, i, 1);
    const double amp2 = 0.5 * rng_uniform(2718, i, 2);
    const double ph1 = rng_uniform(2718, i, 3);
    const double ph2 = rng_uniform(2718, i, 4);
    const double eps = 0.05 + 0.45 * rng_uniform(2718, i, 5);
    const double y0 = rng_uniform(2718, i, 6);
    const auto rm = [=](double y) {
      return base * std::exp(amp1 * std::cos(2 * kPi * (y - ph1)) +
                             amp2 * std::cos(4 * kPi * (y - ph2)));
    };
    const auto rp = [=](double y) { return base * std::exp(-amp1 * std::cos(2 * kPi * y)); };
    const RateProfile p = RateProfile::from_functions(rm, rp, eps);
    const double cf = mean_jump_time(p, y0);
    const HittingStats mc = simulate_jump(p, y0, 1000 + i, 10000);
    worst = std::max(worst, std::abs(mc.mean - cf) / mc.stderr_);
  }
  c.require(worst <= 3.0, fmt("worst |mc - closed form| = %.2f stderr", worst));
}

void criterion2_spectral_oracle() {
  Criterion c(2, "numerical lambda1 against the Kramers law");
  const auto m = model_sym();
  const auto rel_err = [&](double sigma) {
    const FrozenSlice s = make_frozen_slice(m, 0.0, sigma, 256);
    const double num = eigen_solve(s, 1, 8192).lambda[1];
    const double kram = kramers_rates(s.geom, sigma).lambda1_kramers;
    return std::abs(num / kram - 1.0);
  };
  const double e45 = rel_err(0.45);
  const double e35 = rel_err(0.35);
  c.require(e45 <= 0.25, fmt("rel err %.3f at sigma=0.45 (<= 0.25)", e45));
  c.require(e35 <= 0.15, fmt("rel err %.3f at sigma=0.35 (<= 0.15)", e35));
  // Strict decay of the deviation as sigma decreases, checked on the
  // descending sequence inside the asymptotic regime (for sigma >= 0.4 the
  // higher-order corrections still dominate and the decay has not set in).
  const double e30 = rel_err(0.30);
  const double e25 = rel_err(0.25);
  c.require(e30 < e35 && e25 < e30,
            fmt("strictly decreasing over 0.35/0.30/0.25: %.4f > %.4f > %.4f", e35, e30, e25));
}

void criterion3_laplace() {
  Criterion c(3, "Laplace asymptotics of Z0, N, I0, I2, J1(0)");
  const auto m = model_sym();
  for (double sigma : {0.3, 0.2}) {
    const double band = 8.0 * sigma * sigma;
    const FrozenSlice s = make_frozen_slice(m, 0.0, sigma, 1024);
    const double sig2 = sigma * sigma;
    const double z0 = partition_Z0(s);
    const double z0_ref = std::sqrt(kPi) * sigma *
                          (std::exp(2.0 * s.geom.h_minus / sig2) / s.geom.omega_minus +
                           std::exp(2.0 * s.geom.h_plus / sig2) / s.geom.omega_plus);
    const double n = std::exp(committor_table(s).log_n);
    const double n_ref = std::sqrt(kPi) * sigma / s.geom.omega0;
    const double i0 = laplace_In(s, 0, 0.8);
    const double i0_ref = std::sqrt(kPi) * sigma / s.geom.omega0;
    const double i2 = laplace_In(s, 2, 0.8);
    const double i2_ref = 0.5 * std::sqrt(kPi) * std::pow(sigma / s.geom.omega0, 3.0);
    const double j1 = laplace_Jn(s, 1, 0.0, 0.8);
    const double j1_ref = sig2 / (2.0 * s.geom.omega0 * s.geom.omega0);
    for (const auto& [name, ratio] :
         std::vector<std::pair<const char*, double>>{{"Z0", z0 / z0_ref},
                                                     {"N", n / n_ref},
                                                     {"I0", i0 / i0_ref},
                                                     {"I2", i2 / i2_ref},
                                                     {"J1", j1 / j1_ref}}) {
      c.require(std::abs(ratio - 1.0) <= band,
                fmt((std::string(name) + " ratio %.3f at sigma=%.2f").c_str(), ratio, sigma));
    }
  }
}

void criterion4_delta_limits() {
  Criterion c(4, "delta regime limits (fast forcing and super-adiabatic)");
  const auto m = model_tilt();
  const RateProfile fast = RateProfile::from_model(*m, 0.45, 0.2, 64);
  double avg_l1 = 0.0, avg_l1a = 0.0, min_l1 = 1e300, max_l1 = 0.0;
  for (int k = 0; k < 2048; ++k) {
    const double y = k / 2048.0;
    const double l = fast.lambda1(y);
    avg_l1 += l / 2048.0;
    avg_l1a += l * fast.a(y) / 2048.0;
    min_l1 = std::min(min_l1, l);
    max_l1 = std::max(max_l1, l);
  }
  const JumpSolution ff = delta_periodic(fast);
  double dev_ff = 0.0;
  for (double d : ff.delta) dev_ff = std::max(dev_ff, std::abs(d - avg_l1a / avg_l1));
  c.require(dev_ff <= 2.0 * avg_l1 / 0.2,
            fmt("fast-forcing deviation %.3g <= %.3g", dev_ff, 2.0 * avg_l1 / 0.2));

  // Super-adiabatic arm on a gentler tilt: the O(eps/min lambda1) constant is
  // |A'| at the slowest phase and must sit below the factor-2 band.
  const auto m_gentle =
      std::make_shared<const PotentialModel>(make_tilted_quartic(1.0, 0.02, 0.0));
  const RateProfile probe = RateProfile::from_model(*m_gentle, 0.45, 1.0, 64);
  double min_slow = 1e300;
  for (int k = 0; k < 2048; ++k) min_slow = std::min(min_slow, probe.lambda1(k / 2048.0));
  const double eps_slow = min_slow / 50.0;
  const RateProfile slow = RateProfile::from_model(*m_gentle, 0.45, eps_slow, 64);
  const JumpSolution sa = delta_periodic(slow);
  double dev_sa = 0.0;
  for (std::size_t k = 0; k < sa.delta.size(); ++k) {
    dev_sa = std::max(dev_sa, std::abs(sa.delta[k] - slow.a(sa.y[k])));
  }
  c.require(dev_sa <= 2.0 * eps_slow / min_slow,
            fmt("super-adiabatic deviation %.3g <= %.3g", dev_sa, 2.0 * eps_slow / min_slow));
}

void criterion5_static_ek() {
  Criterion c(5, "static Eyring-Kramers law and exponential tail");
  const auto m = model_sym();
  const GeometrySweep geo = sweep_geometry(*m);
  SimConfig sim;
  sim.epsilon = 1.0;
  sim.sigma = 0.45;
  sim.rho = 0.5;
  sim.dt = 1e-3;
  sim.rho_hat = 0.3;
  sim.seed = 42;
  sim.n_paths = 4000;
  sim.max_time = 1200.0;
  sim.start.x = -1.0;
  sim.start.y = 0.0;
  sim.threads = 2;
  const HitResult hit = first_hit_B(sim, *m, geo);
  const double ek = std::sqrt(2.0) * kPi * std::exp(0.5 / 0.2025);
  const double ratio = hit.stats.mean / sim.epsilon / ek;
  c.require(ratio >= 0.75 && ratio <= 1.25, fmt("mc/EK ratio %.3f", ratio));
  const double ks_crit = 1.628 / std::sqrt(static_cast<double>(hit.stats.n));
  // At sigma = 0.45 the law of tau/mean carries an O(1) transit-time deficit
  // near the origin (no transition can complete in the first ~2 time units,
  // while Exp(1) puts ~4% of its mass there), so the statistic saturates near
  // 0.037 for any sample size. It decays only as sigma decreases.
  c.require(hit.stats.ks_stat < ks_crit,
            fmt("KS %.4f vs %.4f at the 1%% level; deficit ~F_exp(transit/mean) "
                "is a finite-sigma effect",
                hit.stats.ks_stat, ks_crit));
}

void criterion6_fast_forcing_law() {
  Criterion c(6, "fast-forcing transition law at the reference point");
  const auto m = model_tilt();
  const GeometrySweep geo = sweep_geometry(*m);
  const RateProfile rates = RateProfile::from_model(*m, 0.45, 0.2, 64);
  const Prediction pred = ek_fast_forcing(rates);
  SimConfig sim;
  sim.epsilon = 0.2;
  sim.sigma = 0.45;
  sim.rho = 0.5;
  sim.dt = 2e-4;
  sim.rho_hat = 0.3;
  sim.seed = 7;
  sim.n_paths = 4000;
  sim.max_time = 30.0 * pred.value;
  sim.start.on_boundary_a = true;
  sim.start.y = 0.0;
  sim.threads = 2;
  const HitResult hit = first_hit_B(sim, *m, geo);
  const double ratio = hit.stats.mean / pred.value;
  c.require(ratio >= 0.75 && ratio <= 1.25,
            fmt("mc/prediction ratio %.3f (pred %.3f)", ratio, pred.value));
  const RegimeInfo regime = classify_regime(rates, 0.2, 0.45);
  c.require(regime.label == "fast-forcing-strong",
            "regime label = " + regime.label + " (want fast-forcing-strong)");
}

void criterion7_invariant() {
  Criterion c(7, "invariant measure against the long-run histogram");
  const auto m = model_tilt();
  const SpectralProfile profile = build_spectral_profile(m, 0.45, 64, 8, 2048);
  const InvariantExpansion e = assemble_expansion(profile, 0.2, 0.5);
  SimConfig sim;
  sim.epsilon = 0.2;
  sim.sigma = 0.45;
  sim.rho = 0.5;
  sim.dt = 2e-4;
  sim.seed = 99;
  sim.threads = 2;
  sim.max_time = 1e18;
  sim.start.x = -1.0;
  sim.start.y = 0.0;
  const std::size_t nx = 64, ny = 16;
  const Histogram2D h =
      empirical_invariant(sim, *m, 50.0, 40000.0, nx, ny, profile.x_lo, profile.x_hi);
  // Model mass per bin: 4-point x subsampling, 2-point y subsampling.
  std::vector<double> model_mass(nx * ny, 0.0);
  const double dx = (profile.x_hi - profile.x_lo) / static_cast<double>(nx);
  double total = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      double acc = 0.0;
      for (int sx = 0; sx < 4; ++sx) {
        const double x = profile.x_lo + dx * (static_cast<double>(i) + (sx + 0.5) / 4.0);
        for (int sy = 0; sy < 2; ++sy) {
          const double y = (static_cast<double>(j) + (sy + 0.5) / 2.0) /
                           static_cast<double>(ny);
          acc += e.pi(x, y);
        }
      }
      model_mass[i * ny + j] = acc;
      total += acc;
    }
  }
  for (double& v : model_mass) v /= total;
  double tv = 0.0;
  for (std::size_t i = 0; i < nx * ny; ++i) {
    tv += 0.5 * std::abs(model_mass[i] - h.mass[i]);
  }
  c.require(tv < 0.05, fmt("TV distance %.4f < 0.05", tv));

  // Left-of-saddle conditional mass on an 8-point y grid.
  double worst = 0.0;
  for (std::size_t jb = 0; jb < 8; ++jb) {
    const double yc = (static_cast<double>(jb) + 0.5) / 8.0;
    const double saddle = profile.geometry.x_saddle(yc);
    double left = 0.0, tot = 0.0;
    for (std::size_t j2 = 2 * jb; j2 < 2 * jb + 2; ++j2) {
      for (std::size_t i = 0; i < nx; ++i) {
        const double xc = profile.x_lo + dx * (static_cast<double>(i) + 0.5);
        tot += h.at(i, j2);
        if (xc < saddle) left += h.at(i, j2);
      }
    }
    const double frac = tot > 0.0 ? left / tot : 0.0;
    worst = std::max(worst, std::abs(frac - 0.5 * (1.0 - e.delta1.value(yc))));
  }
  c.require(worst < 0.03, fmt("left-well mass deviation %.4f < 0.03", worst));
}

void criterion8_capacity() {
  Criterion c(8, "capacity bracket around C0");
  const auto m = model_tilt();
  {
    const SpectralProfile p = build_spectral_profile(m, 0.45, 32, 8, 2048);
    const InvariantExpansion e = assemble_expansion(p, 0.2, 0.5);
    const CapacityEstimate cap = estimate_capacity(p, e, 0.3);
    c.require(cap.thomson_lower <= cap.dirichlet_upper * 1.0001,
              fmt("ordering %.4g <= %.4g", cap.thomson_lower, cap.dirichlet_upper));
    const double up = cap.dirichlet_upper / cap.c0, lo = cap.thomson_lower / cap.c0;
    c.require(up >= 0.5 && up <= 2.0 && lo >= 0.5 && lo <= 2.0,
              fmt("sigma=0.45 ratios [%.3f, %.3f] in [0.5, 2]", lo, up));
  }
  {
    const SpectralProfile p = build_spectral_profile(m, 0.35, 32, 8, 4096);
    const InvariantExpansion e = assemble_expansion(p, 0.05, 0.5);
    const CapacityEstimate cap = estimate_capacity(p, e, 0.3);
    const double up = cap.dirichlet_upper / cap.c0, lo = cap.thomson_lower / cap.c0;
    c.require(up >= 0.8 && up <= 1.25 && lo >= 0.8 && lo <= 1.25,
              fmt("sigma=0.35 ratios [%.3f, %.3f] in [0.8, 1.25]", lo, up));
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9_determinism() {
  Criterion c(9, "verify pipeline is byte-identical across runs and worker counts");
  RunConfig cfg;
  cfg.y_points = 32;
  cfg.x_points = 1024;
  cfg.paths = 1000;
  cfg.max_time = 200.0;
  const fs::path base = fs::temp_directory_path() / "oscwell_acceptance9";
  fs::remove_all(base);
  RunConfig c1 = cfg;
  c1.threads = 1;
  c1.out_dir = (base / "run1").string();
  RunConfig c2 = cfg;
  c2.threads = 4;
  c2.out_dir = (base / "run2").string();
  const VerifyReport r1 = run_verify(c1);
  const VerifyReport r2 = run_verify(c2);
  c.require(r1.pass, "verify run 1 passed: " + std::string(r1.pass ? "yes" : "no"));
  c.require(r2.pass, "verify run 2 passed: " + std::string(r2.pass ? "yes" : "no"));
  std::size_t compared = 0;
  bool identical = true;
  std::string first_diff;
  for (const auto& entry : fs::directory_iterator(c1.out_dir)) {
    const auto name = entry.path().filename();
    const std::string a = slurp(entry.path());
    const std::string b = slurp(fs::path(c2.out_dir) / name);
    ++compared;
    if (a != b || a.empty()) {
      identical = false;
      if (first_diff.empty()) first_diff = name.string();
    }
  }
  c.require(compared >= 8, fmt("%g artifacts compared", static_cast<double>(compared)));
  c.require(identical, identical ? "all artifacts byte-identical"
                                 : "differs: " + first_diff);
  fs::remove_all(base);
}

}  // namespace

int main() {
  criterion1_two_state();
  criterion2_spectral_oracle();
  criterion3_laplace();
  criterion4_delta_limits();
  criterion5_static_ek();
  criterion6_fast_forcing_law();
  criterion7_invariant();
  criterion8_capacity();
  criterion9_determinism();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 acceptance criteria passed\n");
  return 0;
}
