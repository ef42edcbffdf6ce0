#include "oscwell/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "oscwell/capacity.hpp"
#include "oscwell/errors.hpp"
#include "oscwell/invariant.hpp"
#include "oscwell/jump.hpp"
#include "oscwell/plot.hpp"
#include "oscwell/predict.hpp"
#include "oscwell/profile.hpp"
#include "oscwell/simulate.hpp"

namespace oscwell {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json check_json(const VerifyCheck& c) {
  return ordered_json{{"name", c.name}, {"value", c.value}, {"bound", c.bound},
                      {"pass", c.pass}};
}

void add_check(VerifyStage& st, const std::string& name, double value, double bound,
               bool pass) {
  st.checks.push_back({name, value, bound, pass});
  st.pass = st.pass && pass;
}

}  // namespace

std::string VerifyReport::to_json() const {
  ordered_json j;
  j["pass"] = pass;
  j["failed_stage"] = failed_stage;
  ordered_json stages_j = ordered_json::array();
  for (const auto& st : stages) {
    ordered_json sj;
    sj["name"] = st.name;
    sj["pass"] = st.pass;
    ordered_json cj = ordered_json::array();
    for (const auto& c : st.checks) cj.push_back(check_json(c));
    sj["checks"] = cj;
    stages_j.push_back(sj);
  }
  j["stages"] = stages_j;
  return j.dump(2) + "\n";
}

VerifyReport run_verify(const RunConfig& config) {
  namespace fs = std::filesystem;
  config.validate();
  fs::create_directories(config.out_dir);
  const auto out = [&](const std::string& name) { return config.out_dir + "/" + name; };
  const double sig2 = config.sigma * config.sigma;

  VerifyReport report;
  const auto model = std::make_shared<const PotentialModel>(config.build_model());

  // Stage 1: standing assumptions on the drift.
  {
    VerifyStage st{"potential", {}, true};
    std::vector<double> grid(config.y_points);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      grid[k] = static_cast<double>(k) / static_cast<double>(grid.size());
    }
    const ValidationReport rep = validate_assumptions(*model, grid);
    for (const auto& c : rep.checks) add_check(st, c.name, c.value, 0.0, c.pass);
    report.stages.push_back(st);
    if (!st.pass) {
      report.pass = false;
      report.failed_stage = "potential";
      std::ofstream(out("report.json")) << report.to_json();
      return report;
    }
  }

  // Stage 2: frozen-slice spectral sweep.
  SpectralProfile profile =
      build_spectral_profile(model, config.sigma, config.y_points, config.n_max,
                             std::max<std::size_t>(config.x_points, 1024));
  {
    VerifyStage st{"spectral", {}, true};
    std::vector<std::vector<double>> rows;
    double ab_err = 0.0, ratio_err = 0.0, zn_err = 0.0;
    for (const auto& r : profile.rates) {
      ab_err = std::max(ab_err, std::abs(r.a * r.a + r.b * r.b - 1.0));
      ratio_err = std::max(ratio_err, std::abs(r.lambda1_numeric / r.lambda1_kramers - 1.0));
      zn_err = std::max(zn_err, std::abs(z0n_diagnostic(r.z0, r.n_committor,
                                                       r.lambda1_numeric, r.b, config.sigma) -
                                         1.0));
      rows.push_back({r.y, r.z0, r.n_committor, r.r_minus, r.r_plus, r.lambda1_kramers,
                      r.lambda1_numeric, r.a, r.b, r.delta_bar});
    }
    write_csv(out("spectral.csv"),
              {"y", "Z0", "N", "r_minus", "r_plus", "lambda1_kramers", "lambda1_numeric", "A",
               "B", "DeltaBar"},
              rows);
    add_check(st, "a2_plus_b2_identity", ab_err, 1e-12, ab_err <= 1e-12);
    add_check(st, "lambda1_numeric_vs_kramers", ratio_err, 0.3, ratio_err <= 0.3);
    add_check(st, "z0_n_lambda1_relation", zn_err, 5.0 * sig2, zn_err <= 5.0 * sig2);
    report.stages.push_back(st);
  }

  const RateProfile rates = profile.rate_profile(config.epsilon, false);
  const RateProfile rates_num = profile.rate_profile(config.epsilon, true);

  // Stage 3: two-state reduction, closed form against inversion sampling.
  {
    VerifyStage st{"jump", {}, true};
    std::vector<std::vector<double>> rows;
    double worst_sigmas = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double y0 = static_cast<double>(i) / 8.0;
      const double cf = mean_jump_time(rates, y0);
      const HittingStats mc = simulate_jump(rates, y0, config.seed + i, 10000);
      rows.push_back({y0, cf, mc.mean, mc.stderr_});
      worst_sigmas = std::max(worst_sigmas, std::abs(mc.mean - cf) / mc.stderr_);
    }
    write_csv(out("jump.csv"), {"y0", "mean_closed_form", "mean_mc", "stderr_mc"}, rows);
    add_check(st, "mc_vs_closed_form_sigmas", worst_sigmas, 3.0, worst_sigmas <= 3.0);
    const auto sol = delta_periodic(rates);
    add_check(st, "delta_ode_residual", sol.residual_sup, 1e-8, sol.residual_sup <= 1e-8);
    report.stages.push_back(st);
  }

  // Stage 4: invariant measure.
  InvariantExpansion expansion = assemble_expansion(profile, config.epsilon, config.rho);
  {
    VerifyStage st{"invariant", {}, true};
    add_check(st, "delta1_ode_residual", expansion.delta1.residual_sup, 1e-8,
              expansion.delta1.residual_sup <= 1e-8);
    // Fast-forcing proximity of delta1 to <lambda1 A>/<lambda1>.
    double avg_l1 = 0.0, avg_l1a = 0.0;
    for (int k = 0; k < 512; ++k) {
      const double y = k / 512.0;
      avg_l1 += rates_num.lambda1(y) / 512.0;
      avg_l1a += rates_num.lambda1(y) * rates_num.a(y) / 512.0;
    }
    const double ff = avg_l1a / avg_l1;
    double dev = 0.0;
    for (double d : expansion.delta1.delta1) dev = std::max(dev, std::abs(d - ff));
    const double bound = 2.0 * avg_l1 / config.epsilon;
    add_check(st, "delta1_fast_forcing_deviation", dev, bound, dev <= bound);
    add_check(st, "pi_positive", expansion.negative_density ? 1.0 : 0.0, 0.0,
              !expansion.negative_density);

    const auto jump_sol = delta_periodic(rates);
    std::vector<std::vector<double>> rows;
    const std::size_t n_rows = expansion.delta1.y.size();
    for (std::size_t k = 0; k < n_rows; ++k) {
      const double y = expansion.delta1.y[k];
      const double d1 = expansion.delta1.delta1[k];
      const double alpha1 = (profile.a_spline(y) - d1) / profile.b_spline(y);
      const double dj = jump_sol.delta[k * jump_sol.delta.size() / n_rows];
      rows.push_back({y, d1, alpha1, 0.5 * (1.0 - d1), dj});
    }
    write_csv(out("invariant.csv"),
              {"y", "delta1", "alpha1", "p_minus_theory", "delta_jump"}, rows);

    std::vector<std::vector<double>> heat;
    const std::size_t nx = 128, ny = profile.slices();
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = profile.x_lo +
                       (profile.x_hi - profile.x_lo) * static_cast<double>(i) /
                           static_cast<double>(nx - 1);
      for (std::size_t k = 0; k < ny; ++k) {
        heat.push_back({x, profile.y[k], expansion.pi(x, profile.y[k])});
      }
    }
    write_csv(out("pi_heatmap.csv"), {"x", "y", "density"}, heat);
    report.stages.push_back(st);
  }

  // Stage 5: capacity bracket.
  {
    VerifyStage st{"capacity", {}, true};
    const CapacityEstimate cap = estimate_capacity(profile, expansion, config.rho_hat);
    add_check(st, "bracket_order", cap.thomson_lower / cap.dirichlet_upper, 1.02,
              cap.thomson_lower <= 1.02 * cap.dirichlet_upper);
    const double r_up = cap.dirichlet_upper / cap.c0;
    const double r_lo = cap.thomson_lower / cap.c0;
    add_check(st, "dirichlet_over_c0", r_up, 2.0, r_up >= 0.5 && r_up <= 2.0);
    add_check(st, "thomson_over_c0", r_lo, 2.0, r_lo >= 0.5 && r_lo <= 2.0);
    ordered_json j{{"C0", cap.c0},
                   {"dirichlet_upper", cap.dirichlet_upper},
                   {"thomson_lower", cap.thomson_lower},
                   {"defect_upper", cap.defect_upper},
                   {"defect_lower", cap.defect_lower},
                   {"rho_hat", cap.rho_hat},
                   {"sigma", cap.sigma},
                   {"epsilon", cap.epsilon}};
    std::ofstream(out("capacity.json")) << j.dump(2) << "\n";
    report.stages.push_back(st);
  }

  // Stage 6: SDE Monte Carlo against the fast-forcing law.
  {
    VerifyStage st{"mc", {}, true};
    const Prediction pred = ek_fast_forcing(rates);
    SimConfig sim;
    sim.epsilon = config.epsilon;
    sim.sigma = config.sigma;
    sim.rho = config.rho;
    sim.dt = config.dt;
    sim.rho_hat = config.rho_hat;
    sim.seed = config.seed;
    sim.n_paths = config.paths;
    sim.max_time = std::max(config.max_time, 20.0 * pred.value);
    sim.threads = config.threads;
    sim.start.on_boundary_a = true;
    sim.start.y = 0.0;
    const HitResult hit = first_hit_B(sim, *model, profile.geometry);
    const double ratio = hit.stats.mean / pred.value;
    // The band covers the law's own error scale at desk parameters plus
    // the sampling noise of a default-sized run.
    const double band = 0.25 + 3.0 * hit.stats.stderr_ / pred.value;
    add_check(st, "mc_vs_fast_forcing_ratio", ratio, 1.0 + band,
              ratio >= 1.0 - band && ratio <= 1.0 + band);
    add_check(st, "censored_fraction",
              static_cast<double>(hit.stats.censored) /
                  static_cast<double>(std::max<std::size_t>(config.paths, 1)),
              0.01, !hit.stats.flagged);
    std::vector<std::vector<double>> rows;
    for (double t : hit.tau) rows.push_back({t});
    write_csv(out("mc_tau.csv"), {"tau"}, rows);
    ordered_json j{{"n", hit.stats.n},
                   {"mean", hit.stats.mean},
                   {"stderr", hit.stats.stderr_},
                   {"ci95_low", hit.stats.ci95_low},
                   {"ci95_high", hit.stats.ci95_high},
                   {"censored", hit.stats.censored},
                   {"ks_stat", hit.stats.ks_stat},
                   {"prediction", pred.value}};
    std::ofstream(out("mc_stats.json")) << j.dump(2) << "\n";
    report.stages.push_back(st);
  }

  // Stage 7: closed-form law consistency and regime label.
  {
    VerifyStage st{"predict", {}, true};
    const Prediction ff = ek_fast_forcing(rates);
    const Prediction gen = general_equilibrium_time(
        rates, [&](double y) { return expansion.delta1.value(y); });
    const RegimeInfo regime = classify_regime(rates, config.epsilon, config.sigma);
    if (regime.label == "fast-forcing-strong" || regime.label == "fast-forcing-weak") {
      const double gap = std::abs(gen.value / ff.value - 1.0);
      add_check(st, "general_vs_fast_forcing", gap, 0.1, gap <= 0.1);
    }
    ordered_json j{{"fast_forcing", ff.value},
                   {"general_equilibrium", gen.value},
                   {"regime", regime.label},
                   {"thresholds",
                    {{"exp_hmax", regime.thr_exp_hmax},
                     {"exp_hmin", regime.thr_exp_hmin},
                     {"sigma2", regime.sigma2},
                     {"avg_lambda1_quarter", regime.avg_lambda1_quarter}}},
                   {"rates",
                    {{"min_lambda1", regime.min_lambda1},
                     {"max_lambda1", regime.max_lambda1},
                     {"avg_lambda1", regime.avg_lambda1}}},
                   {"slack", regime.slack},
                   {"error_envelope", ff.error_envelope},
                   {"valid_window", ff.valid}};
    std::ofstream(out("predict.json")) << j.dump(2) << "\n";
    report.stages.push_back(st);
  }

  for (const auto& st : report.stages) {
    if (!st.pass && report.failed_stage.empty()) {
      report.failed_stage = st.name;
      report.pass = false;
    }
  }
  std::ofstream(out("report.json")) << report.to_json();
  return report;
}

}  // namespace oscwell
