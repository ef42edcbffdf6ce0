#include "oscwell/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "oscwell/capacity.hpp"
#include "oscwell/errors.hpp"
#include "oscwell/invariant.hpp"
#include "oscwell/jump.hpp"
#include "oscwell/plot.hpp"
#include "oscwell/predict.hpp"
#include "oscwell/profile.hpp"
#include "oscwell/simulate.hpp"
#include "oscwell/verify.hpp"

namespace oscwell {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Common {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;

  RunConfig load() const {
    RunConfig c = config_path.empty() ? default_config() : load_config(config_path);
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (seed_set) c.seed = seed;
    c.validate();
    return c;
  }
};

void ensure_out(const RunConfig& c) { fs::create_directories(c.out_dir); }

std::string path_in(const RunConfig& c, const std::string& name) {
  return c.out_dir + "/" + name;
}

int cmd_spectral(const RunConfig& c) {
  ensure_out(c);
  const auto model = std::make_shared<const PotentialModel>(c.build_model());
  const auto rows = spectral_sweep(model, c.sigma, c.y_points, c.x_points, true,
                                   std::max<std::size_t>(c.x_points, 1024));
  std::vector<std::vector<double>> out;
  for (const auto& r : rows) {
    out.push_back({r.y, r.z0, r.n_committor, r.r_minus, r.r_plus, r.lambda1_kramers,
                   r.lambda1_numeric, r.a, r.b, r.delta_bar});
  }
  write_csv(path_in(c, "spectral.csv"),
            {"y", "Z0", "N", "r_minus", "r_plus", "lambda1_kramers", "lambda1_numeric", "A",
             "B", "DeltaBar"},
            out);
  std::cout << "wrote " << path_in(c, "spectral.csv") << "\n";
  return 0;
}

int cmd_jump(const RunConfig& c, double y0, bool y0_set, std::size_t samples) {
  ensure_out(c);
  const PotentialModel model = c.build_model();
  const RateProfile profile = RateProfile::from_model(model, c.sigma, c.epsilon, c.y_points);
  std::vector<double> y0s;
  if (y0_set) {
    y0s.push_back(y0);
  } else {
    for (int i = 0; i < 8; ++i) y0s.push_back(static_cast<double>(i) / 8.0);
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < y0s.size(); ++i) {
    const double cf = mean_jump_time(profile, y0s[i]);
    const HittingStats mc = simulate_jump(profile, y0s[i], c.seed + i, samples);
    rows.push_back({y0s[i], cf, mc.mean, mc.stderr_});
  }
  write_csv(path_in(c, "jump.csv"), {"y0", "mean_closed_form", "mean_mc", "stderr_mc"}, rows);
  std::cout << "wrote " << path_in(c, "jump.csv") << "\n";
  return 0;
}

int cmd_invariant(const RunConfig& c, bool with_mc) {
  ensure_out(c);
  const auto model = std::make_shared<const PotentialModel>(c.build_model());
  const SpectralProfile profile = build_spectral_profile(
      model, c.sigma, c.y_points, c.n_max, std::max<std::size_t>(c.x_points, 1024));
  const InvariantExpansion e = assemble_expansion(profile, c.epsilon, c.rho);

  Histogram2D hist;
  if (with_mc) {
    SimConfig sim;
    sim.epsilon = c.epsilon;
    sim.sigma = c.sigma;
    sim.rho = c.rho;
    sim.dt = c.dt;
    sim.seed = c.seed;
    sim.threads = c.threads;
    sim.max_time = 1e18;
    sim.start.x = profile.geometry.x_minus(0.0);
    sim.start.y = 0.0;
    hist = empirical_invariant(sim, *model, 50.0, c.max_time, 64, profile.slices(),
                               profile.x_lo, profile.x_hi);
  }

  std::vector<std::string> cols{"y", "delta1", "alpha1", "p_minus_theory"};
  if (with_mc) cols.push_back("p_minus_mc");
  std::vector<std::vector<double>> rows;
  const std::size_t n_rows = e.delta1.y.size();
  for (std::size_t k = 0; k < n_rows; ++k) {
    const double y = e.delta1.y[k];
    const double d1 = e.delta1.delta1[k];
    std::vector<double> row{y, d1, (profile.a_spline(y) - d1) / profile.b_spline(y),
                            0.5 * (1.0 - d1)};
    if (with_mc) {
      // Left-of-saddle mass conditional on the y bin containing y.
      const std::size_t iy =
          std::min(static_cast<std::size_t>(y * static_cast<double>(hist.ny)), hist.ny - 1);
      double left = 0.0, tot = 0.0;
      const double x_saddle = profile.geometry.x_saddle(y);
      for (std::size_t ix = 0; ix < hist.nx; ++ix) {
        const double x_mid = hist.x_lo + (static_cast<double>(ix) + 0.5) /
                                             static_cast<double>(hist.nx) *
                                             (hist.x_hi - hist.x_lo);
        tot += hist.at(ix, iy);
        if (x_mid < x_saddle) left += hist.at(ix, iy);
      }
      row.push_back(tot > 0.0 ? left / tot : 0.0);
    }
    rows.push_back(std::move(row));
  }
  write_csv(path_in(c, "invariant.csv"), cols, rows);

  std::vector<std::vector<double>> heat;
  const std::size_t nx = 128;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = profile.x_lo + (profile.x_hi - profile.x_lo) * static_cast<double>(i) /
                                        static_cast<double>(nx - 1);
    for (std::size_t k = 0; k < profile.slices(); ++k) {
      heat.push_back({x, profile.y[k], e.pi(x, profile.y[k])});
    }
  }
  write_csv(path_in(c, "pi_heatmap.csv"), {"x", "y", "density"}, heat);
  std::cout << "wrote " << path_in(c, "invariant.csv") << " and pi_heatmap.csv\n";
  return 0;
}

int cmd_capacity(const RunConfig& c) {
  ensure_out(c);
  const auto model = std::make_shared<const PotentialModel>(c.build_model());
  const SpectralProfile profile = build_spectral_profile(
      model, c.sigma, c.y_points, c.n_max, std::max<std::size_t>(c.x_points, 1024));
  const InvariantExpansion e = assemble_expansion(profile, c.epsilon, c.rho);
  const CapacityEstimate cap = estimate_capacity(profile, e, c.rho_hat);
  ordered_json j{{"C0", cap.c0},
                 {"dirichlet_upper", cap.dirichlet_upper},
                 {"thomson_lower", cap.thomson_lower},
                 {"defect_upper", cap.defect_upper},
                 {"defect_lower", cap.defect_lower},
                 {"rho_hat", cap.rho_hat},
                 {"sigma", cap.sigma},
                 {"epsilon", cap.epsilon}};
  std::ofstream(path_in(c, "capacity.json")) << j.dump(2) << "\n";
  std::cout << "wrote " << path_in(c, "capacity.json") << "\n";
  return 0;
}

int cmd_simulate(const RunConfig& c, const std::string& start) {
  ensure_out(c);
  const auto model = std::make_shared<const PotentialModel>(c.build_model());
  const GeometrySweep geometry = sweep_geometry(*model);
  SimConfig sim;
  sim.epsilon = c.epsilon;
  sim.sigma = c.sigma;
  sim.rho = c.rho;
  sim.dt = c.dt;
  sim.rho_hat = c.rho_hat;
  sim.seed = c.seed;
  sim.n_paths = c.paths;
  sim.max_time = c.max_time;
  sim.threads = c.threads;
  if (start.empty() || start[0] == 'A' || start[0] == 'a') {
    sim.start.on_boundary_a = true;
    const auto at = start.find('@');
    sim.start.y = at == std::string::npos ? 0.0 : std::stod(start.substr(at + 1));
  } else {
    const auto comma = start.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("--start expects 'x,y' or 'A@y0'");
    }
    sim.start.x = std::stod(start.substr(0, comma));
    sim.start.y = std::stod(start.substr(comma + 1));
  }
  const HitResult hit = first_hit_B(sim, *model, geometry);
  std::vector<std::vector<double>> rows;
  for (double t : hit.tau) rows.push_back({t});
  write_csv(path_in(c, "mc_tau.csv"), {"tau"}, rows);
  ordered_json j{{"n", hit.stats.n},
                 {"mean", hit.stats.mean},
                 {"stderr", hit.stats.stderr_},
                 {"ci95_low", hit.stats.ci95_low},
                 {"ci95_high", hit.stats.ci95_high},
                 {"censored", hit.stats.censored},
                 {"ks_stat", hit.stats.ks_stat},
                 {"clock", "rescaled (multiply by 1/epsilon for the unscaled clock)"}};
  std::ofstream(path_in(c, "mc_stats.json")) << j.dump(2) << "\n";
  std::cout << "wrote " << path_in(c, "mc_tau.csv") << " and mc_stats.json\n";
  return 0;
}

int cmd_predict(const RunConfig& c) {
  ensure_out(c);
  const auto model = std::make_shared<const PotentialModel>(c.build_model());
  const SpectralProfile profile = build_spectral_profile(
      model, c.sigma, c.y_points, c.n_max, std::max<std::size_t>(c.x_points, 1024));
  const RateProfile rates = profile.rate_profile(c.epsilon, false);
  const InvariantExpansion e = assemble_expansion(profile, c.epsilon, c.rho);
  const WellGeometry g0 = find_critical_points(*model, 0.0, c.sigma);

  const Prediction ff = ek_fast_forcing(rates);
  const Prediction gen =
      general_equilibrium_time(rates, [&](double y) { return e.delta1.value(y); });
  const RegimeInfo regime = classify_regime(rates, c.epsilon, c.sigma);
  ordered_json j;
  j["regime"] = regime.label;
  j["low_confidence"] = regime.low_confidence;
  j["slack"] = regime.slack;
  j["thresholds"] = {{"exp_hmax", regime.thr_exp_hmax},
                     {"exp_hmin", regime.thr_exp_hmin},
                     {"sigma2", regime.sigma2},
                     {"avg_lambda1_quarter", regime.avg_lambda1_quarter},
                     {"min_lambda1", regime.min_lambda1},
                     {"max_lambda1", regime.max_lambda1},
                     {"avg_lambda1", regime.avg_lambda1}};
  j["laws"] = ordered_json::object();
  j["laws"]["static_ek_y0"] = ek_static(g0, c.sigma);
  j["laws"]["fast_forcing"] = {{"value", ff.value},
                               {"error_envelope", ff.error_envelope},
                               {"valid_window", ff.valid}};
  try {
    const Prediction lp = ek_laplace_peak(rates, c.sigma);
    j["laws"]["laplace_peak"] = {{"value", lp.value}, {"extra_factor", lp.extra_factor}};
  } catch (const NoInteriorPeak& e2) {
    j["laws"]["laplace_peak"] = {{"error", e2.what()}};
  }
  j["laws"]["general_equilibrium"] = {{"value", gen.value}};
  if (regime.label == "super-adiabatic" || regime.label == "intermediate") {
    // No sharp law is available here; report the frozen-slice value with an
    // explicit low-confidence marker.
    j["laws"]["selected"] = {{"law", "static-ek (frozen y0=0, rescaled)"},
                             {"value", c.epsilon * ek_static(g0, c.sigma)},
                             {"low_confidence", true}};
  } else {
    j["laws"]["selected"] = {{"law", "fast-forcing"},
                             {"value", ff.value},
                             {"low_confidence", false}};
  }
  j["clock"] = "rescaled (multiply by 1/epsilon for the unscaled clock)";
  std::ofstream(path_in(c, "predict.json")) << j.dump(2) << "\n";
  std::cout << "wrote " << path_in(c, "predict.json") << "\n";
  return 0;
}

int cmd_verify(const RunConfig& c) {
  const VerifyReport report = run_verify(c);
  for (const auto& st : report.stages) {
    for (const auto& ch : st.checks) {
      std::printf("[%s] %s:%s value=%.6g bound=%.6g\n", ch.pass ? "pass" : "FAIL",
                  st.name.c_str(), ch.name.c_str(), ch.value, ch.bound);
    }
  }
  if (!report.pass) {
    std::cerr << "verify failed at stage: " << report.failed_stage << "\n";
    return 1;
  }
  std::cout << "verify passed; report at " << c.out_dir << "/report.json\n";
  return 0;
}

int cmd_plot(const RunConfig& c) {
  const auto files = render_plots(c.out_dir);
  for (const auto& f : files) std::cout << "wrote " << c.out_dir << "/" << f << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"numerical laboratory for periodically forced double-well diffusions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Common common;
  app.add_option("--config", common.config_path, "JSON run configuration");
  app.add_option("--out", common.out_dir, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", common.seed, "master RNG seed (overrides config)");

  auto* sc_spectral = app.add_subcommand("spectral", "frozen-slice sweep CSV");
  auto* sc_jump = app.add_subcommand("jump", "two-state closed form vs sampling");
  double jump_y0 = 0.0;
  std::size_t jump_samples = 10000;
  auto* jump_y0_opt = sc_jump->add_option("--y0", jump_y0, "initial phase");
  sc_jump->add_option("--samples", jump_samples, "number of sampled absorption times");
  double cli_epsilon = -1.0;
  sc_jump->add_option("--epsilon", cli_epsilon, "forcing rate (overrides config)");

  auto* sc_invariant = app.add_subcommand("invariant", "delta1 solve and pi heatmap");
  bool inv_mc = false;
  sc_invariant->add_flag("--mc", inv_mc, "add the empirical left-well mass column");
  auto* sc_capacity = app.add_subcommand("capacity", "Dirichlet/Thomson bracket");
  auto* sc_simulate = app.add_subcommand("simulate", "SDE first-passage sampling");
  std::string sim_start = "A@0";
  double sim_eps = -1.0, sim_sigma = -1.0, sim_rho = -1.0, sim_dt = -1.0, sim_tmax = -1.0;
  std::size_t sim_paths = 0;
  sc_simulate->add_option("--start", sim_start, "'x,y' or 'A@y0' (default A@0)");
  sc_simulate->add_option("--epsilon", sim_eps, "forcing rate");
  sc_simulate->add_option("--sigma", sim_sigma, "noise intensity");
  sc_simulate->add_option("--rho", sim_rho, "slow-noise factor");
  sc_simulate->add_option("--dt", sim_dt, "time step");
  sc_simulate->add_option("--paths", sim_paths, "number of paths");
  sc_simulate->add_option("--max-time", sim_tmax, "censoring horizon");
  auto* sc_predict = app.add_subcommand("predict", "closed-form transition-time laws");
  auto* sc_verify = app.add_subcommand("verify", "full theory-vs-MC pipeline");
  auto* sc_plot = app.add_subcommand("plot", "render SVG plots from CSV artifacts");

  std::vector<const char*> argv;
  argv.push_back("oscwell");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    common.seed_set = seed_opt->count() > 0;
    RunConfig config = common.load();
    if (sc_jump->parsed() && cli_epsilon > 0.0) config.epsilon = cli_epsilon;
    if (sc_simulate->parsed()) {
      if (sim_eps > 0.0) config.epsilon = sim_eps;
      if (sim_sigma > 0.0) config.sigma = sim_sigma;
      if (sim_rho >= 0.0) config.rho = sim_rho;
      if (sim_dt > 0.0) config.dt = sim_dt;
      if (sim_paths > 0) config.paths = sim_paths;
      if (sim_tmax > 0.0) config.max_time = sim_tmax;
    }
    if (sc_spectral->parsed()) return cmd_spectral(config);
    if (sc_jump->parsed()) return cmd_jump(config, jump_y0, jump_y0_opt->count() > 0,
                                           jump_samples);
    if (sc_invariant->parsed()) return cmd_invariant(config, inv_mc);
    if (sc_capacity->parsed()) return cmd_capacity(config);
    if (sc_simulate->parsed()) return cmd_simulate(config, sim_start);
    if (sc_predict->parsed()) return cmd_predict(config);
    if (sc_verify->parsed()) return cmd_verify(config);
    if (sc_plot->parsed()) return cmd_plot(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace oscwell
