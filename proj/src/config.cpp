#include "oscwell/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oscwell/errors.hpp"

namespace oscwell {

using ordered_json = nlohmann::ordered_json;

PotentialModel RunConfig::build_model() const {
  if (family != "tilted_quartic") {
    throw ConfigError("unknown potential.family: " + family);
  }
  return make_tilted_quartic(base_depth, tilt_amplitude, tilt_phase);
}

void RunConfig::validate() const {
  if (family.empty()) throw ConfigError("potential.family required");
  if (!(sigma > 0.0)) throw ConfigError("dynamics.sigma must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("dynamics.epsilon must be positive");
  if (rho < 0.0) throw ConfigError("dynamics.rho must be nonnegative");
  if (!(rho_hat > 0.0)) throw ConfigError("dynamics.rho_hat must be positive");
  if (y_points < 16) throw ConfigError("grids.y_points must be at least 16");
  if (x_points < 64) throw ConfigError("grids.x_points must be at least 64");
  if (n_max < 1) throw ConfigError("grids.n_max must be at least 1");
  if (paths < 1) throw ConfigError("mc.paths must be at least 1");
  if (!(dt > 0.0)) throw ConfigError("mc.dt must be positive");
  if (!(max_time > 0.0)) throw ConfigError("mc.max_time must be positive");
}

RunConfig default_config() { return RunConfig{}; }

namespace {

template <class T>
T take(ordered_json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  T v = j.at(key).get<T>();
  j.erase(key);
  return v;
}

void expect_empty(const ordered_json& j, const std::string& where) {
  if (!j.empty()) {
    throw ConfigError("unknown key in " + where + ": " + j.begin().key());
  }
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    if (root.contains("potential")) {
      auto j = root.at("potential");
      c.family = take<std::string>(j, "family", c.family);
      c.base_depth = take<double>(j, "base_depth", c.base_depth);
      c.tilt_amplitude = take<double>(j, "tilt_amplitude", c.tilt_amplitude);
      c.tilt_phase = take<double>(j, "tilt_phase", c.tilt_phase);
      expect_empty(j, "potential");
      root.erase("potential");
    }
    if (root.contains("dynamics")) {
      auto j = root.at("dynamics");
      c.sigma = take<double>(j, "sigma", c.sigma);
      c.epsilon = take<double>(j, "epsilon", c.epsilon);
      c.rho = take<double>(j, "rho", c.rho);
      c.rho_hat = take<double>(j, "rho_hat", c.rho_hat);
      expect_empty(j, "dynamics");
      root.erase("dynamics");
    }
    if (root.contains("grids")) {
      auto j = root.at("grids");
      c.y_points = take<std::size_t>(j, "y_points", c.y_points);
      c.x_points = take<std::size_t>(j, "x_points", c.x_points);
      c.n_max = take<std::size_t>(j, "n_max", c.n_max);
      expect_empty(j, "grids");
      root.erase("grids");
    }
    if (root.contains("mc")) {
      auto j = root.at("mc");
      c.paths = take<std::size_t>(j, "paths", c.paths);
      c.dt = take<double>(j, "dt", c.dt);
      c.seed = take<std::uint64_t>(j, "seed", c.seed);
      c.max_time = take<double>(j, "max_time", c.max_time);
      c.threads = take<unsigned>(j, "threads", c.threads);
      expect_empty(j, "mc");
      root.erase("mc");
    }
    if (root.contains("output")) {
      auto j = root.at("output");
      c.out_dir = take<std::string>(j, "dir", c.out_dir);
      expect_empty(j, "output");
      root.erase("output");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  expect_empty(root, "config");
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  ordered_json j;
  j["potential"] = {{"family", c.family},
                    {"base_depth", c.base_depth},
                    {"tilt_amplitude", c.tilt_amplitude},
                    {"tilt_phase", c.tilt_phase}};
  j["dynamics"] = {{"sigma", c.sigma},
                   {"epsilon", c.epsilon},
                   {"rho", c.rho},
                   {"rho_hat", c.rho_hat}};
  j["grids"] = {{"y_points", c.y_points}, {"x_points", c.x_points}, {"n_max", c.n_max}};
  j["mc"] = {{"paths", c.paths},
             {"dt", c.dt},
             {"seed", c.seed},
             {"max_time", c.max_time},
             {"threads", c.threads}};
  j["output"] = {{"dir", c.out_dir}};
  return j.dump(2) + "\n";
}

void save_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << config_to_json(config);
}

}  // namespace oscwell
