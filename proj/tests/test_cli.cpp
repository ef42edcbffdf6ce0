#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oscwell/cli.hpp"
#include "oscwell/config.hpp"
#include "oscwell/errors.hpp"
#include "oscwell/plot.hpp"

using namespace oscwell;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("oscwell_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("config round-trips losslessly") {
  RunConfig c;
  c.sigma = 0.4371234567890123;
  c.epsilon = 0.19999999999999998;
  c.tilt_amplitude = 0.1 / 3.0;
  c.seed = 987654321;
  const RunConfig back = parse_config_json(config_to_json(c));
  CHECK(back.sigma == c.sigma);
  CHECK(back.epsilon == c.epsilon);
  CHECK(back.tilt_amplitude == c.tilt_amplitude);
  CHECK(back.seed == c.seed);
  CHECK(back.y_points == c.y_points);
  CHECK(back.out_dir == c.out_dir);
  // Serialisation is stable.
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(parse_config_json("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"dynamics": {"sigma": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"grids": {"y_points": 4}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"surprise": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"mc": {"dt": 0.0}})"), ConfigError);
}

TEST_CASE("spectral subcommand is reproducible byte for byte") {
  TempDir d1("spec1"), d2("spec2");
  RunConfig c;
  c.y_points = 16;
  c.x_points = 512;
  const std::string cfg = (fs::path(d1.str()) / "config.json").string();
  save_config(c, cfg);
  CHECK(run_cli({"--config", cfg, "--out", d1.str(), "spectral"}) == 0);
  CHECK(run_cli({"--config", cfg, "--out", d2.str(), "spectral"}) == 0);
  CHECK(slurp(d1.str() + "/spectral.csv") == slurp(d2.str() + "/spectral.csv"));
}

TEST_CASE("jump subcommand writes the expected CSV") {
  TempDir d("jump");
  CHECK(run_cli({"--out", d.str(), "jump", "--y0", "0.25", "--samples", "500"}) == 0);
  const CsvTable t = read_csv(d.str() + "/jump.csv");
  CHECK(t.columns == std::vector<std::string>{"y0", "mean_closed_form", "mean_mc",
                                              "stderr_mc"});
  CHECK(t.rows.size() == 1);
  CHECK(t.rows[0][0] == 0.25);
  CHECK(std::abs(t.rows[0][2] - t.rows[0][1]) < 5.0 * t.rows[0][3]);
}

TEST_CASE("unknown config file exits with code 2") {
  CHECK(run_cli({"--config", "/nonexistent/config.json", "spectral"}) == 2);
}

TEST_CASE("monostable configuration fails verify at the potential stage") {
  TempDir d("mono");
  RunConfig c;
  c.tilt_amplitude = 1.0;  // above the bistability threshold 2/(3 sqrt 3)
  c.y_points = 16;
  const std::string cfg = (fs::path(d.str()) / "config.json").string();
  save_config(c, cfg);
  CHECK(run_cli({"--config", cfg, "--out", d.str(), "verify"}) == 1);
  const std::string report = slurp(d.str() + "/report.json");
  CHECK(report.find("\"failed_stage\": \"potential\"") != std::string::npos);
}

TEST_CASE("plot requires artifacts and is deterministic") {
  TempDir d("plot");
  CHECK(run_cli({"--out", d.str(), "plot"}) == 3);  // nothing there yet

  // Minimal artifact set.
  write_csv(d.str() + "/spectral.csv",
            {"y", "Z0", "N", "r_minus", "r_plus", "lambda1_kramers", "lambda1_numeric", "A",
             "B", "DeltaBar"},
            {{0.0, 1, 1, 0.01, 0.02, 0.03, 0.031, 0.1, 0.99, 0.05},
             {0.5, 1, 1, 0.02, 0.01, 0.03, 0.031, -0.1, 0.99, -0.05}});
  write_csv(d.str() + "/invariant.csv", {"y", "delta1", "alpha1", "p_minus_theory"},
            {{0.0, 0.01, 0.1, 0.49}, {0.5, -0.01, -0.1, 0.51}});
  write_csv(d.str() + "/mc_tau.csv", {"tau"}, {{1.0}, {2.0}, {5.0}, {0.5}});
  write_csv(d.str() + "/pi_heatmap.csv", {"x", "y", "density"},
            {{-1.0, 0.0, 0.3}, {-1.0, 0.5, 0.2}, {1.0, 0.0, 0.25}, {1.0, 0.5, 0.25}});
  CHECK(run_cli({"--out", d.str(), "plot"}) == 0);
  const std::string first = slurp(d.str() + "/lambda1.svg");
  CHECK(first.find("<svg") != std::string::npos);
  CHECK(run_cli({"--out", d.str(), "plot"}) == 0);
  CHECK(slurp(d.str() + "/lambda1.svg") == first);
}

TEST_CASE("empty CSV raises MissingArtifact") {
  TempDir d("empty");
  std::ofstream(d.str() + "/spectral.csv") << "";
  CHECK_THROWS_AS(read_csv(d.str() + "/spectral.csv"), MissingArtifact);
  std::ofstream(d.str() + "/only_header.csv") << "a,b\n";
  CHECK_THROWS_AS(read_csv(d.str() + "/only_header.csv"), MissingArtifact);
}

TEST_SUITE_END();
