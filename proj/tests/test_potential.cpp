#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oscwell/errors.hpp"
#include "oscwell/potential.hpp"

using namespace oscwell;

namespace {

// Closed-form roots of x^3 - d x - c = 0 in the three-real-root regime
// (trigonometric method); the independent oracle for the tilted family.
std::vector<double> cubic_roots_trig(double d, double c) {
  const double p = -d, q = -c;
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = 3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p);
  const double theta = std::acos(std::clamp(arg, -1.0, 1.0));
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) {
    roots.push_back(m * std::cos(theta / 3.0 - 2.0 * 3.14159265358979323846 * k / 3.0));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = static_cast<double>(k) / n;
  return y;
}

}  // namespace

TEST_SUITE_BEGIN("potential");

TEST_CASE("symmetric static quartic: values and geometry") {
  const auto m = make_tilted_quartic(1.0, 0.0, 0.0);
  for (double y : {0.0, 0.3, 0.77}) {
    CHECK(m.v0(1.0, y) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(m.v0(-1.0, y) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(m.v0(0.0, y) == doctest::Approx(0.0).epsilon(1e-14));
    const auto g = find_critical_points(m, y);
    CHECK(g.x_minus == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(g.x_saddle == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(g.x_plus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.h_minus == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g.h_plus == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g.omega_minus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(g.omega_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(g.omega0 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("tilted quartic at y=0 against the closed-form cubic oracle") {
  const auto m = make_tilted_quartic(1.0, 0.1, 0.0);
  const auto oracle = cubic_roots_trig(1.0, 0.1);
  const auto g = find_critical_points(m, 0.0);
  CHECK(g.x_minus == doctest::Approx(oracle[0]).epsilon(1e-11));
  CHECK(g.x_saddle == doctest::Approx(oracle[1]).epsilon(1e-11));
  CHECK(g.x_plus == doctest::Approx(oracle[2]).epsilon(1e-11));
  // Drift vanishes to tolerance; its derivative does not.
  for (double x : {g.x_minus, g.x_saddle, g.x_plus}) {
    CHECK(std::abs(m.drift(x, 0.0)) < 1e-12);
    CHECK(std::abs(m.drift_dx(x, 0.0)) > 0.1);
  }
  // At y=0 the tilt -0.1 x lowers the right-hand well, so h_plus > h_minus.
  // (Direct evaluation decides the sign.)
  const double vs = m.v0(g.x_saddle, 0.0);
  CHECK(g.h_minus == doctest::Approx(vs - m.v0(oracle[0], 0.0)).epsilon(1e-11));
  CHECK(g.h_plus == doctest::Approx(vs - m.v0(oracle[2], 0.0)).epsilon(1e-11));
  CHECK(g.h_plus > g.h_minus);
  // Quarter period later the tilt vanishes and the wells are symmetric.
  const auto gq = find_critical_points(m, 0.25);
  CHECK(gq.h_minus == doctest::Approx(gq.h_plus).epsilon(1e-10));
  CHECK(gq.h_minus == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("well depths are consistent with direct potential evaluation") {
  const auto m = make_tilted_quartic(1.0, 0.1, 0.13);
  for (std::size_t k = 0; k < 16; ++k) {
    const double y = static_cast<double>(k) / 16.0;
    const auto g = find_critical_points(m, y);
    const double vs = m.v0(g.x_saddle, y);
    CHECK(std::abs(vs - m.v0(g.x_minus, y) - g.h_minus) < 1e-10);
    CHECK(std::abs(vs - m.v0(g.x_plus, y) - g.h_plus) < 1e-10);
    CHECK(g.h_minus > 0.0);
    CHECK(g.h_plus > 0.0);
    CHECK(g.omega_minus > 0.0);
    CHECK(g.omega0 > 0.0);
  }
}

TEST_CASE("gauge invariance: adding c(y) leaves the geometry unchanged") {
  const auto base = make_tilted_quartic(1.0, 0.1, 0.0);
  PotentialModel shifted = base;
  const auto c = [](double y) { return 1.0 + 0.3 * std::sin(2 * 3.14159265358979323846 * y); };
  const auto dc = [](double y) { return 0.3 * 2 * 3.14159265358979323846 *
                                        std::cos(2 * 3.14159265358979323846 * y); };
  const auto ddc = [](double y) {
    return -0.3 * 4 * 3.14159265358979323846 * 3.14159265358979323846 *
           std::sin(2 * 3.14159265358979323846 * y);
  };
  shifted.v0 = [base, c](double x, double y) { return base.v0(x, y) + c(y); };
  shifted.vy = [base, dc](double x, double y) { return base.vy(x, y) + dc(y); };
  shifted.vyy = [base, ddc](double x, double y) { return base.vyy(x, y) + ddc(y); };
  for (double y : {0.0, 0.2, 0.61}) {
    const auto g0 = find_critical_points(base, y, 0.4);
    const auto g1 = find_critical_points(shifted, y, 0.4);
    CHECK(g1.x_minus == doctest::Approx(g0.x_minus).epsilon(1e-11));
    CHECK(g1.h_minus == doctest::Approx(g0.h_minus).epsilon(1e-11));
    CHECK(g1.h_plus == doctest::Approx(g0.h_plus).epsilon(1e-11));
    CHECK(g1.omega0 == doctest::Approx(g0.omega0).epsilon(1e-12));
    CHECK(g1.delta_bar == doctest::Approx(g0.delta_bar).epsilon(1e-11));
  }
}

TEST_CASE("geometry is 1-periodic in y") {
  const auto m = make_tilted_quartic(1.0, 0.15, 0.4);
  for (double y : {0.05, 0.3, 0.88}) {
    const auto g0 = find_critical_points(m, y);
    const auto g1 = find_critical_points(m, y + 1.0);
    CHECK(g1.x_minus == doctest::Approx(g0.x_minus).epsilon(1e-11));
    CHECK(g1.x_saddle == doctest::Approx(g0.x_saddle).epsilon(1e-10));
    CHECK(g1.x_plus == doctest::Approx(g0.x_plus).epsilon(1e-11));
    CHECK(g1.h_minus == doctest::Approx(g0.h_minus).epsilon(1e-11));
    CHECK(g1.omega_plus == doctest::Approx(g0.omega_plus).epsilon(1e-11));
  }
}

TEST_CASE("analytic derivatives agree with central differences at O(step^2)") {
  const auto m = make_tilted_quartic(1.0, 0.12, 0.3);
  const double h1 = 1e-4, h2 = 2e-4;
  for (double x : {-1.2, -0.3, 0.8}) {
    for (double y : {0.1, 0.52}) {
      const auto err_x = [&](double h) {
        return std::abs((m.v0(x + h, y) - m.v0(x - h, y)) / (2 * h) - m.vx(x, y));
      };
      const auto err_y = [&](double h) {
        return std::abs((m.v0(x, y + h) - m.v0(x, y - h)) / (2 * h) - m.vy(x, y));
      };
      CHECK(err_x(h1) < 1e-6);
      CHECK(err_y(h1) < 1e-6);
      // Quartic error scaling: quadrupling when the step doubles.
      if (err_x(h1) > 1e-12) CHECK(err_x(h2) / err_x(h1) == doctest::Approx(4.0).epsilon(0.2));
    }
  }
}

TEST_CASE("validate_assumptions passes for admissible tilts") {
  const auto m = make_tilted_quartic(1.0, 0.0, 0.0);
  const auto y = uniform_grid(64);
  const auto rep = validate_assumptions(m, y);
  CHECK(rep.pass);

  const auto tilted = make_tilted_quartic(1.0, 0.1, 0.0);
  const auto rep2 = validate_assumptions(tilted, y);
  CHECK(rep2.pass);
  for (const auto& c : rep2.checks) {
    if (c.name == "confinement") CHECK(c.pass);
  }
}

TEST_CASE("validate_assumptions flags monostable slices above the cubic threshold") {
  // x^3 - x - lambda loses two roots when |lambda| > 2/(3 sqrt(3)); the cubic
  // discriminant 4 - 27 lambda^2 is the oracle.
  const double threshold = 2.0 / (3.0 * std::sqrt(3.0));
  CHECK(4.0 - 27.0 * threshold * threshold == doctest::Approx(0.0).epsilon(1e-12));
  const auto bad = make_tilted_quartic(1.0, 1.0, 0.0);
  const auto rep = validate_assumptions(bad, uniform_grid(64));
  CHECK(!rep.pass);
  bool bistability_failed = false;
  for (const auto& c : rep.checks) {
    if (c.name == "bistability") bistability_failed = !c.pass;
  }
  CHECK(bistability_failed);
  CHECK_THROWS_AS(find_critical_points(bad, 0.0), BistabilityLost);
}

TEST_CASE("geometry sweep splines track the slices") {
  const auto m = make_tilted_quartic(1.0, 0.1, 0.0);
  const auto sweep = sweep_geometry(m, 64);
  for (double y : {0.11, 0.43, 0.97}) {
    const auto g = find_critical_points(m, y);
    CHECK(sweep.x_minus(y) == doctest::Approx(g.x_minus).epsilon(1e-7));
    CHECK(sweep.h_minus(y) == doctest::Approx(g.h_minus).epsilon(1e-7));
    CHECK(sweep.x_plus(y) == doctest::Approx(g.x_plus).epsilon(1e-7));
  }
  CHECK(sweep.h_min < sweep.h_max);
  CHECK(sweep.h_min == doctest::Approx(sweep.h_min_minus).epsilon(1e-12));
}

TEST_SUITE_END();
