#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oscwell/numerics.hpp"

namespace oscwell {

using Fn2 = std::function<double(double, double)>;

/// A forced double-well potential with analytic partial derivatives.
/// 1-periodic in y; immutable after construction and safe to share.
struct PotentialModel {
  Fn2 v0;    // V0(x, y)
  Fn2 vx;    // d/dx V0
  Fn2 vxx;   // d2/dx2 V0
  Fn2 vy;    // d/dy V0
  Fn2 vxy;   // d2/dxdy V0
  Fn2 vyy;   // d2/dy2 V0
  double confinement_m = 0.0;  // x b(x,y) <= -M x^2 for |x| >= L
  double confinement_l = 0.0;

  // Serialization hooks for the canonical family; empty otherwise.
  std::string family;
  double base_depth = 0.0;
  double tilt_amplitude = 0.0;
  double tilt_phase = 0.0;

  double drift(double x, double y) const { return -vx(x, y); }
  double drift_dx(double x, double y) const { return -vxx(x, y); }
};

/// V0(x,y) = x^4/4 - base_depth x^2/2 - tilt_amplitude cos(2 pi (y - tilt_phase)) x.
PotentialModel make_tilted_quartic(double base_depth, double tilt_amplitude,
                                   double tilt_phase);

/// Per-slice critical points, depths and curvatures.
struct WellGeometry {
  double y = 0.0;
  double x_minus = 0.0, x_saddle = 0.0, x_plus = 0.0;
  double h_minus = 0.0, h_plus = 0.0;
  double delta = 0.0;  // h_plus - h_minus
  double omega_minus = 0.0, omega_plus = 0.0, omega0 = 0.0;
  double delta_bar = 0.0;  // curvature-corrected; NaN when sigma not supplied
};

/// Locates the three zeros of b(., y) by a sign-change scan over
/// [-L-1, L+1] (512 points) with bisection and Newton polish.
/// When sigma is finite, delta_bar = Delta + (sigma^2/2) log(omega_-/omega_+).
WellGeometry find_critical_points(const PotentialModel& model, double y,
                                  double sigma = std::numeric_limits<double>::quiet_NaN());

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass = false;
};

/// Checks bistability, nondegeneracy, confinement, periodicity and the
/// consistency b = -dV0/dx on the given y grid. Failures are reported,
/// never thrown.
ValidationReport validate_assumptions(const PotentialModel& model,
                                      std::span<const double> y_grid);

/// Geometry sampled over one period with periodic-spline accessors.
struct GeometrySweep {
  std::vector<double> y;
  std::vector<WellGeometry> slices;
  PeriodicSpline x_minus, x_saddle, x_plus, h_minus, h_plus;
  PeriodicSpline omega_minus, omega_plus, omega0;
  double h_min_minus = 0.0, h_min_plus = 0.0;  // min over y of h-, h+
  double h_max_minus = 0.0, h_max_plus = 0.0;
  double h_min = 0.0, h_max = 0.0;
};

GeometrySweep sweep_geometry(const PotentialModel& model, std::size_t y_points = 128);

}  // namespace oscwell
