#include "oscwell/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscwell/errors.hpp"

namespace oscwell {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PotentialModel make_tilted_quartic(double base_depth, double tilt_amplitude,
                                   double tilt_phase) {
  PotentialModel m;
  const double d = base_depth, a = tilt_amplitude, p = tilt_phase;
  m.v0 = [d, a, p](double x, double y) {
    return 0.25 * x * x * x * x - 0.5 * d * x * x - a * std::cos(kTwoPi * (y - p)) * x;
  };
  m.vx = [d, a, p](double x, double y) {
    return x * x * x - d * x - a * std::cos(kTwoPi * (y - p));
  };
  m.vxx = [d](double x, double) { return 3.0 * x * x - d; };
  m.vy = [a, p](double x, double y) {
    return kTwoPi * a * std::sin(kTwoPi * (y - p)) * x;
  };
  m.vxy = [a, p](double, double y) { return kTwoPi * a * std::sin(kTwoPi * (y - p)); };
  m.vyy = [a, p](double x, double y) {
    return kTwoPi * kTwoPi * a * std::cos(kTwoPi * (y - p)) * x;
  };
  m.confinement_m = 0.5;
  m.confinement_l = 2.0;
  m.family = "tilted_quartic";
  m.base_depth = base_depth;
  m.tilt_amplitude = tilt_amplitude;
  m.tilt_phase = tilt_phase;
  return m;
}

WellGeometry find_critical_points(const PotentialModel& model, double y, double sigma) {
  const double l = model.confinement_l > 0.0 ? model.confinement_l : 2.0;
  const double lo = -l - 1.0, hi = l + 1.0;
  constexpr int kScan = 512;
  const auto b = [&](double x) { return model.drift(x, y); };
  const auto db = [&](double x) { return model.drift_dx(x, y); };

  std::vector<double> roots;
  double xp = lo, fp = b(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const double f = b(x);
    if (f == 0.0) {
      roots.push_back(x);
    } else if (fp != 0.0 && (fp > 0.0) != (f > 0.0)) {
      roots.push_back(root_bisect_newton(b, db, xp, x, 1e-13));
    }
    xp = x;
    fp = f;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a2, double b2) { return b2 - a2 < 1e-7 * (hi - lo); }),
              roots.end());
  if (roots.size() != 3) {
    throw BistabilityLost("find_critical_points: drift has " + std::to_string(roots.size()) +
                          " zeros at y=" + std::to_string(y));
  }
  std::sort(roots.begin(), roots.end());

  WellGeometry g;
  g.y = y;
  g.x_minus = roots[0];
  g.x_saddle = roots[1];
  g.x_plus = roots[2];
  const double vs = model.v0(g.x_saddle, y);
  g.h_minus = vs - model.v0(g.x_minus, y);
  g.h_plus = vs - model.v0(g.x_plus, y);
  g.delta = g.h_plus - g.h_minus;
  g.omega_minus = std::sqrt(model.vxx(g.x_minus, y));
  g.omega_plus = std::sqrt(model.vxx(g.x_plus, y));
  g.omega0 = std::sqrt(std::abs(model.vxx(g.x_saddle, y)));
  if (std::isfinite(sigma)) {
    g.delta_bar = g.delta + 0.5 * sigma * sigma * std::log(g.omega_minus / g.omega_plus);
  } else {
    g.delta_bar = std::numeric_limits<double>::quiet_NaN();
  }
  return g;
}

ValidationReport validate_assumptions(const PotentialModel& model,
                                      std::span<const double> y_grid) {
  ValidationReport rep;
  const double l = model.confinement_l > 0.0 ? model.confinement_l : 2.0;
  const double m_const = model.confinement_m;

  // Bistability and nondegeneracy per slice.
  bool bistable = true;
  double min_dxb = std::numeric_limits<double>::infinity();
  double min_depth = std::numeric_limits<double>::infinity();
  std::string bad_y;
  for (double y : y_grid) {
    try {
      const WellGeometry g = find_critical_points(model, y);
      min_depth = std::min({min_depth, g.h_minus, g.h_plus});
      for (double x : {g.x_minus, g.x_saddle, g.x_plus}) {
        min_dxb = std::min(min_dxb, std::abs(model.drift_dx(x, y)));
      }
    } catch (const BistabilityLost&) {
      bistable = false;
      if (bad_y.empty()) bad_y = "first failure at y=" + std::to_string(y);
    }
  }
  rep.checks.push_back({"bistability", bistable, min_depth, bad_y});
  rep.checks.push_back({"nondegeneracy", bistable && min_dxb > 1e-8, min_dxb,
                        "min |d_x b| over critical points"});

  // Confinement x b <= -M x^2 for |x| >= L, scanned over a grid.
  double worst = -std::numeric_limits<double>::infinity();
  for (double y : y_grid) {
    for (int i = 0; i <= 64; ++i) {
      const double x = l + i * (8.0 * l) / 64.0;
      for (double s : {x, -x}) {
        worst = std::max(worst, s * model.drift(s, y) + m_const * s * s);
      }
    }
  }
  rep.checks.push_back({"confinement", worst <= 0.0, worst,
                        "max of x b + M x^2 on |x| in [L, 9L]"});

  // Periodicity and drift consistency spot checks.
  double per_err = 0.0, drift_err = 0.0;
  for (double y : y_grid) {
    for (double x : {-1.3, -0.4, 0.2, 0.9, 1.7}) {
      per_err = std::max(per_err, std::abs(model.v0(x, y + 1.0) - model.v0(x, y)));
      const double h = 1e-5;
      const double fd = (model.v0(x + h, y) - model.v0(x - h, y)) / (2.0 * h);
      drift_err = std::max(drift_err, std::abs(model.drift(x, y) + fd));
    }
  }
  rep.checks.push_back({"periodicity", per_err < 1e-10, per_err, "sup |V0(x,y+1)-V0(x,y)|"});
  rep.checks.push_back({"drift_gradient", drift_err < 1e-6, drift_err,
                        "sup |b + dV0/dx| (central differences)"});

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

GeometrySweep sweep_geometry(const PotentialModel& model, std::size_t y_points) {
  GeometrySweep s;
  s.y.resize(y_points);
  s.slices.resize(y_points);
  std::vector<double> xm(y_points), x0(y_points), xp(y_points), hm(y_points), hp(y_points);
  std::vector<double> om(y_points), op(y_points), o0(y_points);
  for (std::size_t k = 0; k < y_points; ++k) {
    const double y = static_cast<double>(k) / static_cast<double>(y_points);
    s.y[k] = y;
    s.slices[k] = find_critical_points(model, y);
    xm[k] = s.slices[k].x_minus;
    x0[k] = s.slices[k].x_saddle;
    xp[k] = s.slices[k].x_plus;
    hm[k] = s.slices[k].h_minus;
    hp[k] = s.slices[k].h_plus;
    om[k] = s.slices[k].omega_minus;
    op[k] = s.slices[k].omega_plus;
    o0[k] = s.slices[k].omega0;
  }
  s.x_minus = PeriodicSpline(xm);
  s.x_saddle = PeriodicSpline(x0);
  s.x_plus = PeriodicSpline(xp);
  s.h_minus = PeriodicSpline(hm);
  s.h_plus = PeriodicSpline(hp);
  s.omega_minus = PeriodicSpline(om);
  s.omega_plus = PeriodicSpline(op);
  s.omega0 = PeriodicSpline(o0);
  s.h_min_minus = *std::min_element(hm.begin(), hm.end());
  s.h_min_plus = *std::min_element(hp.begin(), hp.end());
  s.h_max_minus = *std::max_element(hm.begin(), hm.end());
  s.h_max_plus = *std::max_element(hp.begin(), hp.end());
  s.h_min = std::min(s.h_min_minus, s.h_min_plus);
  s.h_max = std::max(s.h_max_minus, s.h_max_plus);
  return s;
}

}  // namespace oscwell
