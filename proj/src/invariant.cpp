#include "oscwell/invariant.hpp"

#include <algorithm>
#include <cmath>

#include "oscwell/errors.hpp"

namespace oscwell {

namespace {

// Periodic solution of eps u' = -lam(y) u + src(y) via the integrating factor
// (anchor by one backward period, then a forward pass). Each cell contributes
// int src(y) e^{-u(y)} dy / eps by Simpson in y, which stays well defined when
// the corrected rate lam dips through zero; only the period average of lam
// must be positive.
std::vector<double> integrating_factor_periodic(double eps, const Fn1& lam, const Fn1& src,
                                                std::size_t cells, std::size_t n_out,
                                                std::vector<double>* y_out) {
  CumulativePeriodic cum(lam, cells);
  const double big_u = cum.total() / eps;
  if (!(big_u > 0.0)) {
    throw SingularSystem("integrating_factor_periodic: average rate not positive");
  }
  const double h = 1.0 / static_cast<double>(cells);
  // Backward anchor at y = 0: integral of (src/eps) e^{-u} with u measured
  // backward from y = 1.
  double integral = 0.0, u0 = 0.0;
  double pos = 1.0;
  while (pos > 0.0 && u0 < 46.0) {
    double lo = (std::ceil(pos / h) - 1.0) * h;
    if (lo >= pos) lo = pos - h;
    if (lo < 0.0) lo = 0.0;
    const double mid = 0.5 * (lo + pos);
    const double du = cum.integral(lo, pos) / eps;
    const double sm = cum.integral(mid, pos) / eps;
    const double width = pos - lo;
    integral += std::exp(-u0) * width / 6.0 *
                (src(pos) + 4.0 * src(mid) * std::exp(-sm) + src(lo) * std::exp(-du)) / eps;
    u0 += du;
    pos = lo;
  }
  double cur = integral / -std::expm1(-big_u);
  // Forward propagation with the same per-cell rule.
  std::vector<double> out(n_out);
  const std::size_t stride = cells / n_out;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (cell % stride == 0) {
      const std::size_t k = cell / stride;
      if (k < n_out) {
        out[k] = cur;
        if (y_out) (*y_out)[k] = static_cast<double>(cell) * h;
      }
    }
    const double ya = static_cast<double>(cell) * h;
    const double yb = ya + h;
    const double mid = ya + 0.5 * h;
    const double du = cum.integral(ya, yb) / eps;
    const double sm = cum.integral(mid, yb) / eps;
    cur = std::exp(-du) * cur +
          h / 6.0 *
              (src(ya) * std::exp(-du) + 4.0 * src(mid) * std::exp(-(du - sm)) + src(yb)) /
              eps;
  }
  return out;
}

}  // namespace

double Delta1Solution::value(double yy) const {
  const std::size_t n = delta1.size();
  double t = yy - std::floor(yy);
  const double u = t * static_cast<double>(n);
  const std::size_t k = std::min(static_cast<std::size_t>(u), n - 1);
  const double s = u - static_cast<double>(k);
  return (1.0 - s) * delta1[k] + s * delta1[(k + 1) % n];
}

namespace {

// Interpolates a per-slice sampled quantity with a periodic spline.
PeriodicSpline slice_spline(const SpectralProfile& p,
                            const std::function<double(std::size_t)>& get) {
  std::vector<double> v(p.slices());
  for (std::size_t k = 0; k < p.slices(); ++k) v[k] = get(k);
  return PeriodicSpline(v);
}

}  // namespace

Delta1Solution solve_delta1_first_order(const SpectralProfile& profile, double epsilon,
                                        const Delta1Options& opts) {
  const double sig2 = profile.sigma * profile.sigma;
  const std::size_t cells = 4096;
  std::size_t n_out = 1;
  while (n_out * 2 <= std::min(opts.n_out, cells)) n_out *= 2;

  // p1(y) = -f11 - DeltaBar' A, w1(y) = DeltaBar' B^2 + B f10, per slice.
  PeriodicSpline p1_s = slice_spline(profile, [&](std::size_t k) {
    if (!opts.use_p1w1) return 0.0;
    const double dbp = profile.delta_bar_prime(profile.y[k]);
    return -profile.elements[k].f[1][1] - dbp * profile.rates[k].a;
  });
  PeriodicSpline w1_s = slice_spline(profile, [&](std::size_t k) {
    if (!opts.use_p1w1) return 0.0;
    const double dbp = profile.delta_bar_prime(profile.y[k]);
    const double b = profile.rates[k].b;
    return dbp * b * b + b * profile.elements[k].f[1][0];
  });

  const auto run = [&](const PeriodicSpline* w1tilde) {
    const Fn1 lam_bar = [&](double y) {
      return profile.lambda1_num(y) - epsilon / sig2 * p1_s(y);
    };
    // The representation needs the corrected rate to be positive on average;
    // pointwise dips below zero are admissible (the correction then dominates
    // locally, which the caller can see on the returned flag).
    double lam_min = 1e300, lam_avg = 0.0;
    for (std::size_t k = 0; k < 512; ++k) {
      const double v = lam_bar(static_cast<double>(k) / 512.0);
      lam_min = std::min(lam_min, v);
      lam_avg += v / 512.0;
    }
    if (lam_avg <= 0.0) {
      throw SingularSystem("solve_delta1_first_order: corrected rate not positive on average");
    }
    const Fn1 src = [&, w1tilde](double y) {
      double s = lam_bar(y) * profile.a_spline(y) + epsilon / sig2 * w1_s(y);
      if (w1tilde) s += epsilon / sig2 * (*w1tilde)(y);
      return s;
    };
    Delta1Solution sol;
    sol.y.resize(n_out);
    sol.delta1 = integrating_factor_periodic(epsilon, lam_bar, src, cells, n_out, &sol.y);
    sol.correction_dominated = lam_min <= 0.0;
    return sol;
  };

  Delta1Solution sol = run(nullptr);
  PeriodicSpline w1t;
  bool have_w1t = false;
  if (opts.use_w1tilde) {
    // One fixed-point pass: quasi-static alpha_m from the current delta1.
    const AlphaPerp ap = solve_alpha_perp(profile, epsilon, sol, false);
    w1t = slice_spline(profile, [&](std::size_t k) {
      double s = 0.0;
      for (std::size_t m = 2; m <= profile.n_max; ++m) {
        s += profile.elements[k].f[1][m] * ap.quasi_static[k][m];
      }
      return profile.rates[k].b * s;
    });
    have_w1t = true;
    Delta1Solution with = run(&w1t);
    with.y = sol.y;
    double shift = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < n_out; ++k) {
      shift = std::max(shift, std::abs(with.delta1[k] - sol.delta1[k]));
      scale = std::max(scale, std::abs(sol.delta1[k]));
    }
    with.w1tilde_shift = shift;
    with.truncation_warning = shift > 0.1 * std::max(scale, 1e-12);
    sol = std::move(with);
  }

  // Residual of the equation actually solved, on the output grid.
  const auto dd = periodic_derivative4(sol.delta1);
  double res = 0.0;
  for (std::size_t k = 0; k < n_out; ++k) {
    const double y = sol.y[k];
    const double lam_bar = profile.lambda1_num(y) - epsilon / sig2 * p1_s(y);
    double rhs = -lam_bar * (sol.delta1[k] - profile.a_spline(y)) + epsilon / sig2 * w1_s(y);
    if (have_w1t) rhs += epsilon / sig2 * w1t(y);
    res = std::max(res, std::abs(epsilon * dd[k] - rhs));
  }
  sol.residual_sup = res;
  return sol;
}

Delta1Solution solve_delta1_second_order(const SpectralProfile& profile, double epsilon,
                                         double rho, std::size_t n_grid) {
  const double sig2 = profile.sigma * profile.sigma;
  const double beta = 0.5 * rho * rho * epsilon * sig2;
  const double h = 1.0 / static_cast<double>(n_grid);
  std::vector<double> sub(n_grid), diag(n_grid), sup(n_grid), rhs(n_grid);
  for (std::size_t k = 0; k < n_grid; ++k) {
    const double y = static_cast<double>(k) * h;
    const double lam = profile.lambda1_num(y);
    sub[k] = beta / (h * h) + epsilon / (2.0 * h);
    sup[k] = beta / (h * h) - epsilon / (2.0 * h);
    diag[k] = -2.0 * beta / (h * h) - lam;
    rhs[k] = -lam * profile.a_spline(y);
  }
  Delta1Solution sol;
  sol.delta1 = cyclic_tridiagonal_solve(sub, diag, sup, rhs);
  sol.y.resize(n_grid);
  for (std::size_t k = 0; k < n_grid; ++k) sol.y[k] = static_cast<double>(k) * h;
  const auto dd = periodic_derivative4(sol.delta1);
  double res = 0.0;
  for (std::size_t k = 0; k < n_grid; ++k) {
    const double y = sol.y[k];
    res = std::max(res, std::abs(epsilon * dd[k] + profile.lambda1_num(y) *
                                                       (sol.delta1[k] - profile.a_spline(y))));
  }
  sol.residual_sup = res;  // residual against the first-order equation, O(rho^2 eps sig^2)
  return sol;
}

AlphaPerp solve_alpha_perp(const SpectralProfile& profile, double epsilon,
                           const Delta1Solution& delta1, bool refine) {
  const double sig2 = profile.sigma * profile.sigma;
  const std::size_t big_k = profile.slices();
  const std::size_t n_max = profile.n_max;
  AlphaPerp out;
  out.y = profile.y;
  out.quasi_static.assign(big_k, std::vector<double>(n_max + 1, 0.0));
  for (std::size_t k = 0; k < big_k; ++k) {
    const double y = profile.y[k];
    const double alpha1 = (profile.rates[k].a - delta1.value(y)) / profile.rates[k].b;
    for (std::size_t n = 2; n <= n_max; ++n) {
      const double lam_n = profile.lambda[k][n];
      const double val = -(epsilon / sig2) / lam_n *
                         (profile.elements[k].f[n][0] + alpha1 * profile.elements[k].f[n][1]);
      out.quasi_static[k][n] = val;
      out.sup_lambda_alpha = std::max(out.sup_lambda_alpha, std::abs(lam_n * val));
    }
  }
  if (!refine) return out;

  // Picard iteration on the coupled system; each mode solved by the periodic
  // implicit trapezoid rule on a finer grid, then sampled back to the slices.
  const std::size_t fine = 512;
  std::vector<PeriodicSpline> lam_spl(n_max + 1), fn0(n_max + 1), fn1(n_max + 1);
  std::vector<std::vector<PeriodicSpline>> fnm(n_max + 1);
  for (std::size_t n = 2; n <= n_max; ++n) {
    lam_spl[n] = slice_spline(profile, [&](std::size_t k) { return profile.lambda[k][n]; });
    fn0[n] = slice_spline(profile, [&](std::size_t k) { return profile.elements[k].f[n][0]; });
    fn1[n] = slice_spline(profile, [&](std::size_t k) { return profile.elements[k].f[n][1]; });
    fnm[n].resize(n_max + 1);
    for (std::size_t m = 2; m <= n_max; ++m) {
      fnm[n][m] =
          slice_spline(profile, [&](std::size_t k) { return profile.elements[k].f[n][m]; });
    }
  }
  std::vector<std::vector<double>> cur(n_max + 1, std::vector<double>(fine, 0.0));
  for (std::size_t n = 2; n <= n_max; ++n) {
    for (std::size_t j = 0; j < fine; ++j) {
      const double y = static_cast<double>(j) / fine;
      const double alpha1 = (profile.a_spline(y) - delta1.value(y)) / profile.b_spline(y);
      cur[n][j] = -(epsilon / sig2) / lam_spl[n](y) * (fn0[n](y) + alpha1 * fn1[n](y));
    }
  }
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t n = 2; n <= n_max; ++n) {
      std::vector<double> lam(fine), src(fine);
      for (std::size_t j = 0; j < fine; ++j) {
        const double y = static_cast<double>(j) / fine;
        const double alpha1 = (profile.a_spline(y) - delta1.value(y)) / profile.b_spline(y);
        double coupling = 0.0;
        for (std::size_t m = 2; m <= n_max; ++m) coupling += fnm[n][m](y) * cur[m][j];
        lam[j] = lam_spl[n](y);
        src[j] = -(epsilon / sig2) * (fn0[n](y) + alpha1 * fn1[n](y) + coupling);
      }
      cur[n] = periodic_linear_ode(epsilon, lam, src);
    }
  }
  out.refined.assign(big_k, std::vector<double>(n_max + 1, 0.0));
  out.refined_available = true;
  const std::size_t stride = fine / big_k;
  for (std::size_t k = 0; k < big_k; ++k) {
    for (std::size_t n = 2; n <= n_max; ++n) {
      out.refined[k][n] = cur[n][k * stride];
      out.refinement_gap =
          std::max(out.refinement_gap, std::abs(out.refined[k][n] - out.quasi_static[k][n]));
    }
  }
  return out;
}

double InvariantExpansion::raw_at_slice(std::size_t k, double x) const {
  const SpectralProfile& p = *profile;
  const double sig2 = p.sigma * p.sigma;
  const double v = p.model->v0(x, p.y[k]);
  const double pi0 = std::exp(-2.0 * v / sig2) / p.rates[k].z0;
  return pi0 * phi_ratio_at_slice(k, x);
}

double InvariantExpansion::phi_ratio_at_slice(std::size_t k, double x) const {
  const SpectralProfile& p = *profile;
  const double sig2 = p.sigma * p.sigma;
  const double v = p.model->v0(x, p.y[k]);
  const double z0 = p.rates[k].z0;
  // phi_n = sqrt(Z0) e^{V/sigma^2} psi_n
  const double w = std::sqrt(z0) * std::exp(v / sig2);
  double phi_sum = 1.0 + alpha1_slice[k] * w * p.psi_at(k, 1, x);
  for (std::size_t n = 2; n <= p.n_max; ++n) {
    phi_sum += alpha_perp[k][n] * w * p.psi_at(k, n, x);
  }
  return phi_sum;
}

double InvariantExpansion::pi(double x, double y) const {
  const SpectralProfile& p = *profile;
  const std::size_t big_k = p.slices();
  double t = y - std::floor(y);
  const double u = t * static_cast<double>(big_k);
  const std::size_t k = std::min(static_cast<std::size_t>(u), big_k - 1);
  const std::size_t k1 = (k + 1) % big_k;
  const double s = u - static_cast<double>(k);
  const auto value = [&](std::size_t kk) {
    const double sig2 = p.sigma * p.sigma;
    const double v = p.model->v0(x, p.y[kk]);
    const double pi0 = std::exp(-2.0 * v / sig2) / p.rates[kk].z0;
    return pi0 * phi_ratio_at_slice(kk, x);
  };
  return ((1.0 - s) * value(k) + s * value(k1)) / normalization;
}

InvariantExpansion assemble_expansion(const SpectralProfile& profile, double epsilon,
                                      double rho, const AssembleOptions& opts) {
  InvariantExpansion e;
  e.profile = &profile;
  e.epsilon = epsilon;
  e.rho = rho;
  e.delta1 = opts.second_order
                 ? solve_delta1_second_order(profile, epsilon, rho)
                 : solve_delta1_first_order(profile, epsilon, opts.delta1);
  e.truncation_warning = e.delta1.truncation_warning;
  const AlphaPerp ap = solve_alpha_perp(profile, epsilon, e.delta1, opts.refine_alpha);
  e.alpha_perp = opts.refine_alpha && ap.refined_available ? ap.refined : ap.quasi_static;
  e.alpha1_slice.resize(profile.slices());
  for (std::size_t k = 0; k < profile.slices(); ++k) {
    e.alpha1_slice[k] =
        (profile.rates[k].a - e.delta1.value(profile.y[k])) / profile.rates[k].b;
  }
  // Normalisation and positivity over the tensor grid.
  const std::size_t big_k = profile.slices();
  double total = 0.0;
  double min_val = 1e300;
  for (std::size_t k = 0; k < big_k; ++k) {
    const double sig2 = profile.sigma * profile.sigma;
    double slice_mass = 0.0;
    for (std::size_t i = 0; i < profile.x.size(); ++i) {
      const double x = profile.x[i];
      const double v = profile.model->v0(x, profile.y[k]);
      const double pi0 = std::exp(-2.0 * v / sig2) / profile.rates[k].z0;
      const double val = pi0 * e.phi_ratio_at_slice(k, x);
      min_val = std::min(min_val, val);
      const double w = (i == 0 || i + 1 == profile.x.size()) ? 0.5 : 1.0;
      slice_mass += w * val;
    }
    total += slice_mass * profile.x_step;
  }
  e.normalization = total / static_cast<double>(big_k);
  e.negative_density = min_val < -1e-12;
  return e;
}

double assemble_pi(const InvariantExpansion& expansion, double x, double y) {
  return expansion.pi(x, y);
}

}  // namespace oscwell
