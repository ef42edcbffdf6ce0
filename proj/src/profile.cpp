#include "oscwell/profile.hpp"

#include <algorithm>
#include <cmath>

#include "oscwell/errors.hpp"

namespace oscwell {

double SpectralProfile::avg_lambda1_num() const {
  double s = 0.0;
  for (const auto& r : rates) s += r.lambda1_numeric;
  return s / static_cast<double>(rates.size());
}

double SpectralProfile::psi_at(std::size_t k, std::size_t n, double xq) const {
  const auto& v = psi[k][n];
  if (xq <= x_lo) return v.front();
  if (xq >= x_hi) return v.back();
  const double u = (xq - x_lo) / x_step;
  const std::size_t i = std::min(static_cast<std::size_t>(u), v.size() - 2);
  const double t = u - static_cast<double>(i);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

RateProfile SpectralProfile::rate_profile(double epsilon, bool numeric_lambda1) const {
  RateProfile p = RateProfile::from_sweep(rates, epsilon, numeric_lambda1, sigma);
  p.set_geometry(std::make_shared<GeometrySweep>(geometry));
  return p;
}

SpectralProfile build_spectral_profile(std::shared_ptr<const PotentialModel> model,
                                       double sigma, std::size_t y_points,
                                       std::size_t n_max, std::size_t eigen_nodes,
                                       double dy_fd) {
  SpectralProfile p;
  p.model = model;
  p.sigma = sigma;
  p.n_max = n_max;
  const auto domain = truncated_domain(*model, sigma);
  p.x_lo = domain.first;
  p.x_hi = domain.second;
  p.geometry = sweep_geometry(*model);

  p.y.resize(y_points);
  p.rates.resize(y_points);
  p.lambda.resize(y_points);
  p.psi.resize(y_points);
  p.elements.resize(y_points);
  std::vector<double> a_vals(y_points), b_vals(y_points), db_vals(y_points),
      log_l1(y_points);

  SpectralData prev;
  for (std::size_t k = 0; k < y_points; ++k) {
    const double y = static_cast<double>(k) / static_cast<double>(y_points);
    p.y[k] = y;
    const FrozenSlice slice = make_frozen_slice(model, y, sigma, 512, domain);
    SpectralData center = eigen_solve(slice, n_max, eigen_nodes);
    if (k > 0) {
      align_eigen_signs(prev, center);
    } else {
      p.x = center.x;
      p.x_step = center.step;
    }
    SpectralData minus =
        eigen_solve(make_frozen_slice(model, y - dy_fd, sigma, 64, domain), n_max, eigen_nodes);
    SpectralData plus =
        eigen_solve(make_frozen_slice(model, y + dy_fd, sigma, 64, domain), n_max, eigen_nodes);
    p.elements[k] = matrix_elements_from(center, minus, plus, dy_fd);

    RateSlice r = kramers_rates(slice.geom, sigma);
    SliceSummary row;
    row.y = y;
    row.z0 = center.z0;
    row.n_committor = std::exp(committor_table(slice).log_n);
    row.r_minus = r.r_minus;
    row.r_plus = r.r_plus;
    row.lambda1_kramers = r.lambda1_kramers;
    row.lambda1_numeric = center.lambda[1];
    row.a = r.a;
    row.b = r.b;
    row.delta_bar = r.delta_bar;
    p.rates[k] = row;
    a_vals[k] = r.a;
    b_vals[k] = r.b;
    db_vals[k] = r.delta_bar;
    log_l1[k] = std::log(center.lambda[1]);

    p.lambda[k] = center.lambda;
    p.psi[k] = center.psi;
    prev = std::move(center);
  }
  // Periodic closure of the sign chain: slice 0 seen from slice K-1 must not
  // come back flipped.
  for (std::size_t m = 0; m <= n_max; ++m) {
    double dot = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) dot += prev.psi[m][i] * p.psi[0][m][i];
    dot *= p.x_step;
    if (dot < 0.5) {
      throw SignAmbiguity("spectral profile: periodic sign closure failed for mode " +
                          std::to_string(m) + " (overlap " + std::to_string(dot) + ")");
    }
  }
  p.a_spline = PeriodicSpline(a_vals);
  p.b_spline = PeriodicSpline(b_vals);
  p.delta_bar_spline = PeriodicSpline(db_vals);
  p.log_lambda1_num = PeriodicSpline(log_l1);
  return p;
}

}  // namespace oscwell
