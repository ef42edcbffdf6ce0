#include "oscwell/predict.hpp"

#include <algorithm>
#include <cmath>

#include "oscwell/errors.hpp"

namespace oscwell {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kSlack = 2.0;

double minmax_lambda1(const RateProfile& p, bool want_max) {
  double best = want_max ? -1e300 : 1e300;
  for (int k = 0; k < 1024; ++k) {
    const double v = p.lambda1(static_cast<double>(k) / 1024.0);
    best = want_max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}
}  // namespace

double ek_static(const WellGeometry& g, double sigma) {
  return 2.0 * kPi / (g.omega0 * g.omega_minus) *
         std::exp(2.0 * g.h_minus / (sigma * sigma));
}

RegimeInfo classify_regime(const RateProfile& profile, double epsilon, double sigma) {
  RegimeInfo info;
  info.sigma2 = sigma * sigma;
  info.slack = kSlack;
  info.min_lambda1 = minmax_lambda1(profile, false);
  info.max_lambda1 = minmax_lambda1(profile, true);
  info.avg_lambda1 = profile.avg_lambda1();
  info.avg_lambda1_quarter = std::pow(info.avg_lambda1, 0.25);
  if (auto geo = profile.geometry()) {
    info.thr_exp_hmax = std::exp(-2.0 * geo->h_max / info.sigma2);
    info.thr_exp_hmin = std::exp(-2.0 * geo->h_min / info.sigma2);
  } else {
    info.thr_exp_hmax = std::numeric_limits<double>::quiet_NaN();
    info.thr_exp_hmin = std::numeric_limits<double>::quiet_NaN();
  }
  if (epsilon * kSlack < info.min_lambda1) {
    info.label = "super-adiabatic";
  } else if (epsilon > kSlack * info.max_lambda1) {
    info.label = epsilon < info.sigma2 ? "fast-forcing-strong" : "fast-forcing-weak";
  } else {
    info.label = "intermediate";
    info.low_confidence = true;
  }
  return info;
}

Prediction ek_fast_forcing(const RateProfile& profile) {
  Prediction pred;
  pred.law = "fast-forcing";
  const double eps = profile.epsilon();
  const double avg_rm = profile.avg_r_minus();
  pred.value = eps / avg_rm;
  const double sigma = profile.sigma();
  if (std::isfinite(sigma)) {
    const RegimeInfo info = classify_regime(profile, eps, sigma);
    pred.regime = info.label;
    pred.low_confidence = info.low_confidence;
    const double avg_l1 = profile.avg_lambda1();
    pred.valid = (eps > kSlack * avg_l1) && (eps < std::pow(avg_l1, 0.25) / kSlack);
    // R1 envelope with unit constants; H, H- from the geometry sweep.
    double big_h = 0.0, big_h_minus = 0.0;
    if (auto geo = profile.geometry()) {
      big_h = std::abs(geo->h_min_minus - geo->h_min_plus);
      big_h_minus = std::max(geo->h_min_minus - geo->h_min_plus, 0.0);
    }
    const double sig2 = sigma * sigma;
    const double ell = std::log(1.0 / sigma);
    pred.error_envelope =
        sig2 +
        (eps * ell * ell * ell / sig2 +
         eps * eps * ell / (std::pow(sigma, 3.5) * std::sqrt(avg_l1)) +
         avg_l1 * avg_l1 / eps) *
            std::exp(2.0 * big_h / sig2) +
        avg_l1 / eps * (1.0 + std::exp(2.0 * big_h_minus / sig2));
  } else {
    pred.regime = "unknown";
    pred.valid = false;
    pred.error_envelope = std::numeric_limits<double>::quiet_NaN();
  }
  return pred;
}

Prediction ek_laplace_peak(const RateProfile& profile, double sigma) {
  auto geo = profile.geometry();
  if (!geo) throw NoInteriorPeak("ek_laplace_peak: profile carries no geometry");
  double h_lo = 1e300, h_hi = -1e300;
  for (int k = 0; k < 512; ++k) {
    const double h = geo->h_minus(static_cast<double>(k) / 512.0);
    h_lo = std::min(h_lo, h);
    h_hi = std::max(h_hi, h);
  }
  if (h_hi - h_lo < 1e-10) {
    throw NoInteriorPeak("ek_laplace_peak: h_-(y) has no isolated extremum");
  }
  // Coarse scan for the minimising cell, then golden section + Newton on h'.
  double y_best = 0.0, best = 1e300;
  for (int k = 0; k < 512; ++k) {
    const double y = static_cast<double>(k) / 512.0;
    const double h = geo->h_minus(y);
    if (h < best) {
      best = h;
      y_best = y;
    }
  }
  double y_star = golden_section_min([&](double y) { return geo->h_minus(y); },
                                     y_best - 0.05, y_best + 0.05, 1e-10);
  for (int it = 0; it < 4; ++it) {
    const double fd = 1e-4;
    const double d1 = (geo->h_minus(y_star + fd) - geo->h_minus(y_star - fd)) / (2.0 * fd);
    const double d2 = (geo->h_minus(y_star + fd) - 2.0 * geo->h_minus(y_star) +
                       geo->h_minus(y_star - fd)) /
                      (fd * fd);
    if (d2 <= 0.0) break;
    y_star -= d1 / d2;
  }
  y_star -= std::floor(y_star);
  const double fd = 1e-3;
  const double curv = (geo->h_minus(y_star + fd) - 2.0 * geo->h_minus(y_star) +
                       geo->h_minus(y_star - fd)) /
                      (fd * fd);
  if (curv <= 0.0) {
    throw NoInteriorPeak("ek_laplace_peak: extremum of h_- is degenerate");
  }
  Prediction pred;
  pred.law = "laplace-peak";
  const double sig2 = sigma * sigma;
  const double frozen = 2.0 * kPi / (geo->omega0(y_star) * geo->omega_minus(y_star)) *
                        std::exp(2.0 * geo->h_minus(y_star) / sig2);
  pred.extra_factor = std::sqrt(curv) / (sigma * std::sqrt(kPi));
  pred.value = profile.epsilon() * frozen * pred.extra_factor;
  pred.valid = true;
  return pred;
}

Prediction general_equilibrium_time(const RateProfile& profile,
                                    const std::function<double(double)>& delta1) {
  Prediction pred;
  pred.law = "general-equilibrium";
  const double eps = profile.epsilon();
  const std::size_t n = 512;
  double avg_d = 0.0, avg_l1d = 0.0;
  std::vector<double> lam(n), a(n), d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double y = static_cast<double>(k) / n;
    lam[k] = profile.lambda1(y);
    a[k] = profile.a(y);
    d[k] = delta1(y);
    avg_d += d[k] / n;
    avg_l1d += lam[k] * (1.0 - a[k] * d[k]) / n;
  }
  pred.value = 2.0 * eps * (1.0 - avg_d) / avg_l1d;
  pred.nu_y.resize(n);
  pred.nu_density.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    pred.nu_y[k] = static_cast<double>(k) / n;
    pred.nu_density[k] = lam[k] * (1.0 + a[k]) * (1.0 - d[k]) / avg_l1d;
  }
  const double sigma = profile.sigma();
  if (std::isfinite(sigma)) {
    const RegimeInfo info = classify_regime(profile, eps, sigma);
    pred.regime = info.label;
    pred.low_confidence = info.low_confidence;
    pred.valid = true;
  }
  return pred;
}

}  // namespace oscwell
