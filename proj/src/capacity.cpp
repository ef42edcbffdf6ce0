#include "oscwell/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "oscwell/errors.hpp"

namespace oscwell {

TransitionSets make_transition_sets(const GeometrySweep& geometry, double rho_hat) {
  TransitionSets s;
  s.rho_hat = rho_hat;
  const std::size_t n = geometry.y.size();
  std::vector<double> a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = geometry.slices[k].x_minus + rho_hat;
    b[k] = geometry.slices[k].x_plus - rho_hat;
    if (!(a[k] < geometry.slices[k].x_saddle && geometry.slices[k].x_saddle < b[k])) {
      throw Error("make_transition_sets: rho_hat too large, sets overlap the saddle");
    }
  }
  s.a_of_y = PeriodicSpline(a);
  s.b_of_y = PeriodicSpline(b);
  return s;
}

double reference_C0(const RateProfile& profile, const std::function<double(double)>& delta1) {
  const auto f = [&](double y) {
    return profile.lambda1(y) * (1.0 - profile.a(y) * delta1(y));
  };
  return adaptive_simpson(f, 0.0, 1.0, 1e-10, 0.0, 40, 16) / (4.0 * profile.epsilon());
}

namespace {

// Quadrature nodes on [a, b] clustered near the saddle.
std::vector<double> saddle_nodes(double a, double b, double x0, double sigma, std::size_t n) {
  const auto density = [&](double x) {
    return 1.0 / (sigma + std::abs(x - x0)) + 0.3 / (b - a);
  };
  constexpr std::size_t kPre = 2048;
  const double h = (b - a) / kPre;
  std::vector<double> cum(kPre + 1, 0.0);
  double prev = density(a);
  for (std::size_t i = 1; i <= kPre; ++i) {
    const double cur = density(a + i * h);
    cum[i] = cum[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  std::vector<double> nodes(n);
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = cum[kPre] * static_cast<double>(k) / static_cast<double>(n - 1);
    while (j + 1 < kPre && cum[j + 1] < q) ++j;
    const double frac = (q - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
    nodes[k] = a + (static_cast<double>(j) + frac) * h;
  }
  nodes.front() = a;
  nodes.back() = b;
  return nodes;
}

double trapz(const std::vector<double>& x, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    s += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
  }
  return s;
}

// Per-slice capacity ingredients on a saddle-graded node set.
struct SliceCap {
  double y = 0.0;
  double a = 0.0, b = 0.0;
  double v_saddle = 0.0;
  double log_z0 = 0.0;
  double lambda1 = 0.0;  // numerical
  double big_b = 0.0;    // B(y)
  std::vector<double> x;
  std::vector<double> w;         // exp(2 (V - Vsad)/sigma^2)
  std::vector<double> phi;       // normalised Phi = pi / pi0
  std::vector<double> h0;        // tilde committor
  std::vector<double> h0_star;   // adjoint tilde committor
  double c_a = 0.0;              // int_a^b w
  double s1 = 0.0;               // int_a^b w Phi
  double phi_at_a = 0.0;

  double interp(const std::vector<double>& f, double xq) const {
    if (xq <= x.front()) return f.front();
    if (xq >= x.back()) return f.back();
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double t = (xq - x[i]) / (x[i + 1] - x[i]);
    return f[i] + t * (f[i + 1] - f[i]);
  }
  double h0_at(double xq) const {
    if (xq <= a) return 1.0;
    if (xq >= b) return 0.0;
    return interp(h0, xq);
  }
  double h0_star_at(double xq) const {
    if (xq <= a) return 1.0;
    if (xq >= b) return 0.0;
    return interp(h0_star, xq);
  }
};

SliceCap build_slice_cap(const TransitionSets& sets, const SpectralProfile& p,
                         const InvariantExpansion& e, std::size_t k, std::size_t n_nodes) {
  SliceCap s;
  s.y = p.y[k];
  s.a = sets.a_of_y(s.y);
  s.b = sets.b_of_y(s.y);
  const double x0 = p.geometry.x_saddle(s.y);
  s.v_saddle = p.model->v0(x0, s.y);
  s.log_z0 = std::log(p.rates[k].z0);
  s.lambda1 = p.rates[k].lambda1_numeric;
  s.big_b = p.rates[k].b;
  s.x = saddle_nodes(s.a, s.b, x0, p.sigma, n_nodes);
  const double sig2 = p.sigma * p.sigma;
  const std::size_t n = s.x.size();
  s.w.resize(n);
  s.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.w[i] = std::exp(2.0 * (p.model->v0(s.x[i], s.y) - s.v_saddle) / sig2);
    s.phi[i] = e.phi_ratio_at_slice(k, s.x[i]) / e.normalization;
    if (!(s.phi[i] > 0.0)) {
      throw NegativeDensity("capacity: Phi not positive inside the transition region");
    }
  }
  s.phi_at_a = e.phi_ratio_at_slice(k, s.a) / e.normalization;
  // Backward cumulatives of w and w/Phi^2 give the tilde committors.
  std::vector<double> cum(n, 0.0), cum_star(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    const double dx = s.x[i + 1] - s.x[i];
    cum[i] = cum[i + 1] + 0.5 * dx * (s.w[i] + s.w[i + 1]);
    cum_star[i] = cum_star[i + 1] +
                  0.5 * dx * (s.w[i] / (s.phi[i] * s.phi[i]) +
                              s.w[i + 1] / (s.phi[i + 1] * s.phi[i + 1]));
  }
  s.c_a = cum[0];
  s.h0.resize(n);
  s.h0_star.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.h0[i] = cum[i] / cum[0];
    s.h0_star[i] = cum_star[i] / cum_star[0];
  }
  std::vector<double> w_phi(n);
  for (std::size_t i = 0; i < n; ++i) w_phi[i] = s.w[i] * s.phi[i];
  s.s1 = trapz(s.x, w_phi);
  return s;
}

std::vector<SliceCap> build_all_slices(const TransitionSets& sets, const SpectralProfile& p,
                                       const InvariantExpansion& e,
                                       std::size_t n_nodes = 1024) {
  std::vector<SliceCap> out;
  out.reserve(p.slices());
  for (std::size_t k = 0; k < p.slices(); ++k) {
    out.push_back(build_slice_cap(sets, p, e, k, n_nodes));
  }
  return out;
}

}  // namespace

TildeCommittors tilde_committors(const TransitionSets& sets, const FrozenSlice& slice,
                                 const InvariantExpansion& expansion) {
  const SpectralProfile& p = *expansion.profile;
  // Locate the nearest profile slice for the expansion coefficients.
  const double t = slice.y - std::floor(slice.y);
  const std::size_t k =
      std::min(static_cast<std::size_t>(t * static_cast<double>(p.slices()) + 0.5),
               p.slices() - 1) % p.slices();
  const SliceCap s = build_slice_cap(sets, p, expansion, k, 1024);
  TildeCommittors out;
  out.x = s.x;
  out.h0 = s.h0;
  out.h0_star = s.h0_star;
  const double sig2 = p.sigma * p.sigma;
  out.log_n = std::log(s.c_a) + 2.0 * s.v_saddle / sig2;
  double c_star = 0.0;
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
    c_star += 0.5 * (s.x[i + 1] - s.x[i]) *
              (s.w[i] / (s.phi[i] * s.phi[i]) + s.w[i + 1] / (s.phi[i + 1] * s.phi[i + 1]));
  }
  out.log_n_star = std::log(c_star) + 2.0 * s.v_saddle / sig2;
  return out;
}

namespace {

struct CapCore {
  double dirichlet = 0.0, defect_up = 0.0;
  double thomson = 0.0, defect_lo = 0.0;
};

CapCore capacity_core(const TransitionSets& sets, const SpectralProfile& p,
                      const InvariantExpansion& e) {
  const auto slices = build_all_slices(sets, p, e);
  const std::size_t big_k = slices.size();
  const double sig2 = p.sigma * p.sigma;
  const double eps = e.epsilon;
  const double rho = e.rho;
  const double wk = 1.0 / static_cast<double>(big_k);

  double dir_x = 0.0, dir_y = 0.0, defect_up = 0.0;
  double flux = 0.0, thom_denom = 0.0, defect_lo = 0.0;
  for (std::size_t k = 0; k < big_k; ++k) {
    const SliceCap& s = slices[k];
    const SliceCap& sp = slices[(k + 1) % big_k];
    const SliceCap& sm = slices[(k + big_k - 1) % big_k];

    // x part of the Dirichlet form: S1 e^{-2Vsad/s^2} / (Z0 c_a^2).
    dir_x += wk * std::exp(std::log(s.s1) - 2.0 * s.v_saddle / sig2 - s.log_z0 -
                           2.0 * std::log(s.c_a));

    // y part and the divergence defect, on the slice nodes.
    const std::size_t n = s.x.size();
    std::vector<double> fy(n), fdef(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s.x[i];
      const double pi_val = std::exp(-2.0 * s.v_saddle / sig2 - s.log_z0) / s.w[i] * s.phi[i];
      const double dyh = (sp.h0_at(x) - sm.h0_at(x)) * static_cast<double>(big_k) / 2.0;
      const double dyyh = (sp.h0_at(x) - 2.0 * s.h0[i] + sm.h0_at(x)) *
                          static_cast<double>(big_k) * static_cast<double>(big_k);
      const double dyh_star =
          (sp.h0_star_at(x) - sm.h0_star_at(x)) * static_cast<double>(big_k) / 2.0;
      const double dyyh_star = (sp.h0_star_at(x) - 2.0 * s.h0_star[i] + sm.h0_star_at(x)) *
                               static_cast<double>(big_k) * static_cast<double>(big_k);
      fy[i] = pi_val * dyh * dyh;
      const double op_h = dyh + 0.5 * rho * rho * sig2 * dyyh;
      const double op_hstar = dyh_star + 0.5 * rho * rho * sig2 * dyyh_star;
      fdef[i] = pi_val * (op_h - op_hstar) * s.h0[i];
    }
    dir_y += wk * trapz(s.x, fy);
    defect_up += wk * trapz(s.x, fdef);

    // Thomson pieces.
    const double lb2 = s.lambda1 * s.big_b * s.big_b;
    flux += wk * lb2 * s.phi_at_a;
    thom_denom += wk * lb2 * lb2 *
                  std::exp(s.log_z0 + 2.0 * s.v_saddle / sig2 + std::log(s.s1));
    defect_lo += wk * lb2 * (-s.phi_at_a + s.s1 / s.c_a);
  }
  CapCore out;
  out.dirichlet = sig2 / (2.0 * eps) * (dir_x + eps * rho * rho * dir_y);
  out.defect_up = std::abs(defect_up);
  // 1 / D(-phi) with phi = lambda1 B^2 Phi e_x / (4 eps C) and unit A-flux
  // 4 eps C = <lambda1 B^2 Phi(a(y), y)>:
  // D(-phi) = (2 eps / sig2) (1/(4 eps C))^2 <lambda1^2 B^4 Z0 e^{2Vsad/s^2} S1>.
  const double four_eps_c = flux;
  out.thomson = four_eps_c * four_eps_c * sig2 / (2.0 * eps * thom_denom);
  out.defect_lo = std::abs(defect_lo / four_eps_c);
  return out;
}

}  // namespace

DefectiveBound dirichlet_upper(const TransitionSets& sets, const SpectralProfile& profile,
                               const InvariantExpansion& expansion) {
  const CapCore core = capacity_core(sets, profile, expansion);
  return {core.dirichlet, core.defect_up};
}

DefectiveBound thomson_lower(const TransitionSets& sets, const SpectralProfile& profile,
                             const InvariantExpansion& expansion) {
  const CapCore core = capacity_core(sets, profile, expansion);
  return {core.thomson, core.defect_lo};
}

CapacityEstimate estimate_capacity(const SpectralProfile& profile,
                                   const InvariantExpansion& expansion, double rho_hat) {
  const TransitionSets sets = make_transition_sets(profile.geometry, rho_hat);
  const CapCore core = capacity_core(sets, profile, expansion);
  CapacityEstimate est;
  est.dirichlet_upper = core.dirichlet;
  est.thomson_lower = core.thomson;
  est.defect_upper = core.defect_up;
  est.defect_lower = core.defect_lo;
  est.rho_hat = rho_hat;
  est.sigma = profile.sigma;
  est.epsilon = expansion.epsilon;
  const RateProfile rp = profile.rate_profile(expansion.epsilon, true);
  est.c0 = reference_C0(rp, [&](double y) { return expansion.delta1.value(y); });
  return est;
}

}  // namespace oscwell
