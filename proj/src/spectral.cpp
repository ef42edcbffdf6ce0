#include "oscwell/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscwell/errors.hpp"

namespace oscwell {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kGl4Node[2] = {0.3399810435848562648, 0.8611363115940525752};
constexpr double kGl4Weight[2] = {0.6521451548625461426, 0.3478548451374538574};

// Integral of f over [a, b] with 4-point Gauss-Legendre.
template <class F>
double gl4(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    s += kGl4Weight[i] * (f(c - r * kGl4Node[i]) + f(c + r * kGl4Node[i]));
  }
  return s * r;
}

}  // namespace

std::pair<double, double> truncated_domain(const PotentialModel& model, double sigma,
                                           std::size_t y_points, double threshold) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < y_points; ++k) {
    const double y = static_cast<double>(k) / static_cast<double>(y_points);
    const WellGeometry g = find_critical_points(model, y);
    const double v_min = std::min(model.v0(g.x_minus, y), model.v0(g.x_plus, y));
    const double target = v_min + 0.5 * threshold * sigma * sigma;
    const auto cut = [&](double start, double dir) {
      double x = start, step = 0.25;
      while (model.v0(x + dir * step, y) < target) x += dir * step;
      double a = x, b = x + dir * step;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        if (model.v0(m, y) < target) a = m; else b = m;
      }
      return 0.5 * (a + b);
    };
    lo = std::min(lo, cut(g.x_minus, -1.0));
    hi = std::max(hi, cut(g.x_plus, +1.0));
  }
  return {lo, hi};
}

FrozenSlice make_frozen_slice(std::shared_ptr<const PotentialModel> model, double y,
                              double sigma, std::size_t x_points,
                              std::optional<std::pair<double, double>> domain) {
  FrozenSlice s;
  s.model = model;
  s.y = y;
  s.sigma = sigma;
  s.geom = find_critical_points(*model, y, sigma);
  if (domain) {
    s.x_lo = domain->first;
    s.x_hi = domain->second;
  } else {
    // Single-slice truncation around this y only.
    const double v_min = std::min(model->v0(s.geom.x_minus, y), model->v0(s.geom.x_plus, y));
    const double target = v_min + 30.0 * sigma * sigma;
    const auto cut = [&](double start, double dir) {
      double x = start, step = 0.25;
      while (model->v0(x + dir * step, y) < target) x += dir * step;
      double a = x, b = x + dir * step;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        if (model->v0(m, y) < target) a = m; else b = m;
      }
      return 0.5 * (a + b);
    };
    s.x_lo = cut(s.geom.x_minus, -1.0);
    s.x_hi = cut(s.geom.x_plus, +1.0);
  }
  s.v_saddle = model->v0(s.geom.x_saddle, y);
  s.v_min = std::min(model->v0(s.geom.x_minus, y), model->v0(s.geom.x_plus, y));

  // Graded grid: node density proportional to 1 / (sigma + |x - x*|), summed
  // over the three critical points; cumulative built on a fine pre-grid.
  const auto density = [&](double x) {
    double w = 0.0;
    for (double xs : {s.geom.x_minus, s.geom.x_saddle, s.geom.x_plus}) {
      w += 1.0 / (sigma + std::abs(x - xs));
    }
    return w;
  };
  constexpr std::size_t kPre = 8192;
  std::vector<double> cum(kPre + 1, 0.0);
  const double h = (s.x_hi - s.x_lo) / kPre;
  double prev = density(s.x_lo);
  for (std::size_t i = 1; i <= kPre; ++i) {
    const double cur = density(s.x_lo + i * h);
    cum[i] = cum[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  s.x_grid.reserve(x_points + 3);
  std::size_t j = 0;
  for (std::size_t k = 0; k < x_points; ++k) {
    const double q = cum[kPre] * static_cast<double>(k) / static_cast<double>(x_points - 1);
    while (j + 1 < kPre && cum[j + 1] < q) ++j;
    const double frac = (q - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
    s.x_grid.push_back(s.x_lo + (static_cast<double>(j) + frac) * h);
  }
  s.x_grid.front() = s.x_lo;
  s.x_grid.back() = s.x_hi;
  for (double xs : {s.geom.x_minus, s.geom.x_saddle, s.geom.x_plus}) s.x_grid.push_back(xs);
  std::sort(s.x_grid.begin(), s.x_grid.end());
  // Drop near-duplicates so the grid stays strictly increasing.
  std::vector<double> grid;
  grid.reserve(s.x_grid.size());
  for (double x : s.x_grid) {
    if (grid.empty() || x - grid.back() > 1e-12 * (1.0 + std::abs(x))) {
      grid.push_back(x);
    } else {
      const bool critical = x == s.geom.x_minus || x == s.geom.x_saddle || x == s.geom.x_plus;
      if (critical) grid.back() = x;
    }
  }
  s.x_grid = std::move(grid);
  return s;
}

double log_partition_Z0(const FrozenSlice& s) {
  const double sig2 = s.sigma * s.sigma;
  const auto f = [&](double x) { return std::exp(-2.0 * (s.v(x) - s.v_min) / sig2); };
  double total = 0.0;
  const double splits[5] = {s.x_lo, s.geom.x_minus, s.geom.x_saddle, s.geom.x_plus, s.x_hi};
  for (int k = 0; k < 4; ++k) {
    total += adaptive_simpson(f, splits[k], splits[k + 1], 1e-10, 0.0, 48, 8);
  }
  return std::log(total) - 2.0 * s.v_min / sig2;
}

double partition_Z0(const FrozenSlice& s) { return std::exp(log_partition_Z0(s)); }

double CommittorTable::value(double x_query) const {
  if (x_query <= x.front()) return 1.0;
  if (x_query >= x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), x_query);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double t = (x_query - x[i]) / (x[i + 1] - x[i]);
  return h[i] + t * (h[i + 1] - h[i]);
}

CommittorTable committor_table(const FrozenSlice& s) {
  CommittorTable t;
  const double sig2 = s.sigma * s.sigma;
  const auto f = [&](double x) { return std::exp(2.0 * (s.v(x) - s.v_saddle) / sig2); };
  const auto lo_it = std::lower_bound(s.x_grid.begin(), s.x_grid.end(), s.geom.x_minus);
  const auto hi_it = std::lower_bound(s.x_grid.begin(), s.x_grid.end(), s.geom.x_plus);
  t.x.assign(lo_it, hi_it + 1);
  const std::size_t n = t.x.size();
  // Cumulative integral from the right endpoint, one Gauss panel per cell.
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    cum[i] = cum[i + 1] + gl4(f, t.x[i], t.x[i + 1]);
  }
  t.h.resize(n);
  const double total = cum[0];
  for (std::size_t i = 0; i < n; ++i) t.h[i] = cum[i] / total;
  t.h.front() = 1.0;
  t.h.back() = 0.0;
  t.log_n = std::log(total) + 2.0 * s.v_saddle / sig2;
  return t;
}

double committor_h0(const FrozenSlice& s, double x) { return committor_table(s).value(x); }

RateSlice kramers_rates(const WellGeometry& g, double sigma) {
  RateSlice r;
  const double sig2 = sigma * sigma;
  const double delta_bar =
      std::isfinite(g.delta_bar)
          ? g.delta_bar
          : g.delta + 0.5 * sig2 * std::log(g.omega_minus / g.omega_plus);
  r.delta_bar = delta_bar;
  r.r_minus = g.omega_minus * g.omega0 / (2.0 * kPi) * std::exp(-2.0 * g.h_minus / sig2);
  r.r_plus = g.omega_plus * g.omega0 / (2.0 * kPi) * std::exp(-2.0 * g.h_plus / sig2);
  r.lambda1_kramers = r.r_minus + r.r_plus;
  r.a = std::tanh(delta_bar / sig2);
  r.b = 1.0 / std::cosh(delta_bar / sig2);
  r.z0 = std::numeric_limits<double>::quiet_NaN();
  r.n_committor = std::numeric_limits<double>::quiet_NaN();
  return r;
}

double z0n_diagnostic(double z0, double n_committor, double lambda1, double b, double sigma) {
  return z0 * n_committor * lambda1 * b * b / (2.0 * sigma * sigma);
}

SpectralData eigen_solve(const FrozenSlice& s, std::size_t n_max, std::size_t n_nodes) {
  SpectralData out;
  out.y = s.y;
  out.sigma = s.sigma;
  const std::size_t n = n_nodes;
  const double h = (s.x_hi - s.x_lo) / static_cast<double>(n - 1);
  out.step = h;
  out.x.resize(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i] = s.x_lo + static_cast<double>(i) * h;
    v[i] = s.v(out.x[i]);
  }
  const double sig2 = s.sigma * s.sigma;
  // Finite-volume conjugation with geometric-mean weights: reflecting ends,
  // constant off-diagonal, and the exact kernel mode e^{-V/sigma^2}.
  const double off = -sig2 / (2.0 * h * h);
  std::vector<double> d(n, 0.0), e(n - 1, off);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i + 1 < n) acc += std::exp((v[i] - v[i + 1]) / sig2);
    if (i > 0) acc += std::exp((v[i] - v[i - 1]) / sig2);
    d[i] = sig2 / (2.0 * h * h) * acc;
  }
  const TridiagEigs eigs = tridiag_lowest_eigs(d, e, n_max + 1);
  out.lambda = eigs.values;

  const double log_z0 = log_partition_Z0(s);
  out.z0 = std::exp(log_z0);
  out.psi.resize(n_max + 1);
  out.phi.resize(n_max + 1);
  out.pi.resize(n_max + 1);
  const double inv_sqrt_h = 1.0 / std::sqrt(h);
  // Index of the node nearest the left well bottom, for the sign convention.
  const std::size_t i_minus = static_cast<std::size_t>(
      std::clamp((s.geom.x_minus - s.x_lo) / h + 0.5, 0.0, static_cast<double>(n - 1)));
  for (std::size_t m = 0; m <= n_max; ++m) {
    std::vector<double> psi = eigs.vectors[m];
    for (double& x : psi) x *= inv_sqrt_h;  // orthonormal w.r.t. h * sum
    double ref = 0.0;
    if (m == 0) {
      for (double x : psi) ref += x;
    } else {
      ref = psi[i_minus];
    }
    if (ref < 0.0) {
      for (double& x : psi) x = -x;
    }
    out.phi[m].resize(n);
    out.pi[m].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::exp(v[i] / sig2 + 0.5 * log_z0);
      out.phi[m][i] = psi[i] * w;
      out.pi[m][i] = psi[i] / w;
    }
    out.psi[m] = std::move(psi);
  }
  return out;
}

double phi1_approx(const FrozenSlice& s, double x) {
  const CommittorTable t = committor_table(s);
  const double d = s.geom.delta_bar / (s.sigma * s.sigma);
  const double h0 = t.value(x);
  return std::exp(d) * h0 - std::exp(-d) * (1.0 - h0);
}

void align_eigen_signs(const SpectralData& ref, SpectralData& other) {
  const double h = ref.step;
  for (std::size_t m = 0; m < ref.psi.size(); ++m) {
    double dot = 0.0;
    for (std::size_t i = 0; i < ref.x.size(); ++i) dot += ref.psi[m][i] * other.psi[m][i];
    dot *= h;
    if (std::abs(dot) < 0.5) {
      throw SignAmbiguity("eigenfunction overlap " + std::to_string(dot) + " for mode " +
                          std::to_string(m));
    }
    if (dot < 0.0) {
      for (double& x : other.psi[m]) x = -x;
      for (double& x : other.phi[m]) x = -x;
      for (double& x : other.pi[m]) x = -x;
    }
  }
}

MatrixElements matrix_elements_from(const SpectralData& center, SpectralData& minus,
                                    SpectralData& plus, double dy) {
  align_eigen_signs(center, plus);
  align_eigen_signs(center, minus);
  const std::size_t n_max = center.psi.size() - 1;
  MatrixElements out;
  out.n_max = n_max;
  out.f.assign(n_max + 1, std::vector<double>(n_max + 1, 0.0));
  out.g.assign(n_max + 1, std::vector<double>(n_max + 1, 0.0));
  const double h = center.step;
  const double sig2 = center.sigma * center.sigma;
  const std::size_t n = center.x.size();
  for (std::size_t mm = 0; mm <= n_max; ++mm) {
    for (std::size_t nn = 0; nn <= n_max; ++nn) {
      double f_acc = 0.0, g_acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dpi = (plus.pi[mm][i] - minus.pi[mm][i]) / (2.0 * dy);
        const double ddpi =
            (plus.pi[mm][i] - 2.0 * center.pi[mm][i] + minus.pi[mm][i]) / (dy * dy);
        f_acc += dpi * center.phi[nn][i];
        g_acc += ddpi * center.phi[nn][i];
      }
      out.f[nn][mm] = sig2 * f_acc * h;
      out.g[nn][mm] = sig2 * sig2 * g_acc * h;
    }
  }
  return out;
}

MatrixElements matrix_elements(std::shared_ptr<const PotentialModel> model, double y,
                               double sigma, std::size_t n_max, double dy,
                               std::size_t n_nodes,
                               std::optional<std::pair<double, double>> domain) {
  if (!domain) {
    domain = truncated_domain(*model, sigma);
  }
  const FrozenSlice sm = make_frozen_slice(model, y - dy, sigma, 64, domain);
  const FrozenSlice s0 = make_frozen_slice(model, y, sigma, 64, domain);
  const FrozenSlice sp = make_frozen_slice(model, y + dy, sigma, 64, domain);
  SpectralData em = eigen_solve(sm, n_max, n_nodes);
  SpectralData e0 = eigen_solve(s0, n_max, n_nodes);
  SpectralData ep = eigen_solve(sp, n_max, n_nodes);
  return matrix_elements_from(e0, em, ep, dy);
}

double laplace_In(const FrozenSlice& s, unsigned n, double delta) {
  const double sig2 = s.sigma * s.sigma;
  const double x0 = s.geom.x_saddle;
  const double v0 = s.v_saddle;
  const auto f = [&](double u) {
    return std::pow(u, static_cast<double>(n)) * std::exp(2.0 * (s.v(x0 + u) - v0) / sig2);
  };
  return adaptive_simpson(f, -delta, delta, 1e-10, 0.0, 48, 16);
}

double laplace_Jn(const FrozenSlice& s, unsigned n, double x, double delta) {
  const double sig2 = s.sigma * s.sigma;
  const double x0 = s.geom.x_saddle;
  const double v0 = s.v_saddle;
  const auto vt = [&](double u) { return s.v(x0 + u) - v0; };
  // Shift by the largest exponent on [x, delta] to keep the integrand <= 1.
  double vmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 256; ++i) {
    vmax = std::max(vmax, vt(x + (delta - x) * i / 256.0));
  }
  const auto f = [&](double u) {
    return std::pow(u, static_cast<double>(n)) * std::exp(2.0 * (vt(u) - vmax) / sig2);
  };
  const double integral = adaptive_simpson(f, x, delta, 1e-10, 0.0, 48, 16);
  return std::exp(2.0 * (vmax - vt(x)) / sig2) * integral;
}

double delta_bar_inner(const FrozenSlice& s) {
  const CommittorTable t = committor_table(s);
  const double sig2 = s.sigma * s.sigma;
  const auto pi0 = [&](double x) { return std::exp(-2.0 * (s.v(x) - s.v_min) / sig2); };
  const auto weighted = [&](double x) { return pi0(x) * t.value(x); };
  const double mass_left = adaptive_simpson(pi0, s.x_lo, s.geom.x_minus, 1e-10, 0.0, 48, 8);
  const double mass_mid = adaptive_simpson(weighted, s.geom.x_minus, s.geom.x_plus,
                                           1e-10, 0.0, 48, 16);
  const double z = adaptive_simpson(pi0, s.x_lo, s.geom.x_minus, 1e-10, 0.0, 48, 8) +
                   adaptive_simpson(pi0, s.geom.x_minus, s.geom.x_plus, 1e-10, 0.0, 48, 16) +
                   adaptive_simpson(pi0, s.geom.x_plus, s.x_hi, 1e-10, 0.0, 48, 8);
  const double p = (mass_left + mass_mid) / z;
  return 0.5 * sig2 * std::log((1.0 - p) / p);
}

std::vector<SliceSummary> spectral_sweep(std::shared_ptr<const PotentialModel> model,
                                         double sigma, std::size_t y_points,
                                         std::size_t x_points, bool with_numeric,
                                         std::size_t eigen_nodes) {
  const auto domain = truncated_domain(*model, sigma);
  std::vector<SliceSummary> rows(y_points);
  for (std::size_t k = 0; k < y_points; ++k) {
    const double y = static_cast<double>(k) / static_cast<double>(y_points);
    const FrozenSlice slice = make_frozen_slice(model, y, sigma, x_points, domain);
    const RateSlice r = kramers_rates(slice.geom, sigma);
    SliceSummary row;
    row.y = y;
    row.z0 = partition_Z0(slice);
    row.n_committor = std::exp(committor_table(slice).log_n);
    row.r_minus = r.r_minus;
    row.r_plus = r.r_plus;
    row.lambda1_kramers = r.lambda1_kramers;
    row.a = r.a;
    row.b = r.b;
    row.delta_bar = r.delta_bar;
    if (with_numeric) {
      const SpectralData sd = eigen_solve(slice, 1, eigen_nodes);
      row.lambda1_numeric = sd.lambda[1];
    } else {
      row.lambda1_numeric = std::numeric_limits<double>::quiet_NaN();
    }
    rows[k] = row;
  }
  return rows;
}

}  // namespace oscwell
