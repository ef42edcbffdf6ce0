#include "oscwell/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscwell/errors.hpp"

namespace oscwell {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const Fn1& f, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, int depth, long& budget) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  budget -= 2;
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double err = left + right - whole;
  if (std::abs(err) <= 15.0 * tol || (b - a) < 1e-15 * (1.0 + std::abs(a))) {
    return left + right + err / 15.0;
  }
  if (depth <= 0 || budget <= 0) {
    throw QuadratureFailure("adaptive_simpson: refinement limit hit");
  }
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, budget) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, budget);
}

}  // namespace

double adaptive_simpson(const Fn1& f, double a, double b, double rel_tol, double abs_tol,
                        int max_depth, int panels) {
  if (a == b) return 0.0;
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  // First pass to estimate the scale of the integral (and of its absolute
  // counterpart, which floors the tolerance when cancellations drive the
  // value itself towards zero).
  std::vector<double> fa(panels + 1), fm(panels);
  for (int k = 0; k <= panels; ++k) fa[k] = f(a + k * h);
  double rough = 0.0, rough_abs = 0.0;
  for (int k = 0; k < panels; ++k) {
    fm[k] = f(a + (k + 0.5) * h);
    const double piece = simpson(a + k * h, fa[k], a + (k + 1) * h, fa[k + 1], fm[k]);
    rough += piece;
    rough_abs += std::abs(piece);
  }
  const double tol = std::max({abs_tol, rel_tol * std::abs(rough), 1e-15 * rough_abs}) +
                     std::numeric_limits<double>::min();
  long budget = 4'000'000;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double pa = a + k * h, pb = a + (k + 1) * h, pm = 0.5 * (pa + pb);
    const double whole = simpson(pa, fa[k], pb, fa[k + 1], fm[k]);
    sum += adapt(f, pa, fa[k], pb, fa[k + 1], pm, fm[k], whole, tol / panels, max_depth,
                 budget);
  }
  return sum;
}

double root_bisect_newton(const Fn1& f, const Fn1& df, double lo, double hi, double f_tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw Error("root_bisect_newton: no sign change in bracket");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) { lo = hi = mid; break; }
    if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; } else { hi = mid; }
    if (hi - lo < 1e-13 * (1.0 + std::abs(mid))) break;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double fx = f(x);
    if (std::abs(fx) < f_tol) return x;
    const double d = df(x);
    if (d == 0.0) break;
    const double step = fx / d;
    const double xn = x - step;
    if (xn < lo - (hi - lo) || xn > hi + (hi - lo)) break;
    x = xn;
  }
  return x;
}

double golden_section_min(const Fn1& f, double a, double b, double x_tol) {
  constexpr double inv_phi = 0.6180339887498948482;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > x_tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double kahan_sum(const std::vector<double>& values) {
  double s = 0.0, c = 0.0;
  for (double v : values) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

PeriodicSpline::PeriodicSpline(std::vector<double> values) : v_(std::move(values)) {
  const std::size_t n = v_.size();
  if (n < 3) throw Error("PeriodicSpline: need at least 3 samples");
  const double h = 1.0 / static_cast<double>(n);
  // Cyclic tridiagonal system for second derivatives m: h/6 (m_{k-1} + 4 m_k + m_{k+1})
  // = (v_{k+1} - 2 v_k + v_{k-1}) / h.
  std::vector<double> a(n, h / 6.0), b(n, 4.0 * h / 6.0), c(n, h / 6.0), rhs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double vm = v_[(k + n - 1) % n], vp = v_[(k + 1) % n];
    rhs[k] = (vp - 2.0 * v_[k] + vm) / h;
  }
  m_ = cyclic_tridiagonal_solve(std::move(a), std::move(b), std::move(c), std::move(rhs));
}

double PeriodicSpline::operator()(double y) const {
  const std::size_t n = v_.size();
  double t = y - std::floor(y);
  double u = t * static_cast<double>(n);
  std::size_t k = static_cast<std::size_t>(u);
  if (k >= n) k = n - 1;
  const double h = 1.0 / static_cast<double>(n);
  const double s = (u - static_cast<double>(k)) * h;  // offset within the cell
  const std::size_t k1 = (k + 1) % n;
  const double A = (h - s) / h, B = s / h;
  return A * v_[k] + B * v_[k1] +
         ((A * A * A - A) * m_[k] + (B * B * B - B) * m_[k1]) * h * h / 6.0;
}

double PeriodicSpline::derivative(double y) const {
  const std::size_t n = v_.size();
  double t = y - std::floor(y);
  double u = t * static_cast<double>(n);
  std::size_t k = static_cast<std::size_t>(u);
  if (k >= n) k = n - 1;
  const double h = 1.0 / static_cast<double>(n);
  const double s = (u - static_cast<double>(k)) * h;
  const std::size_t k1 = (k + 1) % n;
  const double A = (h - s) / h, B = s / h;
  return (v_[k1] - v_[k]) / h +
         ((1.0 - 3.0 * A * A) * m_[k] + (3.0 * B * B - 1.0) * m_[k1]) * h / 6.0;
}

CumulativePeriodic::CumulativePeriodic(Fn1 f, std::size_t n_grid) : f_(std::move(f)), n_(n_grid) {
  cum_.resize(n_ + 1);
  cum_[0] = 0.0;
  const double h = 1.0 / static_cast<double>(n_);
  double prev = f_(0.0);
  double s = 0.0, comp = 0.0;
  for (std::size_t k = 1; k <= n_; ++k) {
    const double cur = f_(static_cast<double>(k) * h);
    const double mid = f_((static_cast<double>(k) - 0.5) * h);
    const double inc = h / 6.0 * (prev + 4.0 * mid + cur) - comp;
    const double t = s + inc;
    comp = (t - s) - inc;
    s = t;
    cum_[k] = s;
    prev = cur;
  }
  total_ = cum_[n_];
}

double CumulativePeriodic::from_zero(double y) const {
  const double h = 1.0 / static_cast<double>(n_);
  double u = y * static_cast<double>(n_);
  std::size_t k = static_cast<std::size_t>(u);
  if (k >= n_) k = n_ - 1;
  const double yk = static_cast<double>(k) * h;
  const double s = y - yk;
  return cum_[k] + s / 6.0 * (f_(yk) + 4.0 * f_(yk + 0.5 * s) + f_(y));
}

double CumulativePeriodic::integral(double y0, double y1) const {
  if (y1 <= y0) return 0.0;
  const double t0 = y0 - std::floor(y0);
  const double t1 = y1 - std::floor(y1);
  const double wraps = std::floor(y1) - std::floor(y0);
  return wraps * total_ + from_zero(t1) - from_zero(t0);
}

double CumulativePeriodic::invert(double y0, double target) const {
  if (target <= 0.0) return 0.0;
  const double full = std::floor(target / total_);
  double rem = target - full * total_;
  // locate rem within one period starting at y0
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (integral(y0, y0 + mid) < rem) lo = mid; else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {  // Newton polish on the smooth integrand
    const double g = integral(y0, y0 + t) - rem;
    const double d = f_(y0 + t - std::floor(y0 + t));
    if (d <= 0.0) break;
    t -= g / d;
    t = std::clamp(t, 0.0, 1.0);
  }
  return full + t;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  const std::size_t n = d.size();
  int count = 0;
  double q = d[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    double denom = q;
    if (std::abs(denom) < 1e-300) denom = denom < 0 ? -1e-300 : 1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

// Tridiagonal solve with partial pivoting: (T - shift I) x = rhs.
bool tridiag_shift_solve(const std::vector<double>& d, const std::vector<double>& e,
                         double shift, std::vector<double>& x) {
  const std::size_t n = d.size();
  std::vector<double> a(n), b(n, 0.0), c(n, 0.0);  // diag, super, super2
  std::vector<double> r = x;
  for (std::size_t i = 0; i < n; ++i) a[i] = d[i] - shift;
  std::vector<double> sub(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) { sub[i + 1] = e[i]; b[i] = e[i]; }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double pivot = a[i], below = sub[i + 1];
    if (std::abs(below) > std::abs(pivot)) {
      std::swap(a[i], sub[i + 1]);
      std::swap(b[i], a[i + 1]);
      std::swap(c[i], b[i + 1]);
      std::swap(r[i], r[i + 1]);
      pivot = a[i];
    }
    if (pivot == 0.0) pivot = 1e-300;
    const double m = sub[i + 1] / pivot;
    a[i + 1] -= m * b[i];
    b[i + 1] -= m * c[i];
    r[i + 1] -= m * r[i];
    a[i] = pivot;
  }
  if (std::abs(a[n - 1]) < 1e-300) a[n - 1] = 1e-300;
  x[n - 1] = r[n - 1] / a[n - 1];
  if (n >= 2) x[n - 2] = (r[n - 2] - b[n - 2] * x[n - 1]) / (a[n - 2] == 0.0 ? 1e-300 : a[n - 2]);
  for (std::size_t ii = n; ii-- > 2;) {
    const std::size_t i = ii - 2;
    x[i] = (r[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / (a[i] == 0.0 ? 1e-300 : a[i]);
  }
  return true;
}

}  // namespace

TridiagEigs tridiag_lowest_eigs(const std::vector<double>& d, const std::vector<double>& e,
                                std::size_t k) {
  const std::size_t n = d.size();
  if (k > n) k = n;
  // Gershgorin bounds.
  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < n; ++i) {
    double rad = 0.0;
    if (i > 0) rad += std::abs(e[i - 1]);
    if (i + 1 < n) rad += std::abs(e[i]);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  TridiagEigs out;
  out.values.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double a = lo, b = hi;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(d, e, mid) > static_cast<int>(j)) b = mid; else a = mid;
      if (b - a <= 1e-15 * scale) break;
    }
    out.values[j] = 0.5 * (a + b);
  }
  // Inverse iteration for eigenvectors; full re-orthogonalisation against the
  // previously computed vectors keeps the basis orthonormal to roundoff.
  out.vectors.assign(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) {
    auto& v = out.vectors[j];
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<double>((i * 2654435761u + j * 40503u) % 1000) / 1000.0 - 0.5;
    }
    const double shift = out.values[j] + 1e-13 * scale;
    bool converged = false;
    for (int it = 0; it < 30 && !converged; ++it) {
      tridiag_shift_solve(d, e, shift, v);
      for (std::size_t p = 0; p < j; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += v[i] * out.vectors[p][i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * out.vectors[p][i];
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (double& x : v) x /= norm;
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double hv = d[i] * v[i];
        if (i > 0) hv += e[i - 1] * v[i - 1];
        if (i + 1 < n) hv += e[i] * v[i + 1];
        res = std::max(res, std::abs(hv - out.values[j] * v[i]));
      }
      converged = res <= 2e-13 * scale;
    }
    if (!converged) throw ConvergenceFailure("tridiag_lowest_eigs: inverse iteration limit hit");
  }
  return out;
}

std::vector<double> periodic_linear_ode(double eps, const std::vector<double>& lambda,
                                        const std::vector<double>& s) {
  const std::size_t n = lambda.size();
  const double h = 1.0 / static_cast<double>(n);
  // Implicit trapezoid step: u_{k+1} = g_k u_k + q_k, cyclic closure for u_0.
  std::vector<double> g(n), q(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k1 = (k + 1) % n;
    const double denom = eps / h + 0.5 * lambda[k1];
    g[k] = (eps / h - 0.5 * lambda[k]) / denom;
    q[k] = 0.5 * (s[k] + s[k1]) / denom;
  }
  double prod = 1.0, acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc = g[k] * acc + q[k];
    prod *= g[k];
  }
  const double denom = 1.0 - prod;
  if (std::abs(denom) < 1e-14) throw SingularSystem("periodic_linear_ode: closure singular");
  std::vector<double> u(n);
  u[0] = acc / denom;
  for (std::size_t k = 0; k + 1 < n; ++k) u[k + 1] = g[k] * u[k] + q[k];
  return u;
}

std::vector<double> cyclic_tridiagonal_solve(std::vector<double> a, std::vector<double> b,
                                             std::vector<double> c, std::vector<double> rhs) {
  const std::size_t n = b.size();
  if (n < 3) throw SingularSystem("cyclic_tridiagonal_solve: system too small");
  // Sherman-Morrison: remove the corner entries a[0] and c[n-1].
  const double alpha = a[0], beta = c[n - 1];
  const double gamma = -b[0];
  std::vector<double> bb = b;
  bb[0] -= gamma;
  bb[n - 1] -= alpha * beta / gamma;
  auto solve = [&](std::vector<double> r) {
    std::vector<double> cp(n), dp(n);
    double piv = bb[0];
    if (std::abs(piv) < 1e-300) throw SingularSystem("cyclic_tridiagonal_solve: zero pivot");
    cp[0] = c[0] / piv;
    dp[0] = r[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
      piv = bb[i] - a[i] * cp[i - 1];
      if (std::abs(piv) < 1e-300) throw SingularSystem("cyclic_tridiagonal_solve: zero pivot");
      cp[i] = (i + 1 < n ? c[i] : 0.0) / piv;
      dp[i] = (r[i] - a[i] * dp[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) dp[i] -= cp[i] * dp[i + 1];
    return dp;
  };
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = beta;
  const auto x = solve(std::move(rhs));
  const auto z = solve(std::move(u));
  const double fact = (x[0] + alpha / gamma * x[n - 1]) /
                      (1.0 + z[0] + alpha / gamma * z[n - 1]);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
  return out;
}

double ks_statistic_exp1(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::exp(-samples[i]);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

std::vector<double> periodic_derivative4(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m2 = v[(k + n - 2) % n], m1 = v[(k + n - 1) % n];
    const double p1 = v[(k + 1) % n], p2 = v[(k + 2) % n];
    out[k] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  }
  return out;
}

}  // namespace oscwell
