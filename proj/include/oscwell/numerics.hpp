#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace oscwell {

using Fn1 = std::function<double(double)>;

/// Adaptive Simpson quadrature. The interval is pre-split into `panels`
/// uniform panels before refinement so narrow interior layers are not missed.
/// Throws QuadratureFailure when the depth limit is reached on a panel that
/// still violates the tolerance.
double adaptive_simpson(const Fn1& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 0.0, int max_depth = 48, int panels = 8);

/// Bisection to a sign-change bracket followed by Newton polish.
/// Requires f(lo) and f(hi) of opposite sign.
double root_bisect_newton(const Fn1& f, const Fn1& df, double lo, double hi,
                          double f_tol = 1e-12);

/// Golden-section minimisation of a unimodal function on [a, b].
double golden_section_min(const Fn1& f, double a, double b, double x_tol = 1e-10);

double kahan_sum(const std::vector<double>& values);

/// Natural cubic spline, 1-periodic, on a uniform grid y_k = k/n, k = 0..n-1.
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  explicit PeriodicSpline(std::vector<double> values);

  double operator()(double y) const;
  double derivative(double y) const;
  std::size_t size() const { return v_.size(); }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> v_;   // samples
  std::vector<double> m_;   // second derivatives at nodes
};

/// Cumulative integral of a positive 1-periodic function, precomputed per cell
/// (Simpson) on a fine uniform grid, with the exact periodic extension
/// R(y0 + n + t, y0) = n R(1,0) + R(y0 + t, y0).
class CumulativePeriodic {
 public:
  CumulativePeriodic() = default;
  CumulativePeriodic(Fn1 f, std::size_t n_grid = 4096);

  /// Integral over one full period.
  double total() const { return total_; }
  /// Integral from 0 to y for y in [0, 1).
  double from_zero(double y) const;
  /// Integral from y0 to y1 for arbitrary reals y1 >= y0.
  double integral(double y0, double y1) const;
  /// Smallest t >= 0 with integral(y0, y0 + t) == target (target >= 0).
  double invert(double y0, double target) const;

 private:
  Fn1 f_;
  std::vector<double> cum_;  // cum_[k] = integral from 0 to k/n
  double total_ = 0.0;
  std::size_t n_ = 0;
};

/// Lowest eigenpairs of a symmetric tridiagonal matrix (diag d, off-diag e),
/// by Sturm-sequence bisection and inverse iteration.
struct TridiagEigs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // unit l2 norm
};
TridiagEigs tridiag_lowest_eigs(const std::vector<double>& d, const std::vector<double>& e,
                                std::size_t k);

/// Unique periodic solution of eps u' = -lambda(y) u + s(y) on the uniform
/// grid y_k = k/n, by the implicit trapezoid rule with periodic closure.
/// Requires lambda > 0 somewhere; throws SingularSystem otherwise.
std::vector<double> periodic_linear_ode(double eps, const std::vector<double>& lambda,
                                        const std::vector<double>& s);

/// Solves the cyclic tridiagonal system with sub/diag/super bands (a, b, c)
/// and corner terms a[0] (row 0, col n-1) and c[n-1] (row n-1, col 0).
std::vector<double> cyclic_tridiagonal_solve(std::vector<double> a, std::vector<double> b,
                                             std::vector<double> c, std::vector<double> rhs);

/// Kolmogorov statistic of the sample against the unit exponential law.
double ks_statistic_exp1(std::vector<double> samples);

/// Fourth-order central derivative of 1-periodic samples on a uniform grid.
std::vector<double> periodic_derivative4(const std::vector<double>& v);

}  // namespace oscwell
