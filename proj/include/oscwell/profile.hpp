#pragma once

#include <memory>
#include <vector>

#include "oscwell/jump.hpp"
#include "oscwell/spectral.hpp"

namespace oscwell {

/// Frozen-slice spectral data swept over one forcing period: eigenvalues,
/// eigenfunctions on a shared uniform x grid with globally consistent signs,
/// matrix elements, and Kramers summaries. The backbone of the invariant
/// measure and capacity computations.
struct SpectralProfile {
  std::shared_ptr<const PotentialModel> model;
  double sigma = 0.0;
  std::size_t n_max = 0;

  std::vector<double> y;   // uniform slice grid, K points
  std::vector<double> x;   // shared uniform eigen grid
  double x_step = 0.0;
  double x_lo = 0.0, x_hi = 0.0;

  std::vector<SliceSummary> rates;                 // per slice
  std::vector<std::vector<double>> lambda;         // [K][n_max+1]
  std::vector<std::vector<std::vector<double>>> psi;  // [K][n][Nx]
  std::vector<MatrixElements> elements;            // [K]
  GeometrySweep geometry;

  PeriodicSpline a_spline, b_spline;          // A(y), B(y)
  PeriodicSpline delta_bar_spline;            // DeltaBar(y)
  PeriodicSpline log_lambda1_num;             // numerical lambda1(y)

  std::size_t slices() const { return y.size(); }
  double a_of(double yy) const { return a_spline(yy); }
  double b_of(double yy) const { return b_spline(yy); }
  double delta_bar_prime(double yy) const { return delta_bar_spline.derivative(yy); }
  double lambda1_num(double yy) const { return std::exp(log_lambda1_num(yy)); }
  double avg_lambda1_num() const;

  /// Linear interpolation of psi_n(. | y_k) at x.
  double psi_at(std::size_t k, std::size_t n, double xq) const;

  /// Rate profile over this sweep (numerical lambda1 by default).
  RateProfile rate_profile(double epsilon, bool numeric_lambda1 = true) const;
};

SpectralProfile build_spectral_profile(std::shared_ptr<const PotentialModel> model,
                                       double sigma, std::size_t y_points = 64,
                                       std::size_t n_max = 8, std::size_t eigen_nodes = 2048,
                                       double dy_fd = 1e-3);

}  // namespace oscwell
