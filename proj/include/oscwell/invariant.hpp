#pragma once

#include <vector>

#include "oscwell/profile.hpp"

namespace oscwell {

struct Delta1Options {
  bool use_p1w1 = true;     // first-order correction coefficients p1, w1
  bool use_w1tilde = true;  // coupling to the n >= 2 modes
  std::size_t n_out = 1024;
};

struct Delta1Solution {
  std::vector<double> y;
  std::vector<double> delta1;
  double residual_sup = 0.0;
  double w1tilde_shift = 0.0;        // sup |delta1(with) - delta1(without)|
  bool truncation_warning = false;   // w1tilde moved delta1 by more than 10%
  bool correction_dominated = false; // corrected rate dipped through zero
  double value(double yy) const;    // periodic linear interpolation
  double alpha1(double yy, const SpectralProfile& p) const {
    return (p.a_of(yy) - value(yy)) / p.b_of(yy);
  }
};

/// Periodic solution of the first-order delta1 equation (rho^2 = 0) via the
/// integrating-factor representation.
Delta1Solution solve_delta1_first_order(const SpectralProfile& profile, double epsilon,
                                        const Delta1Options& opts = {});

/// Periodic collocation solve of the leading-order second-order equation
/// (rho^2/2) eps sigma^2 d1'' - eps d1' - lambda1 (d1 - A) = 0.
Delta1Solution solve_delta1_second_order(const SpectralProfile& profile, double epsilon,
                                         double rho, std::size_t n_grid = 1024);

struct AlphaPerp {
  std::vector<double> y;                          // profile slice grid
  std::vector<std::vector<double>> quasi_static;  // [K][n_max+1]; 0 for n <= 1
  std::vector<std::vector<double>> refined;       // filled when refine = true
  bool refined_available = false;
  double sup_lambda_alpha = 0.0;  // sup_n,y lambda_n |alpha_n*|
  double refinement_gap = 0.0;    // sup |refined - quasi_static|
};

/// Quasi-static amplitudes alpha_n*(y) for n >= 2, optionally refined by a
/// periodic implicit-trapezoid solve of the coupled system.
AlphaPerp solve_alpha_perp(const SpectralProfile& profile, double epsilon,
                           const Delta1Solution& delta1, bool refine = false);

/// Assembled invariant density pi(x, y) = pi0 [1 + alpha1 phi1 + sum alpha_n phi_n].
struct InvariantExpansion {
  const SpectralProfile* profile = nullptr;
  double epsilon = 0.0, rho = 0.0;
  Delta1Solution delta1;
  std::vector<double> alpha1_slice;               // per slice
  std::vector<std::vector<double>> alpha_perp;    // [K][n_max+1]
  double normalization = 1.0;
  bool negative_density = false;
  bool truncation_warning = false;

  /// Unnormalised slice density at a profile slice index.
  double raw_at_slice(std::size_t k, double x) const;
  /// Normalised density, periodic linear interpolation between slices.
  double pi(double x, double y) const;
  /// Relative density Phi = pi / pi0 at a slice.
  double phi_ratio_at_slice(std::size_t k, double x) const;
};

struct AssembleOptions {
  Delta1Options delta1;
  bool refine_alpha = false;
  bool second_order = false;  // use the rho^2 > 0 collocation solve for delta1
};

InvariantExpansion assemble_expansion(const SpectralProfile& profile, double epsilon,
                                      double rho, const AssembleOptions& opts = {});

double assemble_pi(const InvariantExpansion& expansion, double x, double y);

}  // namespace oscwell
