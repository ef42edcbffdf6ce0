#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "oscwell/potential.hpp"

namespace oscwell {

/// Frozen-y slice: truncated domain, graded quadrature grid and geometry.
struct FrozenSlice {
  std::shared_ptr<const PotentialModel> model;
  double y = 0.0;
  double sigma = 0.0;
  double x_lo = 0.0, x_hi = 0.0;
  std::vector<double> x_grid;  // graded, strictly increasing, contains x*_-, x*_0, x*_+
  WellGeometry geom;
  double v_saddle = 0.0;  // V0 at the saddle
  double v_min = 0.0;     // min of V0 over the two well bottoms

  double v(double x) const { return model->v0(x, y); }
};

/// Domain [x_lo, x_hi] where 2 (V0 - min V0) / sigma^2 exceeds `threshold`,
/// maximised over a y sweep so all slices share one domain.
std::pair<double, double> truncated_domain(const PotentialModel& model, double sigma,
                                           std::size_t y_points = 32,
                                           double threshold = 60.0);

/// Builds the slice with a graded grid (node density ~ 1/(sigma + |x - x*|)).
FrozenSlice make_frozen_slice(std::shared_ptr<const PotentialModel> model, double y,
                              double sigma, std::size_t x_points = 2048,
                              std::optional<std::pair<double, double>> domain = {});

/// Partition function Z0 = int exp(-2 V0 / sigma^2) dx by adaptive quadrature
/// (relative error < 1e-9).
double partition_Z0(const FrozenSlice& slice);
double log_partition_Z0(const FrozenSlice& slice);

/// Static committor h0 and its normalisation on the slice grid.
struct CommittorTable {
  std::vector<double> x;  // nodes between x_minus and x_plus
  std::vector<double> h;  // h0 at nodes, 1 at x_minus, 0 at x_plus
  double log_n = 0.0;     // log of N = int exp(2 V0/sigma^2) over [x_-, x_+]

  double value(double x_query) const;  // clamped to 1 left / 0 right
};
CommittorTable committor_table(const FrozenSlice& slice);
double committor_h0(const FrozenSlice& slice, double x);

/// Frozen-slice Kramers data.
struct RateSlice {
  double z0 = 0.0;        // filled by spectral_sweep; NaN from kramers_rates alone
  double n_committor = 0.0;
  double r_minus = 0.0, r_plus = 0.0;
  double lambda1_kramers = 0.0;
  double a = 0.0, b = 1.0;
  double delta_bar = 0.0;
};
RateSlice kramers_rates(const WellGeometry& geometry, double sigma);

/// Z0 N lambda1 B^2 / (2 sigma^2), expected 1 + O(sigma^2).
double z0n_diagnostic(double z0, double n_committor, double lambda1, double b, double sigma);

/// Numerical eigenpairs of the conjugated Schrodinger operator on a uniform
/// grid: H = -(sigma^2/2) d2/dx2 + U0/(2 sigma^2), U0 = (Vx)^2 - sigma^2 Vxx,
/// discretised so the exact kernel mode e^{-V0/sigma^2} is preserved.
struct SpectralData {
  double y = 0.0, sigma = 0.0;
  std::vector<double> x;  // uniform grid
  double step = 0.0;
  std::vector<double> lambda;               // 0 = lambda0 < lambda1 < ...
  std::vector<std::vector<double>> psi;     // orthonormal w.r.t. step * sum
  std::vector<std::vector<double>> phi;     // phi_n = sqrt(Z0) e^{V/sigma^2} psi_n
  std::vector<std::vector<double>> pi;      // pi_n = e^{-V/sigma^2} psi_n / sqrt(Z0)
  double z0 = 0.0;
};
SpectralData eigen_solve(const FrozenSlice& slice, std::size_t n_max,
                         std::size_t n_nodes = 4096);

/// exp(DeltaBar/s^2) h0 - exp(-DeltaBar/s^2) (1 - h0); cross-check for phi_1.
double phi1_approx(const FrozenSlice& slice, double x);

/// f(n,m) = sigma^2 <d_y pi_m, phi_n>, g(n,m) = sigma^4 <d_yy pi_m, phi_n>,
/// by central differences in y with sign-aligned eigenfunctions.
struct MatrixElements {
  std::size_t n_max = 0;
  std::vector<std::vector<double>> f, g;  // (n_max+1) x (n_max+1)
};
MatrixElements matrix_elements(std::shared_ptr<const PotentialModel> model, double y,
                               double sigma, std::size_t n_max, double dy = 1e-3,
                               std::size_t n_nodes = 2048,
                               std::optional<std::pair<double, double>> domain = {});

/// Stencil-level variant; `minus` and `plus` must share center's grid and be
/// computed at y -+ dy. Signs of the outer slices are aligned to the center.
MatrixElements matrix_elements_from(const SpectralData& center, SpectralData& minus,
                                    SpectralData& plus, double dy);

/// Aligns the signs of `other`'s eigenfunctions to `ref` by maximal overlap;
/// throws SignAmbiguity below an overlap of 0.5.
void align_eigen_signs(const SpectralData& ref, SpectralData& other);

/// Saddle-centered Laplace reference integrals
///   I_n = int_{-delta}^{delta} x^n exp(2 V0(x*_0 + x)/sigma^2) dx  (gauge: V0(x*_0)=0)
///   J_n(x) = exp(-2 V0/sigma^2(x)) int_x^delta x1^n exp(2 V0/sigma^2) dx1.
double laplace_In(const FrozenSlice& slice, unsigned n, double delta);
double laplace_Jn(const FrozenSlice& slice, unsigned n, double x, double delta);

/// Alternative DeltaBar from the inner-product definition
/// <pi0, h0> = e^{-DeltaBar/s^2} / (2 cosh(DeltaBar/s^2)); diagnostic only.
double delta_bar_inner(const FrozenSlice& slice);

/// One row of the spectral sweep CSV.
struct SliceSummary {
  double y = 0.0;
  double z0 = 0.0, n_committor = 0.0;
  double r_minus = 0.0, r_plus = 0.0;
  double lambda1_kramers = 0.0, lambda1_numeric = 0.0;
  double a = 0.0, b = 1.0, delta_bar = 0.0;
};
std::vector<SliceSummary> spectral_sweep(std::shared_ptr<const PotentialModel> model,
                                         double sigma, std::size_t y_points,
                                         std::size_t x_points = 2048,
                                         bool with_numeric = true,
                                         std::size_t eigen_nodes = 2048);

}  // namespace oscwell
