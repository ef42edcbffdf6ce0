#pragma once

#include <utility>
#include <vector>

#include "oscwell/invariant.hpp"

namespace oscwell {

/// Transition sets A = {x <= a(y)}, B = {x >= b(y)} with
/// a(y) = x*_-(y) + rho_hat, b(y) = x*_+(y) - rho_hat.
struct TransitionSets {
  double rho_hat = 0.3;
  PeriodicSpline a_of_y, b_of_y;
};
TransitionSets make_transition_sets(const GeometrySweep& geometry, double rho_hat = 0.3);

/// C0 = <lambda1 (1 - A delta1)> / (4 eps).
double reference_C0(const RateProfile& profile, const std::function<double(double)>& delta1);

/// Static committor surrogates on one slice, restricted to [a(y), b(y)]:
/// h~0 from exp(2 V0/sigma^2) and its adjoint variant weighted by 1/Phi^2.
struct TildeCommittors {
  std::vector<double> x;
  std::vector<double> h0, h0_star;
  double log_n = 0.0, log_n_star = 0.0;
};
TildeCommittors tilde_committors(const TransitionSets& sets, const FrozenSlice& slice,
                                 const InvariantExpansion& expansion);

struct DefectiveBound {
  double value = 0.0;
  double defect = 0.0;  // magnitude of the non-divergence-free correction
};

/// Dirichlet functional of the test function h~0 (upper bound on cap(A,B)).
DefectiveBound dirichlet_upper(const TransitionSets& sets, const SpectralProfile& profile,
                               const InvariantExpansion& expansion);

/// Thomson functional of the unit-flux test flow (lower bound on cap(A,B)).
DefectiveBound thomson_lower(const TransitionSets& sets, const SpectralProfile& profile,
                             const InvariantExpansion& expansion);

struct CapacityEstimate {
  double c0 = 0.0;
  double dirichlet_upper = 0.0;
  double thomson_lower = 0.0;
  double defect_upper = 0.0;
  double defect_lower = 0.0;
  double rho_hat = 0.0, sigma = 0.0, epsilon = 0.0;
};

/// Full bracket around C0 for an assembled expansion.
CapacityEstimate estimate_capacity(const SpectralProfile& profile,
                                   const InvariantExpansion& expansion, double rho_hat = 0.3);

}  // namespace oscwell
