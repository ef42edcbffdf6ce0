#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "oscwell/numerics.hpp"
#include "oscwell/potential.hpp"
#include "oscwell/spectral.hpp"
#include "oscwell/stats.hpp"

namespace oscwell {

/// Rates of the time-dependent two-state reduction on the circle, with
/// periodic cubic interpolation (in log space, so rates stay positive) and
/// precomputed cumulative integrals.
class RateProfile {
 public:
  /// Builds Kramers rates from the model geometry on a uniform y grid.
  static RateProfile from_model(const PotentialModel& model, double sigma, double epsilon,
                                std::size_t y_points = 64);
  /// Same, but lambda1 taken from the slice summaries (e.g. numerical lambda1)
  /// instead of r_- + r_+.
  static RateProfile from_sweep(const std::vector<SliceSummary>& rows, double epsilon,
                                bool numeric_lambda1 = false,
                                double sigma = std::numeric_limits<double>::quiet_NaN());
  /// Synthetic profile from positive rate functions (test harness).
  static RateProfile from_functions(const std::function<double(double)>& r_minus,
                                    const std::function<double(double)>& r_plus,
                                    double epsilon, std::size_t y_points = 256);

  double epsilon() const { return epsilon_; }
  double sigma() const { return sigma_; }

  double r_minus(double y) const { return std::exp(log_rm_(y)); }
  double r_plus(double y) const { return std::exp(log_rp_(y)); }
  double lambda1(double y) const { return r_minus(y) + r_plus(y); }
  double a(double y) const {
    const double rm = r_minus(y), rp = r_plus(y);
    return (rm - rp) / (rm + rp);
  }

  /// Cumulative integrals with exact periodic extension.
  double big_lambda(double y1, double y0) const { return cum_lambda_.integral(y0, y1); }
  double big_r_minus(double y1, double y0) const { return cum_rm_.integral(y0, y1); }
  double big_r_plus(double y1, double y0) const { return cum_rp_.integral(y0, y1); }

  double avg_lambda1() const { return cum_lambda_.total(); }
  double avg_r_minus() const { return cum_rm_.total(); }
  double avg_r_plus() const { return cum_rp_.total(); }

  const CumulativePeriodic& cum_lambda() const { return cum_lambda_; }
  const CumulativePeriodic& cum_r_minus() const { return cum_rm_; }
  const CumulativePeriodic& cum_r_plus() const { return cum_rp_; }

  /// Barrier summary carried along for the predictor; NaN for synthetic profiles.
  std::shared_ptr<const GeometrySweep> geometry() const { return geometry_; }
  void set_geometry(std::shared_ptr<const GeometrySweep> g) { geometry_ = std::move(g); }

 private:
  RateProfile() = default;
  void finalize();

  double epsilon_ = 0.0;
  double sigma_ = std::numeric_limits<double>::quiet_NaN();
  PeriodicSpline log_rm_, log_rp_;
  CumulativePeriodic cum_lambda_, cum_rm_, cum_rp_;
  std::shared_ptr<const GeometrySweep> geometry_;
};

/// Periodic occupation asymmetry delta(y) with the recorded ODE residual.
struct JumpSolution {
  std::vector<double> y;
  std::vector<double> delta;
  std::vector<double> p_minus, p_plus;  // = (1 -+ delta)/2 for the periodic solution
  double residual_sup = 0.0;            // sup |eps delta' + lambda1 (delta - A)|
};

JumpSolution delta_periodic(const RateProfile& profile, std::size_t n_out = 512);

/// Closed-form occupation probabilities from an initial condition at y0.
std::pair<double, double> occupation(const RateProfile& profile, double p_plus_0, double y0,
                                     double y);

/// Mean absorption time of the - state into + (rates r_-/eps) from the
/// closed-form geometric-series representation; exact for constant rates.
double mean_jump_time(const RateProfile& profile, double y0);
/// Mirrored formula for the + -> - transition.
double mean_jump_time_from_plus(const RateProfile& profile, double y0);

/// Exact inversion sampling of the absorbing chain's first-passage law.
HittingStats simulate_jump(const RateProfile& profile, double y0, std::uint64_t seed,
                           std::size_t n_samples);

/// Sampled absorption times (the raw draws behind simulate_jump).
std::vector<double> simulate_jump_samples(const RateProfile& profile, double y0,
                                          std::uint64_t seed, std::size_t n_samples);

}  // namespace oscwell
