#pragma once

#include <string>
#include <vector>

#include "oscwell/jump.hpp"

namespace oscwell {

struct Prediction {
  double value = 0.0;          // predicted mean transition time, rescaled clock
  std::string law;             // static-ek | fast-forcing | general-equilibrium | laplace-peak
  std::string regime;          // from classify_regime
  double error_envelope = 0.0; // evaluated error-term scale (unit constants)
  bool valid = false;          // epsilon inside the admissible window
  bool low_confidence = false; // set in the intermediate regime
  double extra_factor = 0.0;   // laplace-peak factor relative to the frozen law
  std::vector<double> nu_y;    // general-equilibrium: grid for nu_AB density
  std::vector<double> nu_density;
};

/// Static Eyring-Kramers law 2 pi / (omega0 omega_-) exp(2 h_-/sigma^2).
double ek_static(const WellGeometry& geometry, double sigma);

/// Fast-forcing law eps / <r_->, with the evaluated error envelope and the
/// admissible window <lambda1> << eps << <lambda1>^{1/4}.
Prediction ek_fast_forcing(const RateProfile& profile);

/// Laplace evaluation of eps / <r_-> around the nondegenerate minimum y* of
/// h_-(y): the frozen law at y* times sqrt(h_-''(y*)) / (sigma sqrt(pi)).
/// Throws NoInteriorPeak when h_- is flat.
Prediction ek_laplace_peak(const RateProfile& profile, double sigma);

/// Equilibrium-measure-averaged law 2 eps (1 - <delta1>) / <lambda1 (1 - A delta1)>,
/// with the approximate nu_AB density emitted alongside.
Prediction general_equilibrium_time(const RateProfile& profile,
                                    const std::function<double(double)>& delta1);

struct RegimeInfo {
  std::string label;  // super-adiabatic | intermediate | fast-forcing-strong | fast-forcing-weak
  double thr_exp_hmax = 0.0;   // e^{-2 h^max / sigma^2}
  double thr_exp_hmin = 0.0;   // e^{-2 h^min / sigma^2}
  double sigma2 = 0.0;
  double avg_lambda1_quarter = 0.0;  // <lambda1>^{1/4}
  double min_lambda1 = 0.0, max_lambda1 = 0.0, avg_lambda1 = 0.0;
  double slack = 2.0;
  bool low_confidence = false;  // intermediate regime
};

/// Labels the (epsilon, sigma) point by comparing eps against the
/// instantaneous rates, with a reported slack factor.
RegimeInfo classify_regime(const RateProfile& profile, double epsilon, double sigma);

}  // namespace oscwell
