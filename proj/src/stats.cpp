#include "oscwell/stats.hpp"

#include <cmath>

#include "oscwell/numerics.hpp"

namespace oscwell {

HittingStats summarize_hitting(const std::vector<double>& samples, std::size_t censored,
                               bool with_ks) {
  HittingStats out;
  out.n = samples.size();
  out.censored = censored;
  if (samples.empty()) return out;
  out.mean = kahan_sum(samples) / static_cast<double>(samples.size());
  double ss = 0.0;
  for (double x : samples) ss += (x - out.mean) * (x - out.mean);
  const double var = samples.size() > 1 ? ss / static_cast<double>(samples.size() - 1) : 0.0;
  out.stderr_ = std::sqrt(var / static_cast<double>(samples.size()));
  out.ci95_low = out.mean - 1.96 * out.stderr_;
  out.ci95_high = out.mean + 1.96 * out.stderr_;
  if (with_ks && out.mean > 0.0) {
    std::vector<double> scaled(samples);
    for (double& x : scaled) x /= out.mean;
    out.ks_stat = ks_statistic_exp1(std::move(scaled));
  }
  const std::size_t total = samples.size() + censored;
  out.flagged = total > 0 &&
                static_cast<double>(censored) >= 0.01 * static_cast<double>(total);
  return out;
}

}  // namespace oscwell
