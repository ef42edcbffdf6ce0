#pragma once

#include <cstddef>
#include <vector>

namespace oscwell {

/// First-passage sample summary.
struct HittingStats {
  std::size_t n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::size_t censored = 0;
  double ks_stat = 0.0;  // Kolmogorov statistic of tau/mean against Exp(1)
  bool flagged = false;  // censored fraction at or above 1%
};

/// Summary over completed samples; `censored` counts paths cut at max_time.
HittingStats summarize_hitting(const std::vector<double>& samples, std::size_t censored,
                               bool with_ks = true);

}  // namespace oscwell
