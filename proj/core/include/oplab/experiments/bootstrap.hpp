#pragma once

#include "oplab/rng.hpp"

#include <span>

namespace oplab::experiments {

struct BootstrapSummary {
  double mean = 0.0;
  // Standard deviation of the resampled means.
  double std_error = 0.0;
  // Percentile interval of the resampled means at the requested level.
  double ci_low = 0.0;
  double ci_high = 0.0;
  long n = 0;
};

// Nonparametric bootstrap of the sample mean.
BootstrapSummary bootstrap_mean(std::span<const double> sample, int resamples, double level, RngStream rng);

}  // namespace oplab::experiments
