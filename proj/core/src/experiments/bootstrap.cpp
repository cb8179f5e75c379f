#include "oplab/experiments/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oplab::experiments {

namespace {

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

BootstrapSummary bootstrap_mean(std::span<const double> sample, int resamples, double level, RngStream rng) {
  if (resamples < 1) throw std::invalid_argument("bootstrap_mean: resamples must be positive");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap_mean: level must lie in (0, 1)");
  BootstrapSummary s;
  s.n = static_cast<long>(sample.size());
  if (sample.empty()) return s;
  double total = 0.0;
  for (double v : sample) total += v;
  s.mean = total / static_cast<double>(sample.size());

  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (double& m : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) acc += sample[rng.uniform_index(sample.size())];
    m = acc / static_cast<double>(sample.size());
  }
  double centre = 0.0;
  for (double m : means) centre += m;
  centre /= static_cast<double>(means.size());
  double ss = 0.0;
  for (double m : means) ss += (m - centre) * (m - centre);
  s.std_error = means.size() > 1 ? std::sqrt(ss / static_cast<double>(means.size() - 1)) : 0.0;
  std::sort(means.begin(), means.end());
  s.ci_low = quantile(means, (1.0 - level) / 2.0);
  s.ci_high = quantile(means, 1.0 - (1.0 - level) / 2.0);
  return s;
}

}  // namespace oplab::experiments
