#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "fusion/channel.hpp"
#include "fusion/rng.hpp"

namespace testutil {

/// Independent Q-function oracle: composite Simpson integration of the
/// standard normal density over [x, x+48] in long double.
inline long double q_oracle(long double x) {
  const long double upper = x + 48.0L;
  const int steps = 200000;  // even
  const long double h = (upper - x) / steps;
  const long double inv_sqrt_2pi = 0.398942280401432677939946059934L;
  auto pdf = [&](long double t) { return inv_sqrt_2pi * std::exp(-0.5L * t * t); };
  long double acc = pdf(x) + pdf(upper);
  for (int i = 1; i < steps; ++i)
    acc += pdf(x + h * i) * ((i % 2) ? 4.0L : 2.0L);
  return acc * h / 3.0L;
}

/// Mean and unbiased variance with standard errors of each.
struct SampleStats {
  double mean;
  double variance;
  double stderr_mean;
  double stderr_variance;
};

inline SampleStats sample_stats(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double variance = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  return {mean, variance, std::sqrt(variance / n),
          std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

/// One full (H, x, w) -> Lambda_MRC draw.
inline double draw_statistic(fusion::Rng& rng, int n, int k,
                             const fusion::SensorEnsemble& ensemble,
                             fusion::Hypothesis h, double sigma_w2) {
  const fusion::ChannelRealization channel = fusion::sample_channel(rng, n, k);
  const auto x = fusion::sample_decisions(rng, ensemble, h);
  const fusion::ReceivedVector y = fusion::sample_observation(rng, channel, x, sigma_w2);
  return fusion::mrc_statistic(channel, y);
}

inline double db(double v) { return std::pow(10.0, v / 10.0); }

}  // namespace testutil
