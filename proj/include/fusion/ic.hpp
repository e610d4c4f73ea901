#pragma once

#include "fusion/channel.hpp"
#include "fusion/core.hpp"

namespace fusion {

/// Instantaneous-channel operating point at a given threshold.
struct IcOperatingPoint {
  double gamma;
  double pf0;
  double pd0;
};

/// Exact conditional false-alarm and detection probabilities for one channel
/// realization: a 2^K Gaussian-mixture tail sum. K <= 20. Throws DomainError
/// on a degenerate channel (|z| = 0).
IcOperatingPoint ic_probabilities(const ChannelRealization& channel, double gamma,
                                  const SensorEnsemble& ensemble, double sigma_w2);

/// Low-SNR large-system threshold for a target false-alarm rate. Needs only
/// |z|^2, not the full channel. The accuracy guarantee assumes decisions
/// uncorrelated under H0 with a common per-sensor rate pf.
double approx_threshold(double z_norm2, int k, double sigma_w2, double pf,
                        double target_pf0);

/// Large-antenna-array approximation: a (K+1)-component mixture driven only
/// by the count laws, independent of the channel realization.
IcOperatingPoint large_array_probabilities(const CountLaw& law_h0, const CountLaw& law_h1,
                                           int k, int n, double sigma_w2, double gamma);

}  // namespace fusion
