#include "fusion/ic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

namespace fusion {

namespace {

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

IcOperatingPoint ic_probabilities(const ChannelRealization& channel, double gamma,
                                  const SensorEnsemble& ensemble, double sigma_w2) {
  const int k = channel.k();
  if (k > 20)
    throw CapabilityError("ic_probabilities: exact mixture limited to K <= 20, got K = " +
                          std::to_string(k));
  if (ensemble.k() != k) throw DomainError("ic_probabilities: ensemble K != channel K");
  if (!(sigma_w2 > 0.0)) throw DomainError("ic_probabilities: sigma_w2 must be > 0");
  if (channel.z_norm2 <= 0.0)
    throw DomainError("ic_probabilities: degenerate channel, |z_mrc| = 0");

  // Component means are Re(z^H H x) = sum_k a_k x_k with a real.
  std::vector<double> a(static_cast<std::size_t>(k), 0.0);
  for (int c = 0; c < k; ++c) {
    cdouble acc{0.0, 0.0};
    for (int r = 0; r < channel.n(); ++r)
      acc += std::conj(channel.z_mrc[static_cast<std::size_t>(r)]) * channel.h(r, c);
    a[static_cast<std::size_t>(c)] = acc.real();
  }
  const double sigma = std::sqrt(0.5 * sigma_w2) * std::sqrt(channel.z_norm2);

  double mean = 0.0;  // x = -1_K
  for (double v : a) mean -= v;

  double pf0 = 0.0, pd0 = 0.0;
  const std::uint32_t count = 1u << k;
  std::uint32_t gray = 0;
  for (std::uint32_t i = 0;; ++i) {
    const double tail = q_function((gamma - mean) / sigma);
    const double w0 = ensemble.joint_weight(gray, Hypothesis::H0);
    const double w1 = ensemble.joint_weight(gray, Hypothesis::H1);
    pf0 += w0 * tail;
    pd0 += w1 * tail;
    if (i + 1 == count) break;
    const int b = std::countr_zero(i + 1);
    const std::uint32_t next = gray ^ (1u << b);
    mean += (next & (1u << b)) ? 2.0 * a[static_cast<std::size_t>(b)]
                               : -2.0 * a[static_cast<std::size_t>(b)];
    gray = next;
  }
  return {gamma, clamp01(pf0), clamp01(pd0)};
}

double approx_threshold(double z_norm2, int k, double sigma_w2, double pf,
                        double target_pf0) {
  if (!(z_norm2 >= 0.0)) throw DomainError("approx_threshold: |z|^2 must be >= 0");
  if (k < 1) throw DomainError("approx_threshold: K must be >= 1");
  if (!(pf > 0.0 && pf < 1.0)) throw DomainError("approx_threshold: pf must lie in (0, 1)");
  if (!(target_pf0 > 0.0 && target_pf0 < 1.0))
    throw DomainError("approx_threshold: target must lie in (0, 1)");
  const double delta = 2.0 * pf - 1.0;
  const double z_norm = std::sqrt(z_norm2);
  return q_inverse(target_pf0) *
             std::sqrt(((1.0 - delta * delta) * static_cast<double>(k) + sigma_w2) / 2.0) *
             z_norm +
         delta * z_norm2;
}

IcOperatingPoint large_array_probabilities(const CountLaw& law_h0, const CountLaw& law_h1,
                                           int k, int n, double sigma_w2, double gamma) {
  if (law_h0.k() != k || law_h1.k() != k)
    throw DomainError("large_array_probabilities: count law size != K + 1");
  if (n < 1) throw DomainError("large_array_probabilities: N must be >= 1");
  if (!(sigma_w2 > 0.0)) throw DomainError("large_array_probabilities: sigma_w2 must be > 0");
  const double sigma = std::sqrt(0.5 * sigma_w2 * static_cast<double>(n) *
                                 static_cast<double>(k));
  double pf0 = 0.0, pd0 = 0.0;
  for (int ell = 0; ell <= k; ++ell) {
    const double mean = static_cast<double>(2 * ell - k) * static_cast<double>(n);
    const double tail = q_function((gamma - mean) / sigma);
    pf0 += law_h0[ell] * tail;
    pd0 += law_h1[ell] * tail;
  }
  return {gamma, clamp01(pf0), clamp01(pd0)};
}

}  // namespace fusion
