#include "fusion/channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fusion {

ChannelRealization::ChannelRealization(ComplexMatrix matrix) : h(std::move(matrix)) {
  z_mrc.assign(static_cast<std::size_t>(h.rows()), cdouble{0.0, 0.0});
  for (int r = 0; r < h.rows(); ++r) {
    cdouble acc{0.0, 0.0};
    for (int c = 0; c < h.cols(); ++c) acc += h(r, c);
    z_mrc[static_cast<std::size_t>(r)] = acc;
  }
  z_norm2 = 0.0;
  for (const cdouble& z : z_mrc) z_norm2 += std::norm(z);
}

ChannelRealization sample_channel(Rng& rng, int n, int k) {
  if (n < 1 || k < 1) throw DomainError("sample_channel: N, K must be >= 1");
  ComplexMatrix h(n, k);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < k; ++c) h(r, c) = rng.complex_normal(1.0);
  return ChannelRealization(std::move(h));
}

std::vector<std::int8_t> sample_decisions(Rng& rng, const SensorEnsemble& ensemble,
                                          Hypothesis h) {
  const int k = ensemble.k();
  std::vector<std::int8_t> x(static_cast<std::size_t>(k), -1);
  switch (ensemble.mode()) {
    case SensorEnsemble::Mode::Iid: {
      const double p = ensemble.symbol_prob(h);
      for (int i = 0; i < k; ++i)
        if (rng.bernoulli(p)) x[static_cast<std::size_t>(i)] = 1;
      return x;
    }
    case SensorEnsemble::Mode::CountPmf: {
      const CountLaw law = ensemble.count_law(h);
      const double u = rng.uniform01();
      int ell = 0;
      double acc = 0.0;
      for (; ell < k; ++ell) {
        acc += law[ell];
        if (u < acc) break;
      }
      // Partial Fisher-Yates: first `ell` slots of a shuffled index array.
      std::vector<int> idx(static_cast<std::size_t>(k));
      std::iota(idx.begin(), idx.end(), 0);
      for (int i = 0; i < ell; ++i) {
        const int j = i + static_cast<int>(rng.uniform01() * static_cast<double>(k - i));
        std::swap(idx[static_cast<std::size_t>(i)],
                  idx[static_cast<std::size_t>(std::min(j, k - 1))]);
        x[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
      }
      return x;
    }
    case SensorEnsemble::Mode::JointPmf: {
      const auto& cdf = ensemble.joint_cdf(h);
      const double u = rng.uniform01();
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const std::uint32_t mask = static_cast<std::uint32_t>(
          std::min<std::ptrdiff_t>(it - cdf.begin(),
                                   static_cast<std::ptrdiff_t>(cdf.size()) - 1));
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) x[static_cast<std::size_t>(i)] = 1;
      return x;
    }
  }
  throw Error("sample_decisions: unreachable");
}

ReceivedVector sample_observation(Rng& rng, const ChannelRealization& channel,
                                  std::span<const std::int8_t> x, double sigma_w2) {
  if (static_cast<int>(x.size()) != channel.k())
    throw DomainError("sample_observation: decision vector length != K");
  if (!(sigma_w2 >= 0.0)) throw DomainError("sample_observation: sigma_w2 < 0");
  ReceivedVector out;
  out.y.assign(static_cast<std::size_t>(channel.n()), cdouble{0.0, 0.0});
  for (int r = 0; r < channel.n(); ++r) {
    cdouble acc{0.0, 0.0};
    for (int c = 0; c < channel.k(); ++c) {
      const double sign = static_cast<double>(x[static_cast<std::size_t>(c)]);
      acc += channel.h(r, c) * sign;
    }
    out.y[static_cast<std::size_t>(r)] = acc + rng.complex_normal(sigma_w2);
  }
  return out;
}

double mrc_statistic(const ChannelRealization& channel, const ReceivedVector& y) {
  if (y.y.size() != channel.z_mrc.size())
    throw DomainError("mrc_statistic: observation length != N");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.y.size(); ++i)
    acc += std::real(std::conj(channel.z_mrc[i]) * y.y[i]);
  return acc;
}

double llr_statistic(const ChannelRealization& channel, const ReceivedVector& y,
                     const SensorEnsemble& ensemble, double sigma_w2) {
  const int k = channel.k();
  if (k > 20)
    throw CapabilityError("llr_statistic: exact LLR limited to K <= 20, got K = " +
                          std::to_string(k));
  if (ensemble.k() != k) throw DomainError("llr_statistic: ensemble K != channel K");
  if (y.y.size() != static_cast<std::size_t>(channel.n()))
    throw DomainError("llr_statistic: observation length != N");
  if (!(sigma_w2 > 0.0)) throw DomainError("llr_statistic: sigma_w2 must be > 0");

  const int n = channel.n();
  const std::uint32_t count = 1u << k;

  // Gray-code walk over decision vectors: flipping sensor b moves the
  // residual by -+ 2 h_col(b), so each step costs O(N).
  std::vector<cdouble> residual(static_cast<std::size_t>(n));
  std::vector<std::int8_t> x(static_cast<std::size_t>(k), -1);
  for (int r = 0; r < n; ++r) {
    cdouble acc = y.y[static_cast<std::size_t>(r)];
    for (int c = 0; c < k; ++c) acc += channel.h(r, c);  // minus H * (-1_K)
    residual[static_cast<std::size_t>(r)] = acc;
  }

  // log-sum-exp accumulators per hypothesis
  double max0 = -std::numeric_limits<double>::infinity();
  double max1 = max0;
  std::vector<double> exponent(count);
  std::vector<double> w0(count), w1(count);

  std::uint32_t gray = 0;
  for (std::uint32_t i = 0;; ++i) {
    double norm2 = 0.0;
    for (const cdouble& r : residual) norm2 += std::norm(r);
    const double e = -norm2 / sigma_w2;
    exponent[gray] = e;
    w0[gray] = ensemble.joint_weight(gray, Hypothesis::H0);
    w1[gray] = ensemble.joint_weight(gray, Hypothesis::H1);
    if (w0[gray] > 0.0) max0 = std::max(max0, e);
    if (w1[gray] > 0.0) max1 = std::max(max1, e);
    if (i + 1 == count) break;
    const int b = std::countr_zero(i + 1);
    const std::uint32_t next = gray ^ (1u << b);
    const double step = (next & (1u << b)) ? -2.0 : 2.0;  // x_b: -1->+1 means y-Hx loses 2 h_b
    for (int r = 0; r < n; ++r)
      residual[static_cast<std::size_t>(r)] += step * channel.h(r, b);
    gray = next;
  }

  if (!std::isfinite(max0) || !std::isfinite(max1))
    throw DomainError("llr_statistic: a hypothesis law has empty support");

  double sum0 = 0.0, sum1 = 0.0;
  for (std::uint32_t m = 0; m < count; ++m) {
    if (w0[m] > 0.0) sum0 += w0[m] * std::exp(exponent[m] - max0);
    if (w1[m] > 0.0) sum1 += w1[m] * std::exp(exponent[m] - max1);
  }
  return (max1 + std::log(sum1)) - (max0 + std::log(sum0));
}

}  // namespace fusion
