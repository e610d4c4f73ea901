#include "fusion/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>

#include "fusion/ic.hpp"

namespace fusion {

namespace mc {

unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void run_blocks(std::uint64_t total, unsigned workers,
                const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn) {
  const std::uint64_t n_blocks = (total + kBlockSize - 1) / kBlockSize;
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), n_blocks));
  if (n_threads <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b)
      fn(b, b * kBlockSize, std::min(total, (b + 1) * kBlockSize));
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&]() {
      try {
        for (;;) {
          const std::uint64_t b = next.fetch_add(1);
          if (b >= n_blocks || failed.load()) return;
          fn(b, b * kBlockSize, std::min(total, (b + 1) * kBlockSize));
        }
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mc

namespace {

McEstimate proportion_estimate(std::uint64_t hits, std::uint64_t runs, std::uint64_t seed) {
  const double p = static_cast<double>(hits) / static_cast<double>(runs);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(runs)), runs, seed};
}

double draw_mrc_statistic(Rng& rng, const SystemConfig& config,
                          const SensorEnsemble& ensemble, Hypothesis h) {
  const ChannelRealization channel = sample_channel(rng, config.n, config.k);
  const std::vector<std::int8_t> x = sample_decisions(rng, ensemble, h);
  const ReceivedVector y = sample_observation(rng, channel, x, config.sigma_w2);
  return mrc_statistic(channel, y);
}

/// Bisect the exact mixture false-alarm rate in gamma. K <= 12 keeps the
/// 2^K sum per evaluation cheap.
double exact_ic_threshold(const ChannelRealization& channel, const SensorEnsemble& ensemble,
                          double sigma_w2, double target) {
  if (channel.k() > 12)
    throw CapabilityError("mc_ic_false_alarm_histogram: exact inversion limited to K <= 12");
  // Mixture means live in [-sum|a|, sum|a|]; pad by 10 component sigmas.
  double reach = 0.0;
  for (int c = 0; c < channel.k(); ++c) {
    cdouble acc{0.0, 0.0};
    for (int r = 0; r < channel.n(); ++r)
      acc += std::conj(channel.z_mrc[static_cast<std::size_t>(r)]) * channel.h(r, c);
    reach += std::abs(acc.real());
  }
  const double pad = 10.0 * std::sqrt(0.5 * sigma_w2 * channel.z_norm2);
  double lo = -reach - pad, hi = reach + pad;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double p = ic_probabilities(channel, mid, ensemble, sigma_w2).pf0;
    if (std::abs(p - target) < 1e-9) return mid;
    if (p > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<McRocPoint> mc_ca_probabilities(const SystemConfig& config,
                                            const SensorEnsemble& ensemble,
                                            std::span<const double> gammas,
                                            std::uint64_t runs, std::uint64_t seed,
                                            unsigned workers) {
  if (runs < 100) throw DomainError("mc_ca_probabilities: needs at least 100 runs");
  if (gammas.empty()) throw DomainError("mc_ca_probabilities: empty gamma grid");
  if (ensemble.k() != config.k)
    throw DomainError("mc_ca_probabilities: ensemble K != config K");

  const std::size_t g = gammas.size();
  const std::uint64_t n_blocks = (runs + mc::kBlockSize - 1) / mc::kBlockSize;
  std::vector<std::vector<std::uint64_t>> h0_blocks(n_blocks), h1_blocks(n_blocks);

  mc::run_blocks(runs, workers, [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
    std::vector<std::uint64_t> h0(g, 0), h1(g, 0);
    for (std::uint64_t rep = first; rep < last; ++rep) {
      Rng rng = Rng::substream(seed, rep);
      const double lambda0 = draw_mrc_statistic(rng, config, ensemble, Hypothesis::H0);
      const double lambda1 = draw_mrc_statistic(rng, config, ensemble, Hypothesis::H1);
      for (std::size_t j = 0; j < g; ++j) {
        if (lambda0 > gammas[j]) ++h0[j];
        if (lambda1 > gammas[j]) ++h1[j];
      }
    }
    h0_blocks[b] = std::move(h0);
    h1_blocks[b] = std::move(h1);
  });

  std::vector<McRocPoint> out;
  out.reserve(g);
  for (std::size_t j = 0; j < g; ++j) {
    std::uint64_t c0 = 0, c1 = 0;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
      c0 += h0_blocks[b][j];
      c1 += h1_blocks[b][j];
    }
    out.push_back({gammas[j], proportion_estimate(c0, runs, seed),
                   proportion_estimate(c1, runs, seed)});
  }
  return out;
}

IcFalseAlarmHistogram mc_ic_false_alarm_histogram(
    const SystemConfig& config, const SensorEnsemble& ensemble, double target_pf0,
    std::uint64_t channel_draws, std::uint64_t noise_draws, std::uint64_t seed,
    IcThresholdRule rule, int bins, unsigned workers) {
  if (channel_draws < 100 || noise_draws < 100)
    throw DomainError("mc_ic_false_alarm_histogram: needs >= 100 draws on both axes");
  if (!(target_pf0 > 0.0 && target_pf0 < 1.0))
    throw DomainError("mc_ic_false_alarm_histogram: target must lie in (0, 1)");
  if (ensemble.mode() != SensorEnsemble::Mode::Iid)
    throw CapabilityError(
        "mc_ic_false_alarm_histogram: threshold rule needs an iid ensemble (common pf)");
  if (bins < 1) throw DomainError("mc_ic_false_alarm_histogram: bins must be >= 1");

  std::vector<double> per_channel(channel_draws, 0.0);
  mc::run_blocks(channel_draws, workers,
                 [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t ch = first; ch < last; ++ch) {
      Rng rng = Rng::substream(seed, ch);
      const ChannelRealization channel = sample_channel(rng, config.n, config.k);
      const double gamma =
          rule == IcThresholdRule::LowSnrApprox
              ? approx_threshold(channel.z_norm2, config.k, config.sigma_w2,
                                 ensemble.pf(), target_pf0)
              : exact_ic_threshold(channel, ensemble, config.sigma_w2, target_pf0);
      std::uint64_t hits = 0;
      for (std::uint64_t d = 0; d < noise_draws; ++d) {
        const std::vector<std::int8_t> x = sample_decisions(rng, ensemble, Hypothesis::H0);
        const ReceivedVector y = sample_observation(rng, channel, x, config.sigma_w2);
        if (mrc_statistic(channel, y) > gamma) ++hits;
      }
      per_channel[ch] = static_cast<double>(hits) / static_cast<double>(noise_draws);
    }
  });

  IcFalseAlarmHistogram out;
  out.target_pf0 = target_pf0;
  double mean = 0.0;
  double max_p = 0.0;
  for (double p : per_channel) {
    mean += p;
    max_p = std::max(max_p, p);
  }
  mean /= static_cast<double>(channel_draws);
  double ss = 0.0;
  for (double p : per_channel) ss += (p - mean) * (p - mean);
  out.mean = mean;
  out.variance = channel_draws > 1 ? ss / static_cast<double>(channel_draws - 1) : 0.0;

  const double top = max_p > 0.0 ? max_p * (1.0 + 1e-9) : target_pf0 * 4.0;
  out.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i)
    out.edges[static_cast<std::size_t>(i)] = top * static_cast<double>(i) / bins;
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double p : per_channel) {
    int idx = static_cast<int>(p / top * bins);
    idx = std::min(bins - 1, std::max(0, idx));
    ++out.counts[static_cast<std::size_t>(idx)];
  }
  out.per_channel = std::move(per_channel);
  return out;
}

McEstimate mc_auc(const SystemConfig& config, const SensorEnsemble& ensemble,
                  std::uint64_t runs, std::uint64_t seed, unsigned workers) {
  if (runs < 1000) throw DomainError("mc_auc: needs at least 1000 runs");
  if (ensemble.k() != config.k) throw DomainError("mc_auc: ensemble K != config K");

  const std::uint64_t n_blocks = (runs + mc::kBlockSize - 1) / mc::kBlockSize;
  std::vector<std::uint64_t> halves(n_blocks, 0);  // 2 per win, 1 per tie

  mc::run_blocks(runs, workers, [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
    std::uint64_t acc = 0;
    for (std::uint64_t rep = first; rep < last; ++rep) {
      Rng rng = Rng::substream(seed, rep);
      const double lambda0 = draw_mrc_statistic(rng, config, ensemble, Hypothesis::H0);
      const double lambda1 = draw_mrc_statistic(rng, config, ensemble, Hypothesis::H1);
      if (lambda1 > lambda0) acc += 2;
      else if (lambda1 == lambda0) acc += 1;
    }
    halves[b] = acc;
  });

  std::uint64_t total = 0;
  for (std::uint64_t v : halves) total += v;
  const double p = static_cast<double>(total) / (2.0 * static_cast<double>(runs));
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(runs)), runs, seed};
}

}  // namespace fusion
