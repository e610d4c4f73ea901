#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fusion/channel.hpp"
#include "fusion/core.hpp"

namespace fusion {

/// A Monte Carlo probability estimate with its binomial standard error.
struct McEstimate {
  double value;
  double stderr_;
  std::uint64_t runs;
  std::uint64_t seed;
};

struct McRocPoint {
  double gamma;
  McEstimate pf0;
  McEstimate pd0;
};

/// Channel-averaged operating points by simulation. Each replication draws a
/// fresh (H, x, w) triple per hypothesis and scores the whole gamma grid with
/// it. Replications run on counter-based substreams of `seed`, so the result
/// is bit-identical for any worker count.
std::vector<McRocPoint> mc_ca_probabilities(const SystemConfig& config,
                                            const SensorEnsemble& ensemble,
                                            std::span<const double> gammas,
                                            std::uint64_t runs, std::uint64_t seed,
                                            unsigned workers = 0);

/// How the per-channel threshold is chosen in the false-alarm histogram run.
enum class IcThresholdRule {
  LowSnrApprox,    // closed-form approximate threshold from |z|^2
  ExactInversion,  // bisect the exact 2^K mixture, K <= 12
};

struct IcFalseAlarmHistogram {
  std::vector<double> edges;          // bins + 1 entries
  std::vector<std::uint64_t> counts;  // per bin; sums to channel_draws
  double mean;                        // of per-channel estimates
  double variance;                    // unbiased, across channels
  double target_pf0;
  std::vector<double> per_channel;    // realized pf0 per channel draw
};

/// Per-channel realized false-alarm rate at the chosen threshold: sample H,
/// pick gamma for the target, estimate P(Lambda > gamma | H, H0) empirically.
/// Requires an iid ensemble (the threshold rule consumes the common pf).
IcFalseAlarmHistogram mc_ic_false_alarm_histogram(
    const SystemConfig& config, const SensorEnsemble& ensemble, double target_pf0,
    std::uint64_t channel_draws, std::uint64_t noise_draws, std::uint64_t seed,
    IcThresholdRule rule = IcThresholdRule::LowSnrApprox, int bins = 40,
    unsigned workers = 0);

/// Rank-statistic AUC estimate: P(Lambda|H1 > Lambda|H0) over paired
/// independent draws, ties scored one half.
McEstimate mc_auc(const SystemConfig& config, const SensorEnsemble& ensemble,
                  std::uint64_t runs, std::uint64_t seed, unsigned workers = 0);

namespace mc {

/// Replications are processed in fixed blocks of this many substreams; the
/// block layout (not the worker count) defines the aggregation order.
inline constexpr std::uint64_t kBlockSize = 4096;

unsigned resolve_workers(unsigned workers);

/// Runs fn(block_index, first_rep, last_rep) over all blocks on `workers`
/// threads. fn must only write to state owned by its block index.
void run_blocks(std::uint64_t total, unsigned workers,
                const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn);

}  // namespace mc

}  // namespace fusion
