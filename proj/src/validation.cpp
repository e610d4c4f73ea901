#include "fusion/validation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include "fusion/deflection.hpp"
#include "fusion/gc.hpp"
#include "fusion/ic.hpp"
#include "fusion/montecarlo.hpp"

namespace fusion {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return std::string(buf);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] =
        std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) / (count - 1));
  return out;
}

/// Empirical tail P(Lambda > gamma) for one fixed channel, fresh (x, w) per
/// draw, for all gammas at once.
std::vector<McEstimate> mc_fixed_channel_tail(const ChannelRealization& channel,
                                              const SensorEnsemble& ensemble,
                                              double sigma_w2, Hypothesis h,
                                              std::span<const double> gammas,
                                              std::uint64_t draws, std::uint64_t seed,
                                              unsigned workers) {
  const std::uint64_t n_blocks = (draws + mc::kBlockSize - 1) / mc::kBlockSize;
  std::vector<std::vector<std::uint64_t>> blocks(n_blocks);
  mc::run_blocks(draws, workers, [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
    std::vector<std::uint64_t> hits(gammas.size(), 0);
    for (std::uint64_t rep = first; rep < last; ++rep) {
      Rng rng = Rng::substream(seed, rep);
      const auto x = sample_decisions(rng, ensemble, h);
      const ReceivedVector y = sample_observation(rng, channel, x, sigma_w2);
      const double lambda = mrc_statistic(channel, y);
      for (std::size_t j = 0; j < gammas.size(); ++j)
        if (lambda > gammas[j]) ++hits[j];
    }
    blocks[b] = std::move(hits);
  });
  std::vector<McEstimate> out;
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    std::uint64_t total = 0;
    for (const auto& blk : blocks) total += blk[j];
    const double p = static_cast<double>(total) / static_cast<double>(draws);
    out.push_back({p, std::sqrt(p * (1.0 - p) / static_cast<double>(draws)), draws, seed});
  }
  return out;
}

/// Channel-averaged tail by clustered sampling: `channels` channel draws,
/// `draws` noise/decision draws each, cluster standard error across channels.
McEstimate mc_ca_clustered(const SystemConfig& config, const SensorEnsemble& ensemble,
                           Hypothesis h, double gamma, std::uint64_t channels,
                           std::uint64_t draws, std::uint64_t seed, unsigned workers) {
  std::vector<double> per_channel(channels, 0.0);
  mc::run_blocks(channels, workers, [&](std::uint64_t, std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t ch = first; ch < last; ++ch) {
      Rng rng = Rng::substream(seed, ch);
      const ChannelRealization channel = sample_channel(rng, config.n, config.k);
      std::uint64_t hits = 0;
      for (std::uint64_t d = 0; d < draws; ++d) {
        const auto x = sample_decisions(rng, ensemble, h);
        const ReceivedVector y = sample_observation(rng, channel, x, config.sigma_w2);
        if (mrc_statistic(channel, y) > gamma) ++hits;
      }
      per_channel[ch] = static_cast<double>(hits) / static_cast<double>(draws);
    }
  });
  double mean = 0.0;
  for (double p : per_channel) mean += p;
  mean /= static_cast<double>(channels);
  double ss = 0.0;
  for (double p : per_channel) ss += (p - mean) * (p - mean);
  const double sd = std::sqrt(ss / static_cast<double>(channels - 1));
  return {mean, sd / std::sqrt(static_cast<double>(channels)),
          channels * draws, seed};
}

// ---------------------------------------------------------------------------
// criterion 1: GC vs MC channel-averaged ROC
// ---------------------------------------------------------------------------
CheckResult check_roc_agreement(const ValidationOptions& opt) {
  const double snr_dbs[] = {5.0, 10.0, 15.0};
  const double pds[] = {0.5, 0.7};
  double worst = 0.0;
  int scenario = 0;
  bool ok = true;
  for (double pd : pds) {
    for (double snr_db : snr_dbs) {
      const SystemConfig config(8, 2, PowerMode::Tpc, db_to_linear(snr_db));
      const SensorEnsemble ensemble = SensorEnsemble::iid(8, pd, 0.05);
      const MgfModel model = make_finite_k_model(config, ensemble);
      const GcParams gc(1000);

      const std::vector<double> targets = log_spaced(1e-3, 0.99, 20);
      std::vector<double> gammas;
      std::vector<OperatingPoint> gc_points;
      for (double t : targets) {
        const double gamma = invert_threshold(model, t, gc);
        gc_points.push_back(ca_operating_point(model, gamma, gc));
        gammas.push_back(gamma);
      }
      const auto mc_points =
          mc_ca_probabilities(config, ensemble, gammas, 100000,
                              substream_seed(opt.seed, 100 + scenario), opt.workers);
      for (std::size_t j = 0; j < gammas.size(); ++j) {
        const double se_f = std::max(mc_points[j].pf0.stderr_, 1e-12);
        const double se_d = std::max(mc_points[j].pd0.stderr_, 1e-12);
        worst = std::max(worst, std::abs(gc_points[j].pf0 - mc_points[j].pf0.value) / se_f);
        worst = std::max(worst, std::abs(gc_points[j].pd0 - mc_points[j].pd0.value) / se_d);
      }
      ++scenario;
    }
  }
  ok = worst <= 3.0;
  return {1, "GC vs MC CA-ROC agreement (K=8, N=2, 6 scenarios, 20 points)", ok,
          format("max |GC-MC| = %.2f stderr (limit 3.0), 1e5 runs/point", worst)};
}

// ---------------------------------------------------------------------------
// criterion 2: approximate threshold histogram
// ---------------------------------------------------------------------------
CheckResult check_threshold_histogram(const ValidationOptions& opt) {
  const double snr = db_to_linear(-5.0);
  bool ok = true;
  std::string detail;
  for (int n : {1, 2}) {
    const SystemConfig c100(100, n, PowerMode::Tpc, snr);
    const SystemConfig c50(50, n, PowerMode::Tpc, snr);
    const SensorEnsemble e100 = SensorEnsemble::iid(100, 0.5, 0.05);
    const SensorEnsemble e50 = SensorEnsemble::iid(50, 0.5, 0.05);
    const auto h100 = mc_ic_false_alarm_histogram(c100, e100, 0.01, 2000, 10000,
                                                  substream_seed(opt.seed, 200 + n),
                                                  IcThresholdRule::LowSnrApprox, 40,
                                                  opt.workers);
    const auto h50 = mc_ic_false_alarm_histogram(c50, e50, 0.01, 2000, 10000,
                                                 substream_seed(opt.seed, 200 + n),
                                                 IcThresholdRule::LowSnrApprox, 40,
                                                 opt.workers);
    const bool mean_ok = h100.mean >= 0.005 && h100.mean <= 0.02;
    const bool var_ok = h100.variance < h50.variance;
    ok = ok && mean_ok && var_ok;
    detail += format("N=%d: mean=%.4f in [0.005,0.02]:%s var K100=%.3e < K50=%.3e:%s  ", n,
                     h100.mean, mean_ok ? "yes" : "NO", h100.variance, h50.variance,
                     var_ok ? "yes" : "NO");
  }
  return {2, "approximate threshold false-alarm histogram (K=100 vs 50, SNR -5 dB)", ok,
          detail};
}

// ---------------------------------------------------------------------------
// criterion 3: large-system saturation
// ---------------------------------------------------------------------------
CheckResult check_large_system_saturation(const ValidationOptions& opt) {
  const double snr = db_to_linear(10.0);
  const int ks[] = {10, 50, 200, 800};
  const GcParams gc(1000);
  std::vector<McEstimate> pd_mc;
  double pd_gc_last = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const SystemConfig config(ks[i], 2, PowerMode::Tpc, snr);
    const SensorEnsemble ensemble = SensorEnsemble::iid(ks[i], 0.5, 0.05);
    const MgfModel model = make_finite_k_model(config, ensemble);
    const double gamma = invert_threshold(model, 0.01, gc);
    pd_gc_last = ca_operating_point(model, gamma, gc).pd0;
    const double g[] = {gamma};
    const auto mc = mc_ca_probabilities(config, ensemble, g, 100000,
                                        substream_seed(opt.seed, 300 + i), opt.workers);
    pd_mc.push_back(mc[0].pd0);
  }
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < pd_mc.size(); ++i) {
    const double slack = 3.0 * std::hypot(pd_mc[i].stderr_, pd_mc[i + 1].stderr_);
    if (pd_mc[i + 1].value < pd_mc[i].value - slack) monotone = false;
  }
  const MgfModel ls = make_large_system_model(0.5, 0.05, 2, PowerMode::Tpc, snr);
  const double gamma_ls = invert_threshold(ls, 0.01, gc);
  const double pd_ls = ca_operating_point(ls, gamma_ls, gc).pd0;
  const double gap = std::abs(pd_gc_last - pd_ls);
  const bool ok = monotone && gap <= 0.02;
  return {3, "large-system saturation (pd0 at pf0=0.01, K up to 800)", ok,
          format("MC pd0: %.4f %.4f %.4f %.4f monotone:%s; |GC(K=800)-large-system| = "
                 "%.4f (limit 0.02)",
                 pd_mc[0].value, pd_mc[1].value, pd_mc[2].value, pd_mc[3].value,
                 monotone ? "yes" : "NO", gap)};
}

// ---------------------------------------------------------------------------
// criterion 4: ideal-performance special case
// ---------------------------------------------------------------------------
CheckResult check_ideal_case(const ValidationOptions& opt) {
  const int n = 2;
  const MgfModel ideal = make_large_system_model(1.0, 0.0, n, PowerMode::Ipc, 1.0);
  const AucResult a = auc(ideal, GcParams::for_auc());
  const bool auc_ok = a.auc >= 1.0 - 1e-6;

  Rng rng(substream_seed(opt.seed, 400));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::complex<double> s1{-4.0 + 4.95 * rng.uniform01(),
                                  -10.0 + 20.0 * rng.uniform01()};
    const std::complex<double> ref1 = std::pow(1.0 - s1, -n);
    worst = std::max(worst, std::abs(mgf_large_system(s1, ideal, Hypothesis::H1) - ref1) /
                                (1.0 + std::abs(ref1)));
    const std::complex<double> s0{-0.95 + 4.95 * rng.uniform01(),
                                  -10.0 + 20.0 * rng.uniform01()};
    const std::complex<double> ref0 = std::pow(1.0 + s0, -n);
    worst = std::max(worst, std::abs(mgf_large_system(s0, ideal, Hypothesis::H0) - ref0) /
                                (1.0 + std::abs(ref0)));
  }
  const bool mgf_ok = worst <= 1e-12;
  return {4, "ideal large-system IPC case (pd,pf)=(1,0)", auc_ok && mgf_ok,
          format("AUC = %.9f (need >= 1-1e-6); max MGF mismatch vs (1-+s)^-N = %.2e",
                 a.auc, worst)};
}

// ---------------------------------------------------------------------------
// criterion 5: deflection closed form
// ---------------------------------------------------------------------------
CheckResult check_deflection_closed_form(const ValidationOptions& opt) {
  Rng rng(substream_seed(opt.seed, 500));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int k = 2 + static_cast<int>(rng.uniform01() * 99.0);
    const int n = 1 + static_cast<int>(rng.uniform01() * 15.0);
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.uniform01());
    const double pf = 0.01 + 0.48 * rng.uniform01();
    const double pd = pf + (0.99 - pf) * rng.uniform01();
    const SystemConfig config(k, n, PowerMode::Tpc, snr);
    const auto generic = deflection(binomial_count_law(k, pf, Hypothesis::H0),
                                    binomial_count_law(k, pd, Hypothesis::H1), config);
    const auto closed = deflection_iid(pd, pf, k, n, config.snr_total());
    worst = std::max(worst, std::abs(generic.d0 - closed.d0) / closed.d0);
    worst = std::max(worst, std::abs(generic.d1 - closed.d1) / closed.d1);
  }
  const bool generic_ok = worst <= 1e-10;

  bool ideal_ok = true;
  for (int n : {1, 2, 4, 8}) {
    const auto r = deflection_large_system(1.0, 0.0, n, PowerMode::Ipc, 1.0);
    if (r.d0 != 4.0 * n || r.d1 != 4.0 * n) ideal_ok = false;
  }
  return {5, "deflection closed forms (generic vs iid; ideal large-system = 4N)",
          generic_ok && ideal_ok,
          format("max generic-vs-closed mismatch = %.2e (limit 1e-10); 4N exact: %s",
                 worst, ideal_ok ? "yes" : "NO")};
}

// ---------------------------------------------------------------------------
// criterion 6: deflection-based local threshold design
// ---------------------------------------------------------------------------
CheckResult check_deflection_design(const ValidationOptions&) {
  const int k = 50, n = 4;
  const double snr = db_to_linear(5.0);
  const double snr_obs = db_to_linear(5.0);
  const LocalDetectorCurve curve = change_in_variance_curve(snr_obs);
  const auto opt1 = optimize_local_pf(curve, k, n, PowerMode::Tpc, snr, DeflectionKind::D1);
  const GcParams gc(1000);

  const auto pd0_for = [&](double pf) {
    const SystemConfig config(k, n, PowerMode::Tpc, snr);
    const SensorEnsemble ensemble = SensorEnsemble::iid(k, curve(pf), pf);
    const MgfModel model = make_finite_k_model(config, ensemble);
    return ca_operating_point(model, invert_threshold(model, 0.01, gc), gc).pd0;
  };
  const double pd0_opt = pd0_for(opt1.pf_star);
  const double pd0_fixed = pd0_for(0.05);
  const double gap = pd0_opt - pd0_fixed;
  return {6, "deflection-optimized local threshold (K=50, N=4, SNR 5 dB)", gap >= 0.05,
          format("pf*_1 = %.4f, pd0 = %.4f vs pd0(pf=0.05) = %.4f, gap = %.4f (need >= 0.05)",
                 opt1.pf_star, pd0_opt, pd0_fixed, gap)};
}

// ---------------------------------------------------------------------------
// criterion 7: property suite
// ---------------------------------------------------------------------------
CheckResult check_property_suite(const ValidationOptions& opt) {
  std::string failures;
  Rng rng(substream_seed(opt.seed, 700));

  const SystemConfig config(8, 2, PowerMode::Tpc, db_to_linear(10.0));
  const SensorEnsemble ens_a = SensorEnsemble::iid(8, 0.5, 0.05);
  const SensorEnsemble ens_b = SensorEnsemble::iid(8, 0.7, 0.05);
  const MgfModel finite_a = make_finite_k_model(config, ens_a);
  const MgfModel finite_b = make_finite_k_model(config, ens_b);
  const MgfModel ls_ipc = make_large_system_model(0.5, 0.05, 2, PowerMode::Ipc, 10.0);
  const MgfModel ls_tpc = make_large_system_model(0.5, 0.05, 2, PowerMode::Tpc, 10.0);
  const MgfModel models[] = {finite_a, finite_b, ls_ipc, ls_tpc};

  // normalization at s = 0
  for (const auto& m : models)
    for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1})
      if (std::abs(mgf_conditional({0.0, 0.0}, m, h) - 1.0) > 1e-14)
        failures += "normalization; ";

  // conjugate symmetry
  double worst_sym = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto& m = models[i % 4];
    const Hypothesis h = (i % 2) ? Hypothesis::H1 : Hypothesis::H0;
    const ConvergenceStrip strip = convergence_strip(m, h);
    const double lo = std::isfinite(strip.lo) ? strip.lo : -2.0;
    const double hi = std::isfinite(strip.hi) ? strip.hi : 2.0;
    const double re = lo * 0.9 + (hi * 0.9 - lo * 0.9) * rng.uniform01();
    const std::complex<double> s{re, -8.0 + 16.0 * rng.uniform01()};
    const auto v = mgf_conditional(s, m, h);
    const auto vc = mgf_conditional(std::conj(s), m, h);
    worst_sym = std::max(worst_sym,
                         std::abs(vc - std::conj(v)) / (1.0 + std::abs(v)));
  }
  if (worst_sym > 1e-12) failures += format("conjugate symmetry (%.1e); ", worst_sym);

  // finite differences vs closed-form moments (nonzero-mean model)
  {
    const StatisticMoments mom = statistic_moments(finite_b, Hypothesis::H1);
    const double h = 1e-5 / std::sqrt(mom.variance);
    const double up = mgf_conditional({h, 0.0}, finite_b, Hypothesis::H1).real();
    const double dn = mgf_conditional({-h, 0.0}, finite_b, Hypothesis::H1).real();
    const double mean_fd = (up - dn) / (2.0 * h);
    const double second_fd = (up - 2.0 + dn) / (h * h);
    const double var_fd = second_fd - mean_fd * mean_fd;
    if (std::abs(mean_fd - mom.mean) > 1e-5 * std::abs(mom.mean))
      failures += format("fd mean (%.2e vs %.2e); ", mean_fd, mom.mean);
    if (std::abs(var_fd - mom.variance) > 1e-4 * mom.variance)
      failures += format("fd variance (%.6g vs %.6g); ", var_fd, mom.variance);
  }

  // eigenvalue identity vs explicit 2x2 determinant
  double worst_eig = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int k = 1 + static_cast<int>(rng.uniform01() * 200.0);
    const int ell = static_cast<int>(rng.uniform01() * (k + 1));
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.uniform01());
    const double sw2 = static_cast<double>(k) / snr;
    const double root = static_cast<double>(k) * std::sqrt(1.0 + 1.0 / snr);
    const double product =
        0.25 * (k - 2.0 * ell + root) * (k - 2.0 * ell - root);
    // L = R F with R = [[K+sw2, 2l-K], [2l-K, K]], F = [[0,-1/2],[-1/2,0]]
    const double r11 = k + sw2, r12 = 2.0 * ell - k, r22 = k;
    const double l11 = -0.5 * r12, l12 = -0.5 * r11, l21 = -0.5 * r22, l22 = -0.5 * r12;
    const double det = l11 * l22 - l12 * l21;
    worst_eig = std::max(worst_eig, std::abs(product - det) / std::abs(det));
  }
  if (worst_eig > 1e-9) failures += format("eigenvalue identity (%.1e); ", worst_eig);

  // AUC stays in [0.5 - 1e-6, 1 + 1e-6] over random configurations
  for (int i = 0; i < 100; ++i) {
    const int k = 1 + static_cast<int>(rng.uniform01() * 30.0);
    const int n = 1 + static_cast<int>(rng.uniform01() * 8.0);
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.uniform01());
    const double pf = 0.01 + 0.48 * rng.uniform01();
    const double pd = pf + (0.99 - pf) * rng.uniform01();
    const SystemConfig cfg(k, n, PowerMode::Tpc, snr);
    const AucResult a = auc(make_finite_k_model(cfg, SensorEnsemble::iid(k, pd, pf)));
    if (!(a.auc >= 0.5 - 1e-6 && a.auc <= 1.0 + 1e-6)) {
      failures += format("auc range (%.8f); ", a.auc);
      break;
    }
  }

  // GC self-consistency nu=1000 vs nu=4000
  {
    double worst = 0.0;
    const std::vector<double> targets = log_spaced(1e-3, 0.99, 20);
    for (double t : targets) {
      const double gamma = invert_threshold(finite_a, t, GcParams(1000));
      for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
        const LaplaceMgf mgf = conditional_mgf(finite_a, h);
        worst = std::max(worst, std::abs(gc_tail_probability(mgf, gamma, GcParams(1000)) -
                                         gc_tail_probability(mgf, gamma, GcParams(4000))));
      }
    }
    if (worst > 1e-6) failures += format("nu self-consistency (%.1e); ", worst);
  }

  // MC determinism across worker counts
  {
    const double gammas[] = {-10.0, 0.0, 10.0};
    const auto a = mc_ca_probabilities(config, ens_a, gammas, 10000, opt.seed, 1);
    const auto b = mc_ca_probabilities(config, ens_a, gammas, 10000, opt.seed, 3);
    const auto c = mc_ca_probabilities(config, ens_a, gammas, 10000, opt.seed, 7);
    for (std::size_t j = 0; j < 3; ++j) {
      if (a[j].pf0.value != b[j].pf0.value || b[j].pf0.value != c[j].pf0.value ||
          a[j].pd0.value != b[j].pd0.value || b[j].pd0.value != c[j].pd0.value)
        failures += "mc determinism (roc); ";
    }
    const auto auc1 = mc_auc(config, ens_a, 5000, opt.seed, 1);
    const auto auc2 = mc_auc(config, ens_a, 5000, opt.seed, 5);
    if (auc1.value != auc2.value) failures += "mc determinism (auc); ";
    const auto h1 = mc_ic_false_alarm_histogram(config, ens_a, 0.01, 200, 500, opt.seed,
                                                IcThresholdRule::LowSnrApprox, 20, 1);
    const auto h2 = mc_ic_false_alarm_histogram(config, ens_a, 0.01, 200, 500, opt.seed,
                                                IcThresholdRule::LowSnrApprox, 20, 6);
    if (h1.mean != h2.mean || h1.variance != h2.variance)
      failures += "mc determinism (histogram); ";
  }

  return {7, "property suite (MGF, eigenvalues, AUC range, GC and MC invariants)",
          failures.empty(), failures.empty() ? "all properties hold" : failures};
}

// ---------------------------------------------------------------------------
// criterion 8: exact small-K oracle
// ---------------------------------------------------------------------------
CheckResult check_small_k_oracle(const ValidationOptions& opt) {
  double worst_ic = 0.0, worst_ca = 0.0;
  for (int k : {2, 4}) {
    const SystemConfig config(k, 1, PowerMode::Tpc, db_to_linear(5.0));
    const SensorEnsemble ensemble = SensorEnsemble::iid(k, 0.6, 0.1);

    // instantaneous-channel mixture vs MC on a fixed channel
    Rng rng(substream_seed(opt.seed, 800 + k));
    const ChannelRealization channel = sample_channel(rng, 1, k);
    const double scale = std::sqrt(channel.z_norm2) *
                         std::sqrt(config.sigma_w2 + static_cast<double>(k));
    const double gammas[] = {-1.5 * scale, -0.5 * scale, 0.0, 0.5 * scale, 1.5 * scale};
    for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
      const auto mc = mc_fixed_channel_tail(channel, ensemble, config.sigma_w2, h, gammas,
                                            1000000, substream_seed(opt.seed, 810 + k),
                                            opt.workers);
      for (std::size_t j = 0; j < 5; ++j) {
        const IcOperatingPoint ic =
            ic_probabilities(channel, gammas[j], ensemble, config.sigma_w2);
        const double analytic = h == Hypothesis::H0 ? ic.pf0 : ic.pd0;
        const double se = std::max(mc[j].stderr_, 1e-12);
        worst_ic = std::max(worst_ic, std::abs(analytic - mc[j].value) / se);
      }
    }

    // channel-averaged GC vs clustered MC
    const MgfModel model = make_finite_k_model(config, ensemble);
    const GcParams gc(1000);
    for (double target : {0.05, 0.2, 0.5}) {
      const double gamma = invert_threshold(model, target, gc);
      const OperatingPoint op = ca_operating_point(model, gamma, gc);
      for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
        const McEstimate est =
            mc_ca_clustered(config, ensemble, h, gamma, 1000, 1000,
                            substream_seed(opt.seed, 820 + k), opt.workers);
        const double analytic = h == Hypothesis::H0 ? op.pf0 : op.pd0;
        worst_ca = std::max(worst_ca,
                            std::abs(analytic - est.value) / std::max(est.stderr_, 1e-12));
      }
    }
  }
  const bool ok = worst_ic <= 4.0 && worst_ca <= 4.0;
  return {8, "exact small-K oracle (mixture and CA probabilities vs MC)", ok,
          format("worst IC deviation = %.2f stderr, worst CA deviation = %.2f stderr "
                 "(limit 4.0)",
                 worst_ic, worst_ca)};
}

}  // namespace

std::vector<CheckResult> run_acceptance(const ValidationOptions& options, std::ostream* out) {
  using Check = CheckResult (*)(const ValidationOptions&);
  const Check checks[] = {check_roc_agreement,     check_threshold_histogram,
                          check_large_system_saturation, check_ideal_case,
                          check_deflection_closed_form,  check_deflection_design,
                          check_property_suite,          check_small_k_oracle};
  std::vector<CheckResult> results;
  for (int i = 0; i < 8; ++i) {
    if (!options.criteria.empty() &&
        std::find(options.criteria.begin(), options.criteria.end(), i + 1) ==
            options.criteria.end())
      continue;
    CheckResult r = checks[i](options);
    if (out)
      *out << "[" << r.id << "] " << (r.passed ? "PASS" : "FAIL") << "  " << r.name << ": "
           << r.detail << "\n";
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace fusion
