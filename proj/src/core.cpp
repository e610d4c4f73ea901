#include "fusion/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace fusion {

namespace {

constexpr double kPmfSumTolerance = 1e-12;
constexpr double kEntryTolerance = 1e-15;

double phi_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Acklam's rational approximation of the standard normal quantile,
/// accurate to ~1.2e-9 before refinement.
double norm_quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double q_function(double x) {
  if (std::isnan(x)) throw DomainError("q_function: NaN argument");
  return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
}

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("q_inverse: p must lie in (0, 1), got " + std::to_string(p));
  // Q^{-1}(p) = -Phi^{-1}(p); two Newton polish steps take the rational
  // estimate to full double precision wherever the density is representable.
  double x = -norm_quantile_estimate(p);
  for (int i = 0; i < 2; ++i) {
    const double pdf = phi_pdf(x);
    if (pdf <= 0.0) break;
    const double step = (q_function(x) - p) / pdf;
    if (!std::isfinite(step)) break;
    x += step;
  }
  return x;
}

SystemConfig::SystemConfig(int k_, int n_, PowerMode mode, double snr_)
    : k(k_), n(n_), power_mode(mode), snr(snr_) {
  if (k < 1) throw DomainError("SystemConfig: K must be >= 1");
  if (n < 1) throw DomainError("SystemConfig: N must be >= 1");
  if (!(snr > 0.0) || !std::isfinite(snr))
    throw DomainError("SystemConfig: snr must be finite and > 0");
  sigma_w2 = (mode == PowerMode::Tpc) ? static_cast<double>(k) / snr : 1.0 / snr;
}

namespace detail {

double log_binomial_coefficient(int k, int ell) {
  return std::lgamma(k + 1.0) - std::lgamma(ell + 1.0) - std::lgamma(k - ell + 1.0);
}

void validate_pmf(const std::vector<double>& pmf, const char* what) {
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= -kEntryTolerance && p <= 1.0 + kEntryTolerance))
      throw DomainError(std::string(what) + ": entry outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kPmfSumTolerance)
    throw DomainError(std::string(what) + ": pmf sums to " + std::to_string(sum) +
                      ", not 1 within 1e-12");
}

}  // namespace detail

CountLaw::CountLaw(std::vector<double> probs, Hypothesis hypothesis)
    : probs_(std::move(probs)), hypothesis_(hypothesis) {
  if (probs_.size() < 2) throw DomainError("CountLaw: needs K >= 1 (size K+1)");
  detail::validate_pmf(probs_, "CountLaw");
}

CountLaw binomial_count_law(int k, double p, Hypothesis hypothesis) {
  if (k < 1) throw DomainError("binomial_count_law: K must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("binomial_count_law: p must lie in [0, 1]");
  std::vector<double> probs(static_cast<std::size_t>(k) + 1, 0.0);
  if (p == 0.0) {
    probs[0] = 1.0;
  } else if (p == 1.0) {
    probs[static_cast<std::size_t>(k)] = 1.0;
  } else if (k <= 60) {
    // Ratio recurrence; exact binomial coefficients fit comfortably here.
    double value = std::pow(1.0 - p, k);
    const double odds = p / (1.0 - p);
    for (int ell = 0; ell <= k; ++ell) {
      probs[static_cast<std::size_t>(ell)] = value;
      value *= odds * static_cast<double>(k - ell) / static_cast<double>(ell + 1);
    }
  } else {
    const double lp = std::log(p), lq = std::log1p(-p);
    for (int ell = 0; ell <= k; ++ell) {
      probs[static_cast<std::size_t>(ell)] =
          std::exp(detail::log_binomial_coefficient(k, ell) + ell * lp + (k - ell) * lq);
    }
  }
  return CountLaw(std::move(probs), hypothesis);
}

CountMoments count_moments(const CountLaw& law) {
  const auto& p = law.probs();
  double mean = 0.0;
  for (std::size_t ell = 0; ell < p.size(); ++ell) mean += static_cast<double>(ell) * p[ell];
  double second = 0.0, variance = 0.0;
  for (std::size_t ell = 0; ell < p.size(); ++ell) {
    const double l = static_cast<double>(ell);
    second += l * l * p[ell];
    const double d = l - mean;
    variance += d * d * p[ell];  // two-pass form, no cancellation
  }
  return {mean, second, variance};
}

SensorEnsemble SensorEnsemble::iid(int k, double pd, double pf) {
  if (k < 1) throw DomainError("SensorEnsemble: K must be >= 1");
  const bool perfect = (pd == 1.0 && pf == 0.0);
  if (!perfect && !(pd > 0.0 && pd < 1.0 && pf > 0.0 && pf < 1.0))
    throw DomainError(
        "SensorEnsemble: iid rates must lie in (0, 1), except the perfect-sensor pair (1, 0)");
  SensorEnsemble e;
  e.mode_ = Mode::Iid;
  e.k_ = k;
  e.pd_ = pd;
  e.pf_ = pf;
  return e;
}

SensorEnsemble SensorEnsemble::from_count_pmf(std::vector<double> pmf_h0,
                                              std::vector<double> pmf_h1) {
  if (pmf_h0.size() != pmf_h1.size() || pmf_h0.size() < 2)
    throw DomainError("SensorEnsemble: count pmfs must share size K+1 >= 2");
  detail::validate_pmf(pmf_h0, "SensorEnsemble count pmf (H0)");
  detail::validate_pmf(pmf_h1, "SensorEnsemble count pmf (H1)");
  SensorEnsemble e;
  e.mode_ = Mode::CountPmf;
  e.k_ = static_cast<int>(pmf_h0.size()) - 1;
  e.count_pmf_[0] = std::move(pmf_h0);
  e.count_pmf_[1] = std::move(pmf_h1);
  return e;
}

SensorEnsemble SensorEnsemble::from_joint_pmf(std::vector<double> pmf_h0,
                                              std::vector<double> pmf_h1) {
  if (pmf_h0.size() != pmf_h1.size() || pmf_h0.size() < 2 ||
      !std::has_single_bit(pmf_h0.size()))
    throw DomainError("SensorEnsemble: joint pmfs must share size 2^K");
  const int k = std::countr_zero(pmf_h0.size());
  if (k > 20)
    throw CapabilityError("SensorEnsemble: joint pmf limited to K <= 20, got K = " +
                          std::to_string(k));
  detail::validate_pmf(pmf_h0, "SensorEnsemble joint pmf (H0)");
  detail::validate_pmf(pmf_h1, "SensorEnsemble joint pmf (H1)");
  SensorEnsemble e;
  e.mode_ = Mode::JointPmf;
  e.k_ = k;
  e.joint_pmf_[0] = std::move(pmf_h0);
  e.joint_pmf_[1] = std::move(pmf_h1);
  for (int h = 0; h < 2; ++h) {
    auto& cdf = e.joint_cdf_[h];
    cdf.resize(e.joint_pmf_[h].size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
      acc += e.joint_pmf_[h][i];
      cdf[i] = acc;
    }
    cdf.back() = 1.0;
  }
  return e;
}

double SensorEnsemble::symbol_prob(Hypothesis h) const {
  if (mode_ != Mode::Iid)
    throw CapabilityError("SensorEnsemble: per-sensor rate only defined for iid mode");
  return h == Hypothesis::H1 ? pd_ : pf_;
}

CountLaw SensorEnsemble::count_law(Hypothesis h) const {
  const int hi = h == Hypothesis::H1 ? 1 : 0;
  switch (mode_) {
    case Mode::Iid:
      return binomial_count_law(k_, hi ? pd_ : pf_, h);
    case Mode::CountPmf:
      return CountLaw(count_pmf_[hi], h);
    case Mode::JointPmf: {
      std::vector<double> probs(static_cast<std::size_t>(k_) + 1, 0.0);
      for (std::size_t mask = 0; mask < joint_pmf_[hi].size(); ++mask)
        probs[static_cast<std::size_t>(std::popcount(mask))] += joint_pmf_[hi][mask];
      return CountLaw(std::move(probs), h);
    }
  }
  throw Error("SensorEnsemble: unreachable");
}

double SensorEnsemble::joint_weight(std::uint32_t mask, Hypothesis h) const {
  if (k_ > 20)
    throw CapabilityError("SensorEnsemble: joint weights limited to K <= 20, got K = " +
                          std::to_string(k_));
  const int hi = h == Hypothesis::H1 ? 1 : 0;
  const int ones = std::popcount(mask);
  switch (mode_) {
    case Mode::Iid: {
      const double p = hi ? pd_ : pf_;
      if (p == 1.0) return ones == k_ ? 1.0 : 0.0;
      if (p == 0.0) return ones == 0 ? 1.0 : 0.0;
      return std::exp(ones * std::log(p) + (k_ - ones) * std::log1p(-p));
    }
    case Mode::CountPmf:
      // Exchangeable completion: all C(K, ell) placements equally likely.
      return count_pmf_[hi][static_cast<std::size_t>(ones)] *
             std::exp(-detail::log_binomial_coefficient(k_, ones));
    case Mode::JointPmf:
      return joint_pmf_[hi][mask];
  }
  throw Error("SensorEnsemble: unreachable");
}

const std::vector<double>& SensorEnsemble::joint_cdf(Hypothesis h) const {
  if (mode_ != Mode::JointPmf)
    throw CapabilityError("SensorEnsemble: joint cdf only stored for joint-pmf mode");
  return joint_cdf_[h == Hypothesis::H1 ? 1 : 0];
}

}  // namespace fusion
