#pragma once

#include <cstdint>
#include <vector>

#include "fusion/errors.hpp"

namespace fusion {

enum class Hypothesis { H0, H1 };

/// Power constraint on the sensor network: Ipc holds the per-sensor channel
/// SNR fixed, Tpc holds the total network SNR fixed.
enum class PowerMode { Ipc, Tpc };

/// Complementary CDF of a standard normal, Q(x) = P(Z > x).
/// Relative error below 1e-12 over the full double range.
double q_function(double x);

/// Inverse of q_function on (0, 1). q_function(q_inverse(p)) = p to 1e-10.
double q_inverse(double p);

/// Network geometry and channel noise level.
///
/// `snr` is linear scale and its meaning depends on the power mode: the
/// per-sensor SNR under Ipc (sigma_w^2 = 1/snr), the total network SNR under
/// Tpc (sigma_w^2 = K/snr). All closed forms downstream consume the total
/// SNR K/sigma_w^2, exposed as snr_total().
struct SystemConfig {
  SystemConfig(int k, int n, PowerMode mode, double snr);

  int k;
  int n;
  PowerMode power_mode;
  double snr;        // linear; per-sensor (Ipc) or total (Tpc)
  double sigma_w2;   // derived noise power

  double snr_total() const { return static_cast<double>(k) / sigma_w2; }
};

/// Probability mass function of ell, the number of sensors deciding H1,
/// indexed 0..K, tagged with the hypothesis it conditions on.
class CountLaw {
 public:
  CountLaw(std::vector<double> probs, Hypothesis hypothesis);

  int k() const { return static_cast<int>(probs_.size()) - 1; }
  Hypothesis hypothesis() const { return hypothesis_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](int ell) const { return probs_[static_cast<std::size_t>(ell)]; }

 private:
  std::vector<double> probs_;
  Hypothesis hypothesis_;
};

/// Binomial(K, p) count law; log-gamma evaluation above K = 60 so laws stay
/// finite out to K ~ 10^4.
CountLaw binomial_count_law(int k, double p, Hypothesis hypothesis = Hypothesis::H1);

struct CountMoments {
  double mean;
  double second_moment;
  double variance;
};

CountMoments count_moments(const CountLaw& law);

/// Joint sensor decision model. Three representations:
///  - Iid(pd, pf): conditionally i.i.d. sensors with common rates;
///  - CountPmf: only the law of ell is specified; individual decision
///    vectors are completed exchangeably (uniform subset of size ell);
///  - JointPmf: full law over {-1,+1}^K per hypothesis, K <= 20 only.
/// Decision vectors are addressed by bit mask: bit k set means x_k = +1.
class SensorEnsemble {
 public:
  enum class Mode { Iid, CountPmf, JointPmf };

  static SensorEnsemble iid(int k, double pd, double pf);
  static SensorEnsemble from_count_pmf(std::vector<double> pmf_h0,
                                       std::vector<double> pmf_h1);
  static SensorEnsemble from_joint_pmf(std::vector<double> pmf_h0,
                                       std::vector<double> pmf_h1);

  Mode mode() const { return mode_; }
  int k() const { return k_; }

  /// Common per-sensor rate P(x_k = +1 | h). Iid mode only.
  double symbol_prob(Hypothesis h) const;
  double pd() const { return symbol_prob(Hypothesis::H1); }
  double pf() const { return symbol_prob(Hypothesis::H0); }

  /// Law of ell under h (binomial for Iid, marginalized for JointPmf).
  CountLaw count_law(Hypothesis h) const;

  /// P(x | h) for the decision vector encoded by `mask`. Requires K <= 20.
  double joint_weight(std::uint32_t mask, Hypothesis h) const;

  /// Cumulative joint pmf for sampling; JointPmf mode only.
  const std::vector<double>& joint_cdf(Hypothesis h) const;

 private:
  SensorEnsemble() = default;

  Mode mode_ = Mode::Iid;
  int k_ = 0;
  double pd_ = 0.0, pf_ = 0.0;                 // Iid
  std::vector<double> count_pmf_[2];           // CountPmf
  std::vector<double> joint_pmf_[2];           // JointPmf
  std::vector<double> joint_cdf_[2];           // JointPmf sampling tables
};

namespace detail {
/// ln C(k, ell); exact table-free log-gamma form.
double log_binomial_coefficient(int k, int ell);
void validate_pmf(const std::vector<double>& pmf, const char* what);
}  // namespace detail

}  // namespace fusion
