#pragma once

#include <complex>
#include <variant>

#include "fusion/core.hpp"

namespace fusion {

/// Open vertical strip Re(s) in (lo, hi) on which a two-sided Laplace
/// transform converges. Either side may be infinite.
struct ConvergenceStrip {
  double lo;  // < 0
  double hi;  // > 0
  bool contains(double re) const { return re > lo && re < hi; }
};

/// xi+ = 1 + sqrt(1 + 1/SNR), xi- = 1 - sqrt(1 + 1/SNR). SNR is total.
struct XiPair {
  double plus;
  double minus;
};
XiPair xi_pair(double snr_total);

/// Channel-averaged MGF of the MRC statistic for a finite network:
/// mixture over the count law of the per-count closed form.
struct FiniteKModel {
  int k;
  int n;
  double snr;  // total SNR, K / sigma_w^2
  CountLaw law_h0;
  CountLaw law_h1;
  XiPair xi;

  FiniteKModel(int k, int n, double snr_total, CountLaw h0, CountLaw h1);
  const CountLaw& law(Hypothesis h) const {
    return h == Hypothesis::H1 ? law_h1 : law_h0;
  }
};

/// K -> infinity limit of the scaled statistic Lambda/K under a fixed
/// per-sensor SNR.
struct LargeSystemIpcModel {
  double pd;
  double pf;
  int n;

  LargeSystemIpcModel(double pd, double pf, int n);
  double rate(Hypothesis h) const { return h == Hypothesis::H1 ? pd : pf; }
};

/// Same limit under a fixed total SNR, which then appears through xi+-.
struct LargeSystemTpcModel {
  double pd;
  double pf;
  int n;
  double snr;  // total SNR, held fixed as K grows
  XiPair xi;

  LargeSystemTpcModel(double pd, double pf, int n, double snr);
  double rate(Hypothesis h) const { return h == Hypothesis::H1 ? pd : pf; }
};

using MgfModel = std::variant<FiniteKModel, LargeSystemIpcModel, LargeSystemTpcModel>;

MgfModel make_finite_k_model(const SystemConfig& config, const SensorEnsemble& ensemble);
MgfModel make_finite_k_model(const SystemConfig& config, CountLaw law_h0, CountLaw law_h1);
MgfModel make_large_system_model(double pd, double pf, int n, PowerMode mode, double snr);

/// E{ exp(s Lambda_MRC) | ell }: the two-bracket product raised to -N.
/// Throws NumericalError when s sits on a pole of either bracket.
std::complex<double> mgf_given_count(std::complex<double> s, int ell, int k, int n,
                                     double snr_total);

/// Conditional MGF of the model under hypothesis h. Finite-K models sum
/// mgf_given_count over the count law; large-system models evaluate their
/// closed form. Throws DomainError when Re(s) leaves the convergence strip.
std::complex<double> mgf_conditional(std::complex<double> s, const MgfModel& model,
                                     Hypothesis h);

/// Closed-form large-system MGF; CapabilityError on a finite-K model.
std::complex<double> mgf_large_system(std::complex<double> s, const MgfModel& model,
                                      Hypothesis h);

/// Pole-free vertical strip of the conditional MGF. Finite-K strips come
/// from pole enumeration over the counts with nonzero weight (never tighter
/// than the symmetric bound 2/(K + K sqrt(1 + 1/SNR))).
ConvergenceStrip convergence_strip(const MgfModel& model, Hypothesis h);

struct StatisticMoments {
  double mean;
  double variance;
};

/// Exact conditional mean and variance of the statistic the model's MGF
/// transforms: Lambda_MRC for finite K, the scaled Lambda/K limit for the
/// large-system kinds.
StatisticMoments statistic_moments(const MgfModel& model, Hypothesis h);

}  // namespace fusion
