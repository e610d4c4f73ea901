#pragma once

#include <functional>

#include "fusion/core.hpp"

namespace fusion {

struct DeflectionReport {
  double d0;
  double d1;
  double mean_h0;
  double mean_h1;
  double var_h0;
  double var_h1;
};

/// Deflection coefficients of the MRC statistic from its exact conditional
/// moments under the two count laws. Throws NumericalError on a zero
/// conditional variance.
DeflectionReport deflection(const CountLaw& law_h0, const CountLaw& law_h1,
                            const SystemConfig& config);

/// Closed form for conditionally i.i.d. sensors with common rates; snr is
/// the total network SNR K/sigma_w^2.
DeflectionReport deflection_iid(double pd, double pf, int k, int n, double snr_total);

/// K -> infinity ceiling of the deflections, Ipc or Tpc. Under Tpc, `snr`
/// is the fixed total SNR; it is unused under Ipc (the limit removes it).
DeflectionReport deflection_large_system(double pd, double pf, int n, PowerMode mode,
                                         double snr);

/// Local sensor operating curve pf -> pd on (0, 1).
class LocalDetectorCurve {
 public:
  explicit LocalDetectorCurve(std::function<double(double)> pd_of_pf);
  double operator()(double pf) const;

 private:
  std::function<double(double)> pd_of_pf_;
};

/// Change-in-variance local detector: pd = pf^{1/(1+snr_obs)}.
LocalDetectorCurve change_in_variance_curve(double snr_obs);

enum class DeflectionKind { D0, D1 };

struct LocalPfOptimum {
  double pf_star;
  double d_star;
};

/// argmax over pf in [1e-4, 1-1e-4] of the chosen deflection with
/// pd = curve(pf): 64-point coarse bracket plus golden-section refinement.
/// Throws NumericalError when the objective is identically ~0 (pd == pf).
LocalPfOptimum optimize_local_pf(const LocalDetectorCurve& curve, int k, int n,
                                 PowerMode mode, double snr, DeflectionKind which);

}  // namespace fusion
