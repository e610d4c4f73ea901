#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fusion/mgf.hpp"

namespace fusion {

/// Gauss-Chebyshev contour parameters. `c` is the abscissa of the vertical
/// integration line; leave it unset to resolve it automatically from the
/// convergence strip (hi/2 for tail probabilities, min(hi_H1, -lo_H0)/2 for
/// the AUC).
struct GcParams {
  int nu = 1000;
  std::optional<double> c;

  GcParams() = default;
  GcParams(int nu_, std::optional<double> c_ = std::nullopt);

  static GcParams for_auc() { return GcParams(64); }
};

/// An MGF as the quadrature sees it: a callable on complex s plus the strip
/// it converges on.
struct LaplaceMgf {
  std::function<std::complex<double>(std::complex<double>)> phi;
  ConvergenceStrip strip;
};

/// The conditional MGF of a model bundled with its strip.
LaplaceMgf conditional_mgf(const MgfModel& model, Hypothesis h);

/// Abscissa actually used by gc_tail_probability for this MGF.
double resolve_tail_c(const LaplaceMgf& mgf, const GcParams& gc);

/// P(-Lambda < -gamma) = P(Lambda > gamma) by numerical Laplace inversion on
/// the contour Re(s) = c. Saturates to exact 0/1 when a one-sided Chernoff
/// bound already puts the tail below 1e-14 (the raw node sum would overflow
/// out there).
double gc_tail_probability(const LaplaceMgf& mgf, double gamma, const GcParams& gc);

struct OperatingPoint {
  double gamma;
  double pf0;
  double pd0;
};

/// Channel-averaged operating point of a model at threshold gamma.
OperatingPoint ca_operating_point(const MgfModel& model, double gamma, const GcParams& gc);

/// Threshold achieving a target channel-averaged false-alarm rate, by
/// bisection over mean_H0 +- 12 sigma_H0. Throws NumericalError (with the
/// achieved endpoints) when the target is outside the bracketed range.
double invert_threshold(const MgfModel& model, double target_pf0, const GcParams& gc);

struct AucResult {
  double auc;
  double gini;
};

/// Area under the ROC via the MGF-product contour integral, and the Gini
/// index 2 AUC - 1. Default node count for this quadrature is 64.
AucResult auc(const MgfModel& model, const GcParams& gc = GcParams::for_auc());

struct RocPoint {
  double gamma;
  double pf0;
  double pd0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // ordered by increasing gamma
  int nu;
  double c_h0;
  double c_h1;
  std::string model;
};

RocCurve ca_roc(const MgfModel& model, std::span<const double> gammas, const GcParams& gc);

/// ROC through threshold inversion: one point per requested pf0 target.
RocCurve ca_roc_from_pf_targets(const MgfModel& model, std::span<const double> pf_targets,
                                const GcParams& gc);

}  // namespace fusion
