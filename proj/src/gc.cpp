#include "fusion/gc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fusion/numeric.hpp"

namespace fusion {

namespace {

constexpr double kSaturationTail = 1e-14;
constexpr double kHardGuard = 1e-4;  // raw probability outside [-g, 1+g] is a failure

double check_and_clamp(double raw, const char* what) {
  if (!std::isfinite(raw) || raw < -kHardGuard || raw > 1.0 + kHardGuard) {
    std::ostringstream os;
    os << what << ": raw quadrature value " << raw
       << " outside [-1e-4, 1+1e-4]; quadrature failure, not roundoff";
    throw NumericalError(os.str());
  }
  return std::min(1.0, std::max(0.0, raw));
}

/// ln Phi(s) for real s inside the strip, where the MGF is real positive.
double log_mgf_real(const LaplaceMgf& mgf, double s) {
  const std::complex<double> v = mgf.phi({s, 0.0});
  if (!(v.real() > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(v.real());
}

}  // namespace

GcParams::GcParams(int nu_, std::optional<double> c_) : nu(nu_), c(c_) {
  if (nu < 2 || nu % 2 != 0) throw DomainError("GcParams: nu must be even and >= 2");
  if (c && !(*c > 0.0)) throw DomainError("GcParams: c must be > 0");
}

LaplaceMgf conditional_mgf(const MgfModel& model, Hypothesis h) {
  return {[model, h](std::complex<double> s) { return mgf_conditional(s, model, h); },
          convergence_strip(model, h)};
}

double resolve_tail_c(const LaplaceMgf& mgf, const GcParams& gc) {
  double c;
  if (gc.c) {
    c = *gc.c;
    if (!(c > 0.0 && c < mgf.strip.hi)) {
      std::ostringstream os;
      os << "gc abscissa c = " << c << " outside (0, " << mgf.strip.hi << ")";
      throw DomainError(os.str());
    }
  } else {
    c = std::isfinite(mgf.strip.hi) ? mgf.strip.hi / 2.0 : 1.0;
  }
  return c;
}

double gc_tail_probability(const LaplaceMgf& mgf, double gamma, const GcParams& gc) {
  if (std::isnan(gamma)) throw DomainError("gc_tail_probability: gamma must not be NaN");
  const double c = resolve_tail_c(mgf, gc);

  // Markov bounds at one real point per side. P(Lambda > gamma) <= Phi(c)e^{-gamma c};
  // P(Lambda <= gamma) <= Phi(s)e^{-gamma s} for s < 0 in the strip.
  const double log_upper = log_mgf_real(mgf, c) - gamma * c;
  if (log_upper < std::log(kSaturationTail)) return 0.0;
  const double s_neg = std::isfinite(mgf.strip.lo) ? mgf.strip.lo / 2.0 : -c;
  const double log_lower = log_mgf_real(mgf, s_neg) - gamma * s_neg;
  if (log_lower < std::log(kSaturationTail)) return 1.0;

  const int half = gc.nu / 2;
  std::vector<double> terms(static_cast<std::size_t>(half));
  const double mag = std::exp(-gamma * c);
  for (int r = 1; r <= half; ++r) {
    const double tau = std::tan((2.0 * r - 1.0) * std::numbers::pi / (2.0 * gc.nu));
    const std::complex<double> mu{c, c * tau};
    const double angle = -gamma * c * tau;
    const std::complex<double> rotation{mag * std::cos(angle), mag * std::sin(angle)};
    const std::complex<double> phi = mgf.phi(mu) * rotation;
    const double term = phi.real() + tau * phi.imag();
    if (!std::isfinite(term)) {
      std::ostringstream os;
      os << "gc_tail_probability: non-finite value at node r = " << r << " (tau = " << tau
         << ")";
      throw NumericalError(os.str());
    }
    terms[static_cast<std::size_t>(r - 1)] = term;
  }
  const double raw = pairwise_sum(terms) / static_cast<double>(gc.nu);
  return check_and_clamp(raw, "gc_tail_probability");
}

OperatingPoint ca_operating_point(const MgfModel& model, double gamma, const GcParams& gc) {
  const LaplaceMgf phi0 = conditional_mgf(model, Hypothesis::H0);
  const LaplaceMgf phi1 = conditional_mgf(model, Hypothesis::H1);
  return {gamma, gc_tail_probability(phi0, gamma, gc),
          gc_tail_probability(phi1, gamma, gc)};
}

double invert_threshold(const MgfModel& model, double target_pf0, const GcParams& gc) {
  if (!(target_pf0 > 0.0 && target_pf0 < 1.0))
    throw DomainError("invert_threshold: target must lie in (0, 1)");
  const LaplaceMgf phi0 = conditional_mgf(model, Hypothesis::H0);
  const StatisticMoments mom = statistic_moments(model, Hypothesis::H0);
  const double sigma = std::sqrt(mom.variance);
  double lo = mom.mean - 12.0 * sigma;
  double hi = mom.mean + 12.0 * sigma;
  const double p_lo = gc_tail_probability(phi0, lo, gc);
  const double p_hi = gc_tail_probability(phi0, hi, gc);
  if (!(p_lo >= target_pf0 && target_pf0 >= p_hi)) {
    std::ostringstream os;
    os << "invert_threshold: target " << target_pf0 << " outside achieved range ["
       << p_hi << ", " << p_lo << "] on gamma bracket [" << lo << ", " << hi << "]";
    throw NumericalError(os.str());
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double p = gc_tail_probability(phi0, mid, gc);
    if (std::abs(p - target_pf0) < 1e-6) return mid;
    if (p > target_pf0) lo = mid;
    else hi = mid;
  }
  return mid;
}

AucResult auc(const MgfModel& model, const GcParams& gc) {
  const LaplaceMgf phi1 = conditional_mgf(model, Hypothesis::H1);
  const LaplaceMgf phi0 = conditional_mgf(model, Hypothesis::H0);
  const double hi1 = phi1.strip.hi;
  const double hi0 = -phi0.strip.lo;  // -c must stay inside the H0 strip
  double c;
  if (gc.c) {
    c = *gc.c;
    if (!(c > 0.0 && c < hi1 && c < hi0)) {
      std::ostringstream os;
      os << "auc: c = " << c << " outside (0, min(" << hi1 << ", " << hi0 << "))";
      throw DomainError(os.str());
    }
  } else {
    const double bound = std::min(hi1, hi0);
    c = std::isfinite(bound) ? bound / 2.0 : 1.0;
  }

  const int half = gc.nu / 2;
  std::vector<double> terms(static_cast<std::size_t>(half));
  for (int r = 1; r <= half; ++r) {
    const double tau = std::tan((2.0 * r - 1.0) * std::numbers::pi / (2.0 * gc.nu));
    const std::complex<double> mu{c, c * tau};
    const std::complex<double> psi = phi1.phi(mu) * phi0.phi(-mu);
    const double term = psi.real() + tau * psi.imag();
    if (!std::isfinite(term)) {
      std::ostringstream os;
      os << "auc: non-finite value at node r = " << r;
      throw NumericalError(os.str());
    }
    terms[static_cast<std::size_t>(r - 1)] = term;
  }
  double raw = pairwise_sum(terms) / static_cast<double>(gc.nu);
  if (!std::isfinite(raw) || raw < 0.5 - kHardGuard || raw > 1.0 + kHardGuard) {
    std::ostringstream os;
    os << "auc: raw quadrature value " << raw << " outside [0.5-1e-4, 1+1e-4]";
    throw NumericalError(os.str());
  }
  const double clamped = std::min(1.0, std::max(0.5 - 1e-6, raw));
  return {clamped, 2.0 * clamped - 1.0};
}

namespace {

RocCurve finalize_roc(std::vector<RocPoint> points, const MgfModel& model,
                      const GcParams& gc) {
  std::sort(points.begin(), points.end(),
            [](const RocPoint& a, const RocPoint& b) { return a.gamma < b.gamma; });
  RocCurve curve;
  curve.points = std::move(points);
  curve.nu = gc.nu;
  curve.c_h0 = resolve_tail_c(conditional_mgf(model, Hypothesis::H0), gc);
  curve.c_h1 = resolve_tail_c(conditional_mgf(model, Hypothesis::H1), gc);
  curve.model = std::holds_alternative<FiniteKModel>(model) ? "finite-k"
                : std::holds_alternative<LargeSystemIpcModel>(model) ? "large-system-ipc"
                                                                     : "large-system-tpc";
  return curve;
}

}  // namespace

RocCurve ca_roc(const MgfModel& model, std::span<const double> gammas, const GcParams& gc) {
  if (gammas.empty()) throw DomainError("ca_roc: empty gamma grid");
  std::vector<RocPoint> points;
  points.reserve(gammas.size());
  for (double g : gammas) {
    const OperatingPoint op = ca_operating_point(model, g, gc);
    points.push_back({op.gamma, op.pf0, op.pd0});
  }
  return finalize_roc(std::move(points), model, gc);
}

RocCurve ca_roc_from_pf_targets(const MgfModel& model, std::span<const double> pf_targets,
                                const GcParams& gc) {
  if (pf_targets.empty()) throw DomainError("ca_roc_from_pf_targets: empty target grid");
  std::vector<RocPoint> points;
  points.reserve(pf_targets.size());
  for (double target : pf_targets) {
    const double gamma = invert_threshold(model, target, gc);
    const OperatingPoint op = ca_operating_point(model, gamma, gc);
    points.push_back({op.gamma, op.pf0, op.pd0});
  }
  return finalize_roc(std::move(points), model, gc);
}

}  // namespace fusion
