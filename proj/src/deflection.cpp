#include "fusion/deflection.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fusion/mgf.hpp"

namespace fusion {

namespace {

constexpr double kPfFloor = 1e-4;  // the power-law pd(pf) has an unbounded slope at 0
constexpr int kCoarsePoints = 64;

DeflectionReport report_from_moments(StatisticMoments m0, StatisticMoments m1) {
  if (!(m0.variance > 0.0) || !(m1.variance > 0.0))
    throw NumericalError("deflection: zero conditional variance");
  const double num = (m1.mean - m0.mean) * (m1.mean - m0.mean);
  return {num / m0.variance, num / m1.variance, m0.mean, m1.mean, m0.variance,
          m1.variance};
}

double total_snr(int k, PowerMode mode, double snr) {
  return mode == PowerMode::Ipc ? static_cast<double>(k) * snr : snr;
}

}  // namespace

DeflectionReport deflection(const CountLaw& law_h0, const CountLaw& law_h1,
                            const SystemConfig& config) {
  const MgfModel model = make_finite_k_model(config, law_h0, law_h1);
  return report_from_moments(statistic_moments(model, Hypothesis::H0),
                             statistic_moments(model, Hypothesis::H1));
}

DeflectionReport deflection_iid(double pd, double pf, int k, int n, double snr_total) {
  if (!(snr_total > 0.0)) throw DomainError("deflection_iid: SNR must be > 0");
  if (k < 1 || n < 1) throw DomainError("deflection_iid: K, N must be >= 1");
  const double kd = k, nd = n;
  const double num = 4.0 * nd * kd * (pd - pf) * (pd - pf);
  const double base = kd * (1.0 + 1.0 / (2.0 * snr_total));
  const double coeff = 2.0 * (2.0 * nd + 1.0 - kd);
  const double rho0 = pf * (1.0 - pf);
  const double rho1 = pd * (1.0 - pd);
  const double mean0 = 2.0 * nd * kd * pf - kd * nd;
  const double mean1 = 2.0 * nd * kd * pd - kd * nd;
  const double v0 = nd * kd * (base + coeff * rho0);
  const double v1 = nd * kd * (base + coeff * rho1);
  if (!(v0 > 0.0) || !(v1 > 0.0))
    throw NumericalError("deflection_iid: zero conditional variance");
  return {num / (base + coeff * rho0), num / (base + coeff * rho1), mean0, mean1, v0, v1};
}

DeflectionReport deflection_large_system(double pd, double pf, int n, PowerMode mode,
                                         double snr) {
  if (!(pd >= 0.0 && pd <= 1.0 && pf >= 0.0 && pf <= 1.0))
    throw DomainError("deflection_large_system: rates must lie in [0, 1]");
  if (n < 1) throw DomainError("deflection_large_system: N must be >= 1");
  const MgfModel model = make_large_system_model(pd, pf, n, mode, snr);
  return report_from_moments(statistic_moments(model, Hypothesis::H0),
                             statistic_moments(model, Hypothesis::H1));
}

LocalDetectorCurve::LocalDetectorCurve(std::function<double(double)> pd_of_pf)
    : pd_of_pf_(std::move(pd_of_pf)) {
  if (!pd_of_pf_) throw DomainError("LocalDetectorCurve: empty callable");
}

double LocalDetectorCurve::operator()(double pf) const {
  if (!(pf > 0.0 && pf < 1.0))
    throw DomainError("LocalDetectorCurve: pf must lie in (0, 1), got " +
                      std::to_string(pf));
  return pd_of_pf_(pf);
}

LocalDetectorCurve change_in_variance_curve(double snr_obs) {
  if (!(snr_obs > 0.0)) throw DomainError("change_in_variance_curve: snr_obs must be > 0");
  const double exponent = 1.0 / (1.0 + snr_obs);
  return LocalDetectorCurve([exponent](double pf) { return std::pow(pf, exponent); });
}

LocalPfOptimum optimize_local_pf(const LocalDetectorCurve& curve, int k, int n,
                                 PowerMode mode, double snr, DeflectionKind which) {
  const double snr_tot = total_snr(k, mode, snr);
  const auto objective = [&](double pf) {
    const DeflectionReport r = deflection_iid(curve(pf), pf, k, n, snr_tot);
    return which == DeflectionKind::D0 ? r.d0 : r.d1;
  };

  const double lo = kPfFloor, hi = 1.0 - kPfFloor;
  std::vector<double> grid(kCoarsePoints), value(kCoarsePoints);
  int best = 0;
  for (int i = 0; i < kCoarsePoints; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (kCoarsePoints - 1);
    value[static_cast<std::size_t>(i)] = objective(grid[static_cast<std::size_t>(i)]);
    if (value[static_cast<std::size_t>(i)] > value[static_cast<std::size_t>(best)])
      best = i;
  }
  if (!(value[static_cast<std::size_t>(best)] > 1e-15))
    throw NumericalError("optimize_local_pf: objective is flat (pd(pf) == pf?)");

  double a = grid[static_cast<std::size_t>(std::max(0, best - 1))];
  double b = grid[static_cast<std::size_t>(std::min(kCoarsePoints - 1, best + 1))];

  // Golden-section ascent on [a, b].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-7) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    }
  }
  const double pf_star = 0.5 * (a + b);
  return {pf_star, objective(pf_star)};
}

}  // namespace fusion
