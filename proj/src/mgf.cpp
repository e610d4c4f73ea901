#include "fusion/mgf.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace fusion {

namespace {

constexpr double kPoleTolerance = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError(std::string(name) + " must lie in [0, 1]");
}

[[noreturn]] void throw_strip_violation(double re, const ConvergenceStrip& strip) {
  std::ostringstream os;
  os << "Re(s) = " << re << " outside the MGF convergence strip (" << strip.lo << ", "
     << strip.hi << "): " << (re <= strip.lo ? "lower" : "upper") << " boundary violated";
  throw DomainError(os.str());
}

/// [ (1 + a s)(1 + b s) ]^{-n} with a pole guard. Inside the convergence
/// strip both brackets have positive real part, so the principal log of
/// their product is continuous there.
std::complex<double> bracket_power(std::complex<double> s, double a, double b, int n) {
  const std::complex<double> bp = 1.0 + a * s;
  const std::complex<double> bm = 1.0 + b * s;
  if (std::abs(bp) < kPoleTolerance || std::abs(bm) < kPoleTolerance)
    throw NumericalError("MGF evaluated on a pole of its bracket product");
  return std::exp(-static_cast<double>(n) * std::log(bp * bm));
}

/// Bracket coefficients of the count-conditioned MGF. The first is always
/// positive, the second always negative, so each contributes one pole on a
/// fixed side of the axis.
struct BracketCoeffs {
  double plus;
  double minus;
};

BracketCoeffs finite_k_coeffs(int ell, int k, const XiPair& xi) {
  return {0.5 * (k * xi.plus - 2.0 * ell), 0.5 * (k * xi.minus - 2.0 * ell)};
}

ConvergenceStrip strip_from_brackets(double a, double b) {
  // Poles at -1/a and -1/b; a zero coefficient contributes no pole.
  double lo = -kInf, hi = kInf;
  for (double c : {a, b}) {
    if (c > 0.0) lo = std::max(lo, -1.0 / c);
    else if (c < 0.0) hi = std::min(hi, -1.0 / c);
  }
  return {lo, hi};
}

BracketCoeffs large_system_coeffs(const LargeSystemIpcModel& m, Hypothesis h) {
  const double p = m.rate(h);
  return {1.0 - p, -p};
}

BracketCoeffs large_system_coeffs(const LargeSystemTpcModel& m, Hypothesis h) {
  const double p = m.rate(h);
  return {0.5 * (m.xi.plus - 2.0 * p), 0.5 * (m.xi.minus - 2.0 * p)};
}

}  // namespace

XiPair xi_pair(double snr_total) {
  if (!(snr_total > 0.0)) throw DomainError("xi_pair: SNR must be > 0");
  const double root = std::sqrt(1.0 + 1.0 / snr_total);
  return {1.0 + root, 1.0 - root};
}

FiniteKModel::FiniteKModel(int k_, int n_, double snr_total, CountLaw h0, CountLaw h1)
    : k(k_), n(n_), snr(snr_total), law_h0(std::move(h0)), law_h1(std::move(h1)),
      xi(xi_pair(snr_total)) {
  if (k < 1 || n < 1) throw DomainError("FiniteKModel: K, N must be >= 1");
  if (law_h0.k() != k || law_h1.k() != k)
    throw DomainError("FiniteKModel: count law size != K + 1");
}

LargeSystemIpcModel::LargeSystemIpcModel(double pd_, double pf_, int n_)
    : pd(pd_), pf(pf_), n(n_) {
  check_probability(pd, "LargeSystemIpcModel: pd");
  check_probability(pf, "LargeSystemIpcModel: pf");
  if (n < 1) throw DomainError("LargeSystemIpcModel: N must be >= 1");
}

LargeSystemTpcModel::LargeSystemTpcModel(double pd_, double pf_, int n_, double snr_)
    : pd(pd_), pf(pf_), n(n_), snr(snr_), xi(xi_pair(snr_)) {
  check_probability(pd, "LargeSystemTpcModel: pd");
  check_probability(pf, "LargeSystemTpcModel: pf");
  if (n < 1) throw DomainError("LargeSystemTpcModel: N must be >= 1");
}

MgfModel make_finite_k_model(const SystemConfig& config, const SensorEnsemble& ensemble) {
  if (ensemble.k() != config.k)
    throw DomainError("make_finite_k_model: ensemble K != config K");
  return FiniteKModel(config.k, config.n, config.snr_total(),
                      ensemble.count_law(Hypothesis::H0),
                      ensemble.count_law(Hypothesis::H1));
}

MgfModel make_finite_k_model(const SystemConfig& config, CountLaw law_h0, CountLaw law_h1) {
  return FiniteKModel(config.k, config.n, config.snr_total(), std::move(law_h0),
                      std::move(law_h1));
}

MgfModel make_large_system_model(double pd, double pf, int n, PowerMode mode, double snr) {
  if (mode == PowerMode::Ipc) return LargeSystemIpcModel(pd, pf, n);
  return LargeSystemTpcModel(pd, pf, n, snr);
}

std::complex<double> mgf_given_count(std::complex<double> s, int ell, int k, int n,
                                     double snr_total) {
  if (ell < 0 || ell > k) throw DomainError("mgf_given_count: ell outside 0..K");
  if (k < 1 || n < 1) throw DomainError("mgf_given_count: K, N must be >= 1");
  const auto c = finite_k_coeffs(ell, k, xi_pair(snr_total));
  return bracket_power(s, c.plus, c.minus, n);
}

std::complex<double> mgf_conditional(std::complex<double> s, const MgfModel& model,
                                     Hypothesis h) {
  const ConvergenceStrip strip = convergence_strip(model, h);
  if (!strip.contains(s.real())) throw_strip_violation(s.real(), strip);
  return std::visit(
      [&](const auto& m) -> std::complex<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteKModel>) {
          const CountLaw& law = m.law(h);
          std::complex<double> acc{0.0, 0.0};
          for (int ell = 0; ell <= m.k; ++ell) {
            const double w = law[ell];
            if (w == 0.0) continue;
            const auto c = finite_k_coeffs(ell, m.k, m.xi);
            acc += w * bracket_power(s, c.plus, c.minus, m.n);
          }
          return acc;
        } else {
          const auto c = large_system_coeffs(m, h);
          return bracket_power(s, c.plus, c.minus, m.n);
        }
      },
      model);
}

std::complex<double> mgf_large_system(std::complex<double> s, const MgfModel& model,
                                      Hypothesis h) {
  if (std::holds_alternative<FiniteKModel>(model))
    throw CapabilityError("mgf_large_system: model is finite-K");
  return mgf_conditional(s, model, h);
}

ConvergenceStrip convergence_strip(const MgfModel& model, Hypothesis h) {
  return std::visit(
      [&](const auto& m) -> ConvergenceStrip {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteKModel>) {
          const CountLaw& law = m.law(h);
          double lo = -kInf, hi = kInf;
          for (int ell = 0; ell <= m.k; ++ell) {
            if (law[ell] == 0.0) continue;
            const auto c = finite_k_coeffs(ell, m.k, m.xi);
            const ConvergenceStrip s = strip_from_brackets(c.plus, c.minus);
            lo = std::max(lo, s.lo);
            hi = std::min(hi, s.hi);
          }
          return {lo, hi};
        } else {
          const auto c = large_system_coeffs(m, h);
          return strip_from_brackets(c.plus, c.minus);
        }
      },
      model);
}

StatisticMoments statistic_moments(const MgfModel& model, Hypothesis h) {
  return std::visit(
      [&](const auto& m) -> StatisticMoments {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FiniteKModel>) {
          const CountMoments cm = count_moments(m.law(h));
          const double k = m.k, n = m.n;
          const double mean = 2.0 * n * cm.mean - k * n;
          const double variance = k * k * n * (1.0 + 1.0 / (2.0 * m.snr)) -
                                  2.0 * k * n * cm.mean + 2.0 * n * cm.second_moment +
                                  4.0 * n * n * cm.variance;
          return {mean, variance};
        } else if constexpr (std::is_same_v<T, LargeSystemIpcModel>) {
          const double p = m.rate(h);
          return {m.n * (2.0 * p - 1.0), m.n * (1.0 - 2.0 * p * (1.0 - p))};
        } else {
          const double p = m.rate(h);
          return {m.n * (2.0 * p - 1.0),
                  m.n * (1.0 + 1.0 / (2.0 * m.snr) - 2.0 * p * (1.0 - p))};
        }
      },
      model);
}

}  // namespace fusion
