#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fusion/deflection.hpp"
#include "test_util.hpp"

using namespace fusion;

TEST_CASE("deflection vanishes iff the laws coincide") {
  const SystemConfig config(8, 2, PowerMode::Tpc, 10.0);
  const CountLaw law0 = binomial_count_law(8, 0.3, Hypothesis::H0);
  const CountLaw law1 = binomial_count_law(8, 0.3, Hypothesis::H1);
  const DeflectionReport r = deflection(law0, law1, config);
  CHECK(r.d0 == 0.0);
  CHECK(r.d1 == 0.0);
}

TEST_CASE("iid closed form frozen value") {
  // K=8, N=2, total SNR 10, (pd, pf) = (0.5, 0.05)
  const DeflectionReport r = deflection_iid(0.5, 0.05, 8, 2, 10.0);
  CHECK(r.d0 == doctest::Approx(1.5970425138632163).epsilon(1e-12));
}

TEST_CASE("generic moment path equals the iid closed form") {
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    const int k = 2 + static_cast<int>(rng.uniform01() * 99.0);
    const int n = 1 + static_cast<int>(rng.uniform01() * 15.0);
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.uniform01());
    const double pf = 0.01 + 0.48 * rng.uniform01();
    const double pd = pf + (0.99 - pf) * rng.uniform01();
    const SystemConfig config(k, n, PowerMode::Tpc, snr);
    const DeflectionReport generic =
        deflection(binomial_count_law(k, pf, Hypothesis::H0),
                   binomial_count_law(k, pd, Hypothesis::H1), config);
    const DeflectionReport closed = deflection_iid(pd, pf, k, n, config.snr_total());
    CHECK(generic.d0 == doctest::Approx(closed.d0).epsilon(1e-10));
    CHECK(generic.d1 == doctest::Approx(closed.d1).epsilon(1e-10));
  }
}

TEST_CASE("large-system deflections") {
  for (int n : {1, 2, 4, 8}) {
    const DeflectionReport ideal = deflection_large_system(1.0, 0.0, n, PowerMode::Ipc, 1.0);
    CHECK(ideal.d0 == 4.0 * n);
    CHECK(ideal.d1 == 4.0 * n);
  }

  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 7.0);
    const double snr = std::pow(10.0, -1.0 + 3.0 * rng.uniform01());
    const double pf = 0.01 + 0.4 * rng.uniform01();
    const double pd = pf + (0.95 - pf) * rng.uniform01();
    const DeflectionReport tpc = deflection_large_system(pd, pf, n, PowerMode::Tpc, snr);
    const DeflectionReport ipc = deflection_large_system(pd, pf, n, PowerMode::Ipc, snr);
    CHECK(tpc.d0 < ipc.d0);
    CHECK(tpc.d1 < ipc.d1);
  }

  const DeflectionReport nearly =
      deflection_large_system(0.6, 0.1, 3, PowerMode::Tpc, 1e8);
  const DeflectionReport limit = deflection_large_system(0.6, 0.1, 3, PowerMode::Ipc, 1.0);
  CHECK(nearly.d0 == doctest::Approx(limit.d0).epsilon(1e-6));
  CHECK(nearly.d1 == doctest::Approx(limit.d1).epsilon(1e-6));
}

TEST_CASE("deflection grows with K and saturates at the large-system value") {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 7.0);
    const double snr = std::pow(10.0, rng.uniform01());
    const double pf = 0.02 + 0.3 * rng.uniform01();
    const double pd = pf + 0.1 + (0.9 - pf - 0.1) * rng.uniform01();
    double previous = 0.0;
    for (int k : {5, 10, 20, 40, 80}) {
      const double d = deflection_iid(pd, pf, k, n, snr).d1;  // Tpc: fixed total SNR
      CHECK(d > previous);
      previous = d;
    }
    const double finite = deflection_iid(pd, pf, 10000, n, snr).d1;
    const double limit = deflection_large_system(pd, pf, n, PowerMode::Tpc, snr).d1;
    CHECK(std::abs(finite - limit) / limit < 1e-2);
  }
}

TEST_CASE("change-in-variance curve") {
  const LocalDetectorCurve curve = change_in_variance_curve(std::pow(10.0, 0.5));
  CHECK(curve(0.05) == doctest::Approx(0.4868818049513605).epsilon(1e-10));
  CHECK(curve(1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-9));

  const LocalDetectorCurve flat = change_in_variance_curve(1e-12);
  CHECK(std::abs(flat(0.3) - 0.3) < 1e-9);

  CHECK_THROWS_AS(curve(0.0), DomainError);
  CHECK_THROWS_AS(curve(1.0), DomainError);
  CHECK_THROWS_AS(change_in_variance_curve(0.0), DomainError);

  // informative and monotone
  double prev = 0.0;
  for (double pf = 0.01; pf < 1.0; pf += 0.01) {
    const double pd = curve(pf);
    CHECK(pd >= pf);
    CHECK(pd >= prev);
    prev = pd;
  }
}

TEST_CASE("optimize_local_pf against a dense-grid oracle") {
  const int k = 50, n = 4;
  const double snr = testutil::db(5.0);
  const double snr_obs = testutil::db(5.0);
  const LocalDetectorCurve curve = change_in_variance_curve(snr_obs);

  for (DeflectionKind which : {DeflectionKind::D0, DeflectionKind::D1}) {
    const LocalPfOptimum opt = optimize_local_pf(curve, k, n, PowerMode::Tpc, snr, which);

    // dense grid oracle (1e5 points) arbitrates the argmax
    const double snr_total = snr;  // Tpc
    double best_pf = 0.0, best_val = -1.0;
    const int points = 100000;
    for (int i = 0; i <= points; ++i) {
      const double pf = 1e-4 + (1.0 - 2e-4) * static_cast<double>(i) / points;
      const DeflectionReport r = deflection_iid(curve(pf), pf, k, n, snr_total);
      const double v = which == DeflectionKind::D0 ? r.d0 : r.d1;
      if (v > best_val) {
        best_val = v;
        best_pf = pf;
      }
    }
    CHECK(std::abs(opt.pf_star - best_pf) < 1e-4);
    CHECK(opt.d_star == doctest::Approx(best_val).epsilon(1e-6));

    // argmax dominance over the coarse grid
    for (int i = 0; i < 64; ++i) {
      const double pf = 1e-4 + (1.0 - 2e-4) * static_cast<double>(i) / 63.0;
      const DeflectionReport r = deflection_iid(curve(pf), pf, k, n, snr_total);
      CHECK(opt.d_star >= (which == DeflectionKind::D0 ? r.d0 : r.d1) - 1e-12);
    }

    // argmax is invariant to positive scaling of the objective
    double scaled_best_pf = 0.0, scaled_best = -1.0;
    for (int i = 0; i <= points; ++i) {
      const double pf = 1e-4 + (1.0 - 2e-4) * static_cast<double>(i) / points;
      const DeflectionReport r = deflection_iid(curve(pf), pf, k, n, snr_total);
      const double v = 2.7 * (which == DeflectionKind::D0 ? r.d0 : r.d1);
      if (v > scaled_best) {
        scaled_best = v;
        scaled_best_pf = pf;
      }
    }
    CHECK(scaled_best_pf == best_pf);
  }
}

TEST_CASE("quasi-concavity witness on the design scenarios") {
  const double snr = testutil::db(5.0);
  const LocalDetectorCurve curve = change_in_variance_curve(testutil::db(5.0));
  for (int k : {15, 50}) {
    for (PowerMode mode : {PowerMode::Ipc, PowerMode::Tpc}) {
      for (DeflectionKind which : {DeflectionKind::D0, DeflectionKind::D1}) {
        const double snr_total = mode == PowerMode::Ipc ? k * snr : snr;
        std::vector<double> values(64);
        for (int i = 0; i < 64; ++i) {
          const double pf = 1e-4 + (1.0 - 2e-4) * static_cast<double>(i) / 63.0;
          const DeflectionReport r = deflection_iid(curve(pf), pf, k, 4, snr_total);
          values[static_cast<std::size_t>(i)] =
              which == DeflectionKind::D0 ? r.d0 : r.d1;
        }
        int local_maxima = 0;
        for (int i = 1; i < 63; ++i) {
          if (values[static_cast<std::size_t>(i)] >
                  values[static_cast<std::size_t>(i - 1)] + 1e-12 &&
              values[static_cast<std::size_t>(i)] >
                  values[static_cast<std::size_t>(i + 1)] + 1e-12)
            ++local_maxima;
        }
        CHECK(local_maxima <= 1);
      }
    }
  }
}

TEST_CASE("flat objective is rejected") {
  const LocalDetectorCurve identity([](double pf) { return pf; });
  CHECK_THROWS_AS(optimize_local_pf(identity, 10, 2, PowerMode::Tpc, 10.0,
                                    DeflectionKind::D1),
                  NumericalError);
}
