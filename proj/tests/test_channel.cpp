#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "fusion/channel.hpp"
#include "test_util.hpp"

using namespace fusion;

TEST_CASE("sample_channel is deterministic and has the right moments") {
  Rng a(1234), b(1234);
  const ChannelRealization ha = sample_channel(a, 3, 5);
  const ChannelRealization hb = sample_channel(b, 3, 5);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 5; ++c) CHECK(ha.h(r, c) == hb.h(r, c));

  // z cache coherence
  for (int r = 0; r < 3; ++r) {
    cdouble row{0.0, 0.0};
    for (int c = 0; c < 5; ++c) row += ha.h(r, c);
    CHECK(std::abs(row - ha.z_mrc[static_cast<std::size_t>(r)]) < 1e-12);
  }

  Rng rng(55);
  double power = 0.0;
  cdouble mean{0.0, 0.0};
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    const cdouble h = rng.complex_normal(1.0);
    power += std::norm(h);
    mean += h;
  }
  power /= draws;
  mean /= static_cast<double>(draws);
  CHECK(std::abs(power - 1.0) < 0.01);
  CHECK(std::abs(mean) < 0.01);
}

TEST_CASE("sample_decisions respects the ensemble") {
  const SensorEnsemble perfect = SensorEnsemble::iid(5, 1.0, 0.0);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto x1 = sample_decisions(rng, perfect, Hypothesis::H1);
    const auto x0 = sample_decisions(rng, perfect, Hypothesis::H0);
    for (int k = 0; k < 5; ++k) {
      CHECK(x1[static_cast<std::size_t>(k)] == 1);
      CHECK(x0[static_cast<std::size_t>(k)] == -1);
    }
  }

  const int k = 10;
  const SensorEnsemble iid = SensorEnsemble::iid(k, 0.5, 0.05);
  const int draws = 1000000;
  std::uint64_t ones = 0;
  Rng rng2(8);
  for (int i = 0; i < draws; ++i)
    for (std::int8_t v : sample_decisions(rng2, iid, Hypothesis::H0))
      if (v == 1) ++ones;
  const double mean_count = static_cast<double>(ones) / draws;
  const double sd = std::sqrt(k * 0.05 * 0.95 / draws);
  CHECK(std::abs(mean_count - 0.05 * k) < 3.0 * sd);
}

TEST_CASE("count-pmf sampling reproduces the count law") {
  const SensorEnsemble cp = SensorEnsemble::from_count_pmf(
      {0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1});
  Rng rng(9);
  const int draws = 200000;
  std::vector<int> hist(4, 0);
  for (int i = 0; i < draws; ++i) {
    const auto x = sample_decisions(rng, cp, Hypothesis::H0);
    int ell = 0;
    for (std::int8_t v : x)
      if (v == 1) ++ell;
    ++hist[static_cast<std::size_t>(ell)];
  }
  const double expected[] = {0.1, 0.2, 0.3, 0.4};
  for (int ell = 0; ell <= 3; ++ell) {
    const double p = static_cast<double>(hist[static_cast<std::size_t>(ell)]) / draws;
    const double sd = std::sqrt(expected[ell] * (1 - expected[ell]) / draws);
    CHECK(std::abs(p - expected[ell]) < 4.0 * sd);
  }
}

TEST_CASE("joint-pmf sampling reproduces the joint law") {
  const SensorEnsemble jp = SensorEnsemble::from_joint_pmf(
      {0.4, 0.2, 0.1, 0.3}, {0.25, 0.25, 0.25, 0.25});
  Rng rng(10);
  const int draws = 200000;
  std::vector<int> hist(4, 0);
  for (int i = 0; i < draws; ++i) {
    const auto x = sample_decisions(rng, jp, Hypothesis::H0);
    std::uint32_t mask = 0;
    for (int k = 0; k < 2; ++k)
      if (x[static_cast<std::size_t>(k)] == 1) mask |= (1u << k);
    ++hist[mask];
  }
  const double expected[] = {0.4, 0.2, 0.1, 0.3};
  for (int m = 0; m < 4; ++m) {
    const double p = static_cast<double>(hist[static_cast<std::size_t>(m)]) / draws;
    const double sd = std::sqrt(expected[m] * (1 - expected[m]) / draws);
    CHECK(std::abs(p - expected[m]) < 4.0 * sd);
  }
}

TEST_CASE("sample_observation: noiseless, reproducible, correct noise power") {
  Rng rng(11);
  const ChannelRealization channel = sample_channel(rng, 4, 3);
  const std::vector<std::int8_t> x = {1, -1, 1};

  Rng r1(3), r2(3);
  const ReceivedVector clean = sample_observation(r1, channel, x, 0.0);
  for (int n = 0; n < 4; ++n) {
    cdouble hx{0.0, 0.0};
    for (int c = 0; c < 3; ++c)
      hx += channel.h(n, c) * static_cast<double>(x[static_cast<std::size_t>(c)]);
    CHECK(clean.y[static_cast<std::size_t>(n)] == hx);
  }
  const ReceivedVector again = sample_observation(r2, channel, x, 0.0);
  for (int n = 0; n < 4; ++n)
    CHECK(clean.y[static_cast<std::size_t>(n)] == again.y[static_cast<std::size_t>(n)]);

  const double sigma_w2 = 0.7;
  Rng rn(4);
  double acc = 0.0;
  const int draws = 250000;  // 4 components each -> 1e6 noise samples
  for (int i = 0; i < draws; ++i) {
    const ReceivedVector y = sample_observation(rn, channel, x, sigma_w2);
    for (int n = 0; n < 4; ++n)
      acc += std::norm(y.y[static_cast<std::size_t>(n)] -
                       clean.y[static_cast<std::size_t>(n)]);
  }
  acc /= 4.0 * draws;
  CHECK(std::abs(acc - sigma_w2) < 0.01 * sigma_w2);

  std::vector<std::int8_t> bad = {1, -1};
  CHECK_THROWS_AS(sample_observation(rn, channel, bad, 1.0), DomainError);
}

TEST_CASE("mrc_statistic identities") {
  Rng rng(12);
  const ChannelRealization channel = sample_channel(rng, 3, 6);

  ReceivedVector self{channel.z_mrc};
  CHECK(mrc_statistic(channel, self) ==
        doctest::Approx(channel.z_norm2).epsilon(1e-12));

  ReceivedVector rotated{channel.z_mrc};
  for (auto& v : rotated.y) v *= cdouble{0.0, 1.0};
  CHECK(std::abs(mrc_statistic(channel, rotated)) < 1e-12 * channel.z_norm2);

  Rng rn(13);
  const std::vector<std::int8_t> x = {1, 1, -1, 1, -1, -1};
  const ReceivedVector y = sample_observation(rn, channel, x, 1.0);
  ReceivedVector neg = y;
  for (auto& v : neg.y) v = -v;
  CHECK(mrc_statistic(channel, neg) == doctest::Approx(-mrc_statistic(channel, y)));

  // cache-free recomputation
  cdouble direct{0.0, 0.0};
  for (int r = 0; r < 3; ++r) {
    cdouble row{0.0, 0.0};
    for (int c = 0; c < 6; ++c) row += channel.h(r, c);
    direct += std::conj(row) * y.y[static_cast<std::size_t>(r)];
  }
  CHECK(std::abs(mrc_statistic(channel, y) - direct.real()) < 1e-12);
}

TEST_CASE("conditional mean and variance of the statistic for fixed H, x") {
  Rng rng(14);
  const ChannelRealization channel = sample_channel(rng, 2, 4);
  const std::vector<std::int8_t> x = {1, -1, -1, 1};
  const double sigma_w2 = 2.0;

  cdouble zhx{0.0, 0.0};
  for (int r = 0; r < 2; ++r) {
    cdouble hx{0.0, 0.0};
    for (int c = 0; c < 4; ++c)
      hx += channel.h(r, c) * static_cast<double>(x[static_cast<std::size_t>(c)]);
    zhx += std::conj(channel.z_mrc[static_cast<std::size_t>(r)]) * hx;
  }
  const double expected_mean = zhx.real();
  const double expected_var = 0.5 * sigma_w2 * channel.z_norm2;

  Rng rn(15);
  std::vector<double> samples;
  samples.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    const ReceivedVector y = sample_observation(rn, channel, x, sigma_w2);
    samples.push_back(mrc_statistic(channel, y));
  }
  const auto stats = testutil::sample_stats(samples);
  CHECK(std::abs(stats.mean - expected_mean) < 4.0 * stats.stderr_mean);
  CHECK(std::abs(stats.variance - expected_var) < 4.0 * stats.stderr_variance);
}

TEST_CASE("llr_statistic identities and high-precision oracle") {
  const int k = 6, n = 2;
  const double sigma_w2 = 1.3;
  Rng rng(16);
  const ChannelRealization channel = sample_channel(rng, n, k);

  // identical hypothesis laws -> 0
  const SensorEnsemble same = SensorEnsemble::iid(k, 0.3, 0.3);
  const std::vector<std::int8_t> x = {1, -1, 1, 1, -1, 1};
  const ReceivedVector y = sample_observation(rng, channel, x, sigma_w2);
  CHECK(std::abs(llr_statistic(channel, y, same, sigma_w2)) < 1e-12);

  // perfect sensors: llr == (4 / sigma_w2) * mrc
  const SensorEnsemble perfect = SensorEnsemble::iid(k, 1.0, 0.0);
  for (int i = 0; i < 10; ++i) {
    const ReceivedVector yy = sample_observation(rng, channel, x, sigma_w2);
    const double llr = llr_statistic(channel, yy, perfect, sigma_w2);
    const double expected = 4.0 / sigma_w2 * mrc_statistic(channel, yy);
    CHECK(llr == doctest::Approx(expected).epsilon(1e-9));
  }

  // long double direct-sum oracle on random draws
  const SensorEnsemble ens = SensorEnsemble::iid(k, 0.6, 0.1);
  for (int trial = 0; trial < 10; ++trial) {
    const ChannelRealization ch = sample_channel(rng, n, k);
    const auto xx = sample_decisions(rng, ens, Hypothesis::H1);
    const ReceivedVector yy = sample_observation(rng, ch, xx, sigma_w2);

    long double best = -1e30L;
    std::vector<long double> exponents(1u << k);
    std::vector<long double> w0(1u << k), w1(1u << k);
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      long double norm2 = 0.0L;
      for (int r = 0; r < n; ++r) {
        long double re = yy.y[static_cast<std::size_t>(r)].real();
        long double im = yy.y[static_cast<std::size_t>(r)].imag();
        for (int c = 0; c < k; ++c) {
          const long double sign = (mask & (1u << c)) ? 1.0L : -1.0L;
          re -= sign * ch.h(r, c).real();
          im -= sign * ch.h(r, c).imag();
        }
        norm2 += re * re + im * im;
      }
      exponents[mask] = -norm2 / sigma_w2;
      w0[mask] = ens.joint_weight(mask, Hypothesis::H0);
      w1[mask] = ens.joint_weight(mask, Hypothesis::H1);
      best = std::max(best, exponents[mask]);
    }
    long double s0 = 0.0L, s1 = 0.0L;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      s0 += w0[mask] * std::exp(exponents[mask] - best);
      s1 += w1[mask] * std::exp(exponents[mask] - best);
    }
    const double ref = static_cast<double>(std::log(s1) - std::log(s0));
    const double got = llr_statistic(ch, yy, ens, sigma_w2);
    CHECK(got == doctest::Approx(ref).epsilon(1e-9));
  }

  // capability guard
  Rng big_rng(77);
  const ChannelRealization big = sample_channel(big_rng, 1, 21);
  const SensorEnsemble big_ens = SensorEnsemble::iid(21, 0.6, 0.1);
  ReceivedVector by;
  by.y.assign(1, cdouble{0.0, 0.0});
  CHECK_THROWS_AS(llr_statistic(big, by, big_ens, 1.0), CapabilityError);
}
