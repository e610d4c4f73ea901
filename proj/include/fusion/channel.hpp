#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fusion/core.hpp"
#include "fusion/rng.hpp"

namespace fusion {

using cdouble = std::complex<double>;

/// Dense row-major complex matrix; just enough for N x K channel work.
class ComplexMatrix {
 public:
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cdouble& operator()(int r, int c) { return data_[idx(r, c)]; }
  const cdouble& operator()(int r, int c) const { return data_[idx(r, c)]; }
  const std::vector<cdouble>& data() const { return data_; }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }
  int rows_, cols_;
  std::vector<cdouble> data_;
};

/// A fading matrix with its MRC combining vector z = H 1_K and |z|^2 cached.
struct ChannelRealization {
  ComplexMatrix h;               // N x K
  std::vector<cdouble> z_mrc;    // row sums of h, length N
  double z_norm2;

  explicit ChannelRealization(ComplexMatrix matrix);

  int n() const { return h.rows(); }
  int k() const { return h.cols(); }
};

struct ReceivedVector {
  std::vector<cdouble> y;
};

/// i.i.d. unit-power Rayleigh entries: real and imaginary parts are each
/// N(0, 1/2).
ChannelRealization sample_channel(Rng& rng, int n, int k);

/// One BPSK decision vector (+1 means the sensor decided H1). CountPmf mode
/// draws ell and then a uniformly random subset of that size.
std::vector<std::int8_t> sample_decisions(Rng& rng, const SensorEnsemble& ensemble,
                                          Hypothesis h);

/// y = H x + w with w ~ complex normal, per-component variance sigma_w2.
ReceivedVector sample_observation(Rng& rng, const ChannelRealization& channel,
                                  std::span<const std::int8_t> x, double sigma_w2);

/// MRC fusion statistic Re(z^H y).
double mrc_statistic(const ChannelRealization& channel, const ReceivedVector& y);

/// Exact log-likelihood ratio over the 2^K decision vectors, log-sum-exp
/// stabilized. K <= 20.
double llr_statistic(const ChannelRealization& channel, const ReceivedVector& y,
                     const SensorEnsemble& ensemble, double sigma_w2);

}  // namespace fusion
