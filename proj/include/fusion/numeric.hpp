#pragma once

#include <cstddef>
#include <cstdio>
#include <span>
#include <string>

namespace fusion {

/// Pairwise (cascade) summation. Deterministic for a given input order and
/// far better conditioned than naive left-to-right accumulation on long
/// alternating-sign node sums.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 8) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// 17-significant-digit decimal rendering: lossless for binary64, so
/// parse-then-reserialize of our CSVs is byte-identical.
inline std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf);
}

}  // namespace fusion
