// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace flagwalk {

/// Streaming mean/variance (Welford), mergeable (Chan et al.).
struct Accumulator {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Accumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n1 = static_cast<double>(count), n2 = static_cast<double>(o.count);
    const double d = o.mean - mean;
    const double n = n1 + n2;
    mean += d * n2 / n;
    m2 += o.m2 + d * d * n1 * n2 / n;
    count += o.count;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_of_mean() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// Monte Carlo result: sample mean and its standard error.
struct Estimate {
  double value = 0.0;
  double stderr = 0.0;
  std::int64_t n = 0;
};

inline Estimate to_estimate(const Accumulator& a) { return {a.mean, a.stderr_of_mean(), a.count}; }

inline Accumulator accumulate(std::span<const double> xs) {
  Accumulator a;
  for (double x : xs) a.add(x);
  return a;
}

}  // namespace flagwalk
