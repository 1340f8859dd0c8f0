// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flagwalk {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised by qr_positive when the input is numerically rank deficient.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// |E| >= 2 or sin(k) numerically zero.
struct BandEdgeError : std::domain_error {
  using std::domain_error::domain_error;
};

/// AU + BV lost rank during a flag action. Carries the chain step when known.
struct DegenerateFrameError : std::runtime_error {
  DegenerateFrameError(const std::string& what, std::int64_t step = -1)
      : std::runtime_error(what), step(step) {}
  std::int64_t step;
};

struct DegenerateVolumeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace flagwalk
