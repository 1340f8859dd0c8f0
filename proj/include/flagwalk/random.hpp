// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace flagwalk {

using Rng = std::mt19937_64;

/// Stream tags keep the independent consumers of one user seed apart.
enum class Stream : std::uint64_t {
  chain = 1,
  lyapunov_qr = 2,
  lyapunov_birkhoff = 3,
  haar = 4,
  ensemble = 5,
  generator = 6,
  divergence = 7,
  scenario = 8,
  frames = 9,
};

/// Deterministic sub-stream derived from (seed, tag, index).
inline Rng make_stream(std::uint64_t seed, Stream tag, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), 0x6a09e667u};
  return Rng(seq);
}

/// Child stream drawn from a parent generator; used when an API only receives an Rng.
inline Rng split(Rng& parent, std::uint64_t index) {
  const std::uint64_t a = parent();
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace flagwalk
