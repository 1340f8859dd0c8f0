// SPDX-License-Identifier: Apache-2.0
//
// Random Hermitian coupling matrices with E(W_ij W_kl) = delta_il delta_jk,
// Monte Carlo validators for their moment identities, and the
// uncorrelated-coefficient decomposition of a centered random vector.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flagwalk/matrix_core.hpp"
#include "flagwalk/parallel.hpp"

namespace flagwalk {

enum class EnsembleKind { gaussian, rademacher };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_from_string(const std::string& name);

struct WignerSpec {
  int L = 1;
  EnsembleKind kind = EnsembleKind::gaussian;
};

/// Hermitian L x L sample. Diagonal real with unit variance, off-diagonal
/// entries with E(W^2) = 0 and E|W|^2 = 1, mirrored by conjugation.
ComplexMatrix sample_w(const WignerSpec& spec, Rng& rng);
/// Same, writing into a preallocated matrix.
void sample_w_into(const WignerSpec& spec, Rng& rng, ComplexMatrix& out);

/// Fills an already sized (possibly fixed-size) L x L matrix. Every sampler in
/// the library goes through this, so equal streams give equal draws.
template <class Mat>
void sample_w_fill(const WignerSpec& spec, Rng& rng, Eigen::MatrixBase<Mat>& W) {
  const int L = spec.L;
  const double s = 0.7071067811865476;  // 1/sqrt(2)
  if (spec.kind == EnsembleKind::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < L; ++i) {
      W(i, i) = normal(rng);
      for (int j = i + 1; j < L; ++j) {
        const double a = normal(rng);
        const double b = normal(rng);
        W(i, j) = Complex(a * s, b * s);
        W(j, i) = std::conj(W(i, j));
      }
    }
    return;
  }
  // One 64-bit draw supplies up to 64 independent signs.
  std::uint64_t bits = rng();
  int left = 64;
  auto sign = [&]() {
    if (left == 0) {
      bits = rng();
      left = 64;
    }
    const double v = (bits & 1u) ? 1.0 : -1.0;
    bits >>= 1;
    --left;
    return v;
  };
  for (int i = 0; i < L; ++i) {
    W(i, i) = sign();
    for (int j = i + 1; j < L; ++j) {
      const double a = sign();
      const double b = sign();
      W(i, j) = Complex(a * s, b * s);
      W(j, i) = std::conj(W(i, j));
    }
  }
}

/// Largest entrywise deviation of an identity, in units of its own standard error.
struct IdentityDeviation {
  std::string name;
  double max_abs_deviation = 0.0;  ///< max over entries and re/im parts
  double stderr_at_max = 0.0;      ///< standard error of that entry
  double max_sigma = 0.0;          ///< max over entries of |dev| / stderr (0 when both vanish)
};

struct MomentReport {
  std::int64_t nsamples = 0;
  std::vector<IdentityDeviation> identities;  ///< E(W), E(W^2), E(Tr PW Tr QW), E(WPW), E(WQ conj W)
  bool passes(double sigma) const;
};

/// Monte Carlo check of E(W) = 0, E(W^2) = L 1, E(Tr(PW) Tr(QW)) = Tr(PQ),
/// E(W P W) = Tr(P) 1 and E(W Q conj(W)) = Q^t.
MomentReport verify_w_identities(const WignerSpec& spec, const ComplexMatrix& P,
                                 const ComplexMatrix& Q, std::int64_t nsamples,
                                 std::uint64_t seed, Exec exec = Exec::parallel);

/// Entrywise second-moment conditions: E(W_ij^2) = 0, E|W_ij|^2 = 1 (i < j),
/// E(W_kk^2) = 1.
MomentReport verify_variance_conditions(const WignerSpec& spec, std::int64_t nsamples,
                                        std::uint64_t seed, Exec exec = Exec::parallel);

/// a = sum_i v_i(a) b_i with E(v_i v_j) = E(v_i^2) delta_ij.
struct WhiteningResult {
  RealMatrix vectors;          ///< n x r, column i is b_i
  RealMatrix coefficient_map;  ///< r x n, v = coefficient_map * a
  RealVector variances;        ///< E(v_i^2) under the input covariance
  RealMatrix covariance;       ///< the (possibly empirical) n x n second-moment matrix
  std::vector<int> kept;       ///< coordinates retained as a basis of span(supp(a))
  /// Lower unitriangular lambda_{k,i} on the kept coordinates (r x r), v = Lambda a_kept.
  RealMatrix lambda;

  RealVector coefficients(const RealVector& a) const { return coefficient_map * a; }
  RealVector reconstruct(const RealVector& v) const { return vectors * v; }
  int rank() const { return static_cast<int>(vectors.cols()); }
};

struct WhitenOptions {
  double rank_cutoff = 1e-10;  ///< relative to the largest covariance eigenvalue
  bool unit_variance = false;  ///< rescale so that E(v_i^2) = 1
};

/// Covariance path. Throws InputError when the matrix is not symmetric PSD
/// within 1e-10.
WhiteningResult whiten(const RealMatrix& covariance, const WhitenOptions& opts = {});
/// Sample path: uses the empirical second moment E(a a^t) of the rows of `samples`.
WhiteningResult whiten_samples(const std::vector<RealVector>& samples,
                               const WhitenOptions& opts = {});

}  // namespace flagwalk
