// SPDX-License-Identifier: Apache-2.0
//
// L weakly coupled wires at energy E = -2 cos(k): transfer matrices, the
// Cayley/normal-form change of basis, the rotation R_k and the closed
// group it generates.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flagwalk/ensembles.hpp"
#include "flagwalk/matrix_core.hpp"

namespace flagwalk {

class WiresModel {
 public:
  /// Throws BandEdgeError unless |E| < 2 with sin(k) bounded away from 0.
  WiresModel(int L, double E, double lambda, EnsembleKind kind = EnsembleKind::gaussian);

  int L() const { return L_; }
  double E() const { return E_; }
  double k() const { return k_; }
  double lambda() const { return lambda_; }
  double sin_k() const { return sin_k_; }
  const WignerSpec& spec() const { return spec_; }

  WiresModel with_lambda(double lambda) const { return {L_, E_, lambda, spec_.kind}; }

  const ComplexMatrix& cayley() const { return C_; }
  const ComplexMatrix& normalizer() const { return N_; }
  /// C N and its inverse, the full change of basis into normal form.
  const ComplexMatrix& to_normal() const { return CN_; }
  const ComplexMatrix& from_normal() const { return CN_inv_; }
  const ComplexMatrix& rotation() const { return Rk_; }

  /// (lambda W - E, -1; 1, 0)
  ComplexMatrix transfer_hat(const ComplexMatrix& W) const;
  /// C N T_hat N^{-1} C^*, evaluated as the conjugation.
  ComplexMatrix normal_form(const ComplexMatrix& W) const;
  /// (i / (2 sin k)) (W, W; -W, -W)
  ComplexMatrix perturbation(const ComplexMatrix& W) const;
  /// R_k expm(lambda P(W)); the step matrix used by the Markov chain.
  ComplexMatrix step_matrix(const ComplexMatrix& W) const;

  ComplexMatrix sample_w(Rng& rng) const { return flagwalk::sample_w(spec_, rng); }

 private:
  int L_;
  double E_, k_, lambda_, sin_k_;
  WignerSpec spec_;
  ComplexMatrix C_, N_, CN_, CN_inv_, Rk_;
};

/// diag(e^{-i theta} 1_L, e^{i theta} 1_L)
ComplexMatrix rotation_matrix(int L, double theta);

/// k = arccos(-E/2). Throws BandEdgeError for |E| >= 2.
double wavenumber(double E);

/// Closed subgroup of the circle generated by e^{ik}: cyclic of order s, or
/// the full circle when no s <= s_max satisfies |e^{isk} - 1| < tol.
class RotationGroup {
 public:
  RotationGroup(double k, double tol = 1e-9, std::int64_t s_max = 1'000'000);

  double k() const { return k_; }
  /// Order s, or nullopt for the full circle.
  std::optional<std::int64_t> order() const { return order_; }
  bool is_finite() const { return order_.has_value(); }

  /// Haar sample of the angle theta.
  double sample(Rng& rng) const;
  /// Exact Haar average of e^{i m theta}.
  Complex average_exp(std::int64_t m) const;
  /// Nodes carrying the Haar measure exactly for trigonometric polynomials of
  /// degree <= max_degree: the s group elements (finite case) or an equally
  /// spaced grid of max(2 max_degree + 1, min_points) angles (circle).
  std::vector<double> quadrature(int max_degree, int min_points = 0) const;

 private:
  double k_;
  std::optional<std::int64_t> order_;
};

}  // namespace flagwalk
