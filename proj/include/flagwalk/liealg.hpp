// SPDX-License-Identifier: Apache-2.0
//
// Real Lie subalgebras of u(L,L) given by spanning sets: iterated bracket
// closure, the rank of the induced tangent map on the flag manifold, and the
// rotation-averaged conjugate identity of the wires model.
#pragma once

#include <vector>

#include "flagwalk/matrix_core.hpp"
#include "flagwalk/model_wires.hpp"

namespace flagwalk {

/// Orthonormal (under Re Tr(P* Q)) basis of a real subspace of 2L x 2L matrices.
struct LieBasis {
  int L = 1;
  std::vector<ComplexMatrix> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  /// ||Gram - 1||_max
  double gram_defect() const;
  /// max_i ||P_i* G + G P_i||_F
  double membership_defect() const;
  /// Norm of X minus its orthogonal projection onto the span.
  double residual(const ComplexMatrix& X) const;
  /// max over pairs of residual([B_i, B_j]) / ||[B_i, B_j]||
  double bracket_defect() const;
};

/// Orthonormal basis of span(mats) via SVD of their real coordinates; columns
/// with singular value below cutoff * sigma_max are dropped.
LieBasis span_of(int L, const std::vector<ComplexMatrix>& mats, double cutoff = 1e-9);

struct ClosureResult {
  LieBasis basis;
  int r = 0;               ///< first r with v_{r+1} = v_r
  std::vector<int> dims;   ///< dim v_1, ..., dim v_r
  bool stabilized = false; ///< false if max_r was reached first
  double cutoff = 1e-9;
};

/// v_1 = span(generators), v_{r+1} = span(v_r u [v_r, v_1]).
/// Throws InputError for an empty or all-zero generator list, or max_r < 1.
ClosureResult bracket_closure(const std::vector<ComplexMatrix>& generators, int max_r = 20,
                              double cutoff = 1e-9);

/// Numerical rank of P -> d/dt|0 exp(tP) . x over the basis, in the
/// horizontal chart of the flag manifold (dimension 2L^2 - L).
int tangent_rank(const LieBasis& basis, const IsotropicFrame& x, double cutoff = 1e-7);

/// Orthonormal basis of u(L,L) = {X : X* G + G X = 0}, dimension 4L^2.
LieBasis full_ull_basis(int L);
/// Orthonormal basis {E_jj, (E_jk + E_kj)/sqrt 2, i(E_jk - E_kj)/sqrt 2} of Hermitian L x L.
std::vector<ComplexMatrix> hermitian_basis(int L);
/// diag(-i 1, i 1), the generator of R_theta.
ComplexMatrix rotation_generator(int L);

/// P(W_b) over the Hermitian basis and their conjugates by R_k^j, j = 1, 2;
/// the rotation generator is added when the rotation group is the full circle.
std::vector<ComplexMatrix> wires_generators(const WiresModel& model);

/// || -2cos(2k) P + R P R^{-1} + R^{-1} P R - ((1 - cos 2k)/sin k)(iW, 0; 0, -iW) ||_F
double averaged_conjugate_identity(double k, const ComplexMatrix& W);

}  // namespace flagwalk
