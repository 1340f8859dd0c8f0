// SPDX-License-Identifier: Apache-2.0
//
// Dense complex kernels shared by every other module: matrix exponential,
// QR with a positive real diagonal, Haar sampling on U(L), and the
// indefinite forms J and G of the wires model.
#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "flagwalk/errors.hpp"
#include "flagwalk/random.hpp"

namespace flagwalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Point on the T^L cover of the isotropic flag manifold, Phi = (U; V)/sqrt(2).
struct IsotropicFrame {
  ComplexMatrix U;
  ComplexMatrix V;

  int dim() const { return static_cast<int>(U.rows()); }
  /// max(||U*U - 1||_F, ||V*V - 1||_F)
  double unitarity_defect() const;
  /// The 2L x L matrix Phi.
  ComplexMatrix phi() const;
  /// (U D, V D) for a diagonal unitary D given by its phases.
  IsotropicFrame gauged(const Eigen::VectorXd& phases) const;

  static IsotropicFrame identity(int L);
};

struct QrResult {
  ComplexMatrix Q;
  ComplexMatrix R;
};

/// exp(A) by scaling and squaring with Pade approximants of degree 3..13.
/// Throws DimensionError for non-square input.
ComplexMatrix expm(const ComplexMatrix& A);

/// M = Q R with Q unitary and R upper triangular with real positive diagonal.
/// Throws SingularityError when min|r_ii| < 1e-12 max|r_ii|.
QrResult qr_positive(const ComplexMatrix& M);

/// Allocation-free variant for hot loops: factors `m` in place into Q (returned
/// in `m`) and writes R into `r`. Returns false instead of throwing when singular.
/// Works for fixed-size Eigen matrices as well.
template <class MatQ, class MatR>
bool qr_positive_inplace(Eigen::MatrixBase<MatQ>& m, Eigen::MatrixBase<MatR>& r) {
  const auto n = m.cols();
  r.derived().setZero(n, n);
  // Modified Gram-Schmidt with one reorthogonalization pass per column.
  double rmax = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const std::complex<double> c = m.col(i).dot(m.col(j));
        r(i, j) += c;
        m.col(j) -= c * m.col(i);
      }
    }
    const double nrm = m.col(j).norm();
    r(j, j) = nrm;
    rmax = nrm > rmax ? nrm : rmax;
    if (!(nrm > 1e-12 * rmax) || !std::isfinite(nrm)) return false;
    m.col(j) /= nrm;
  }
  return true;
}

/// Haar-distributed element of U(L): Ginibre matrix followed by qr_positive.
ComplexMatrix haar_unitary(int L, Rng& rng);

/// Frame with independent Haar U and V.
IsotropicFrame haar_frame(int L, Rng& rng);

/// diag(1_L, -1_L)
ComplexMatrix lorentz_form(int L);
/// (0, -1; 1, 0)
ComplexMatrix symplectic_form(int L);

/// ||T* G T - G||_F for a 2L x 2L matrix T.
double check_lorentz(const ComplexMatrix& T, int L);
/// ||T* J T - J||_F
double check_symplectic(const ComplexMatrix& T, int L);
/// ||M* M - 1||_F
double unitarity_defect(const ComplexMatrix& M);

/// Matrix of iid standard complex Gaussians (a + ib)/sqrt(2).
ComplexMatrix ginibre(int rows, int cols, Rng& rng);

/// Commutator [A, B].
inline ComplexMatrix commutator(const ComplexMatrix& A, const ComplexMatrix& B) {
  return A * B - B * A;
}

}  // namespace flagwalk
