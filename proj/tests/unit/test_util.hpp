// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "flagwalk/matrix_core.hpp"

namespace testutil {

using flagwalk::ComplexMatrix;

/// Random matrix with iid standard complex entries.
inline ComplexMatrix random_matrix(int n, flagwalk::Rng& rng) { return flagwalk::ginibre(n, n, rng); }

inline ComplexMatrix random_hermitian(int n, flagwalk::Rng& rng) {
  const ComplexMatrix A = random_matrix(n, rng);
  return 0.5 * (A + A.adjoint());
}

/// exp(iH) for Hermitian H through its eigendecomposition, independent of expm.
inline ComplexMatrix exp_i_hermitian(const ComplexMatrix& H) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
  const Eigen::VectorXcd d = (flagwalk::kI * es.eigenvalues().cast<flagwalk::Complex>()).array().exp();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// Truncated Taylor series with scaling and squaring in long double, a
/// slow oracle for general matrices of moderate norm.
inline ComplexMatrix exp_series(const ComplexMatrix& A) {
  using CL = std::complex<long double>;
  using ML = Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic>;
  int s = 0;
  long double nrm = A.cwiseAbs().colwise().sum().maxCoeff();
  while (nrm > 0.5L) {
    nrm /= 2;
    ++s;
  }
  const ML B = A.cast<CL>() / static_cast<long double>(std::ldexp(1.0, s));
  ML term = ML::Identity(A.rows(), A.cols()), sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * B / static_cast<long double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  ComplexMatrix out(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < sum.size(); ++i)
    out.data()[i] = flagwalk::Complex(static_cast<double>(sum.data()[i].real()),
                                      static_cast<double>(sum.data()[i].imag()));
  return out;
}

}  // namespace testutil
