// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/matrix_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace flagwalk {

namespace {

// Pade coefficients b_0..b_m for degrees 3, 5, 7, 9, 13 and the 1-norm
// thresholds theta_m below which the degree-m approximant (no scaling) has
// backward error under the unit roundoff.
constexpr std::array<double, 4> kPade3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kPade5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kPade7 = {17297280., 8648640., 1995840., 277200.,
                                          25200.,    1512.,    56.,      1.};
constexpr std::array<double, 10> kPade9 = {17643225600., 8821612800., 2075673600., 302702400.,
                                           30270240.,    2162160.,    110880.,     3960.,
                                           90.,          1.};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
    129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
    1323241920.,        40840800.,          960960.,           16380.,
    182.,               1.};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double norm1(const ComplexMatrix& A) {
  return A.cwiseAbs().colwise().sum().maxCoeff();
}

template <std::size_t N>
ComplexMatrix pade_low(const ComplexMatrix& A, const ComplexMatrix& A2,
                       const std::array<double, N>& b) {
  // U = A * sum_{odd j} b_j A^{j-1},  V = sum_{even j} b_j A^j
  const auto n = A.rows();
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  ComplexMatrix odd = b[1] * I;
  ComplexMatrix even = b[0] * I;
  ComplexMatrix pow = I;
  for (std::size_t j = 2; j < N; j += 2) {
    pow = pow * A2;
    even += b[j] * pow;
    if (j + 1 < N) odd += b[j + 1] * pow;
  }
  const ComplexMatrix U = A * odd;
  return (even - U).partialPivLu().solve(even + U);
}

ComplexMatrix pade13(const ComplexMatrix& A) {
  const auto n = A.rows();
  const auto& b = kPade13;
  const ComplexMatrix I = ComplexMatrix::Identity(n, n);
  const ComplexMatrix A2 = A * A;
  const ComplexMatrix A4 = A2 * A2;
  const ComplexMatrix A6 = A4 * A2;
  const ComplexMatrix U =
      A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
           b[1] * I);
  const ComplexMatrix V =
      A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& A) {
  if (A.rows() != A.cols()) {
    throw DimensionError("expm: matrix is " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()));
  }
  const auto n = A.rows();
  if (n == 0) return A;
  const double a1 = norm1(A);
  if (a1 == 0.0) return ComplexMatrix::Identity(n, n);

  const ComplexMatrix A2 = A * A;
  // Numerically nilpotent of index two (the wires perturbation satisfies
  // P^2 = 0): the tail sum_{k>=3} A^k/k! is bounded by ||A^2|| e^{||A||}.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (a1 <= 1.0 && norm1(A2) <= 8.0 * static_cast<double>(n) * eps * a1 * a1) {
    ComplexMatrix E = A + 0.5 * A2;
    E.diagonal().array() += 1.0;
    return E;
  }
  if (a1 <= kTheta3) return pade_low(A, A2, kPade3);
  if (a1 <= kTheta5) return pade_low(A, A2, kPade5);
  if (a1 <= kTheta7) return pade_low(A, A2, kPade7);
  if (a1 <= kTheta9) return pade_low(A, A2, kPade9);

  int s = 0;
  if (a1 > kTheta13) s = static_cast<int>(std::ceil(std::log2(a1 / kTheta13)));
  ComplexMatrix X = pade13(A * std::ldexp(1.0, -s));
  for (int i = 0; i < s; ++i) X = X * X;
  return X;
}

QrResult qr_positive(const ComplexMatrix& M) {
  if (M.rows() != M.cols()) {
    throw DimensionError("qr_positive: matrix is " + std::to_string(M.rows()) + "x" +
                         std::to_string(M.cols()));
  }
  const auto n = M.rows();
  // Householder for robustness, then absorb the diagonal phases into Q.
  Eigen::HouseholderQR<ComplexMatrix> qr(M);
  ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  ComplexMatrix Q = qr.householderQ();
  double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(R(i, i));
    rmax = std::max(rmax, a);
    rmin = std::min(rmin, a);
  }
  if (n > 0 && !(rmin > 1e-12 * rmax)) {
    throw SingularityError("qr_positive: numerically singular input (min|r_ii|/max|r_ii| = " +
                           std::to_string(rmax > 0 ? rmin / rmax : 0.0) + ")");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = R(i, i) / std::abs(R(i, i));
    Q.col(i) *= d;
    R.row(i) *= std::conj(d);
    R(i, i) = R(i, i).real();
  }
  return {std::move(Q), std::move(R)};
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix Z(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double a = normal(rng);
      const double b = normal(rng);
      Z(i, j) = Complex(a * s, b * s);
    }
  return Z;
}

ComplexMatrix haar_unitary(int L, Rng& rng) {
  if (L < 1) throw DimensionError("haar_unitary: L must be >= 1");
  return qr_positive(ginibre(L, L, rng)).Q;
}

IsotropicFrame haar_frame(int L, Rng& rng) {
  IsotropicFrame f;
  f.U = haar_unitary(L, rng);
  f.V = haar_unitary(L, rng);
  return f;
}

ComplexMatrix lorentz_form(int L) {
  ComplexMatrix G = ComplexMatrix::Zero(2 * L, 2 * L);
  G.topLeftCorner(L, L).setIdentity();
  G.bottomRightCorner(L, L) = -ComplexMatrix::Identity(L, L);
  return G;
}

ComplexMatrix symplectic_form(int L) {
  ComplexMatrix J = ComplexMatrix::Zero(2 * L, 2 * L);
  J.topRightCorner(L, L) = -ComplexMatrix::Identity(L, L);
  J.bottomLeftCorner(L, L).setIdentity();
  return J;
}

double check_lorentz(const ComplexMatrix& T, int L) {
  if (T.rows() != 2 * L || T.cols() != 2 * L) throw DimensionError("check_lorentz: T is not 2L x 2L");
  const ComplexMatrix G = lorentz_form(L);
  return (T.adjoint() * G * T - G).norm();
}

double check_symplectic(const ComplexMatrix& T, int L) {
  if (T.rows() != 2 * L || T.cols() != 2 * L) {
    throw DimensionError("check_symplectic: T is not 2L x 2L");
  }
  const ComplexMatrix J = symplectic_form(L);
  return (T.adjoint() * J * T - J).norm();
}

double unitarity_defect(const ComplexMatrix& M) {
  return (M.adjoint() * M - ComplexMatrix::Identity(M.cols(), M.cols())).norm();
}

double IsotropicFrame::unitarity_defect() const {
  return std::max(flagwalk::unitarity_defect(U), flagwalk::unitarity_defect(V));
}

ComplexMatrix IsotropicFrame::phi() const {
  const int L = dim();
  ComplexMatrix P(2 * L, L);
  P.topRows(L) = U;
  P.bottomRows(L) = V;
  return P / std::sqrt(2.0);
}

IsotropicFrame IsotropicFrame::gauged(const Eigen::VectorXd& phases) const {
  IsotropicFrame f = *this;
  for (Eigen::Index j = 0; j < phases.size(); ++j) {
    const Complex d = std::polar(1.0, phases(j));
    f.U.col(j) *= d;
    f.V.col(j) *= d;
  }
  return f;
}

IsotropicFrame IsotropicFrame::identity(int L) {
  return {ComplexMatrix::Identity(L, L), ComplexMatrix::Identity(L, L)};
}

}  // namespace flagwalk
