// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/liealg.hpp"

#include <cmath>

#include "flagwalk/perturbation.hpp"

namespace flagwalk {

namespace {

RealVector to_real(const ComplexMatrix& X) {
  const auto n = X.size();
  RealVector v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(2 * i) = X.data()[i].real();
    v(2 * i + 1) = X.data()[i].imag();
  }
  return v;
}

ComplexMatrix from_real(const RealVector& v, int n) {
  ComplexMatrix X(n, n);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = Complex(v(2 * i), v(2 * i + 1));
  return X;
}

double inner(const ComplexMatrix& A, const ComplexMatrix& B) {
  return (A.adjoint() * B).trace().real();
}

}  // namespace

double LieBasis::gram_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      worst = std::max(worst, std::abs(inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double LieBasis::membership_defect() const {
  const ComplexMatrix G = lorentz_form(L);
  double worst = 0.0;
  for (const auto& P : basis) worst = std::max(worst, (P.adjoint() * G + G * P).norm());
  return worst;
}

double LieBasis::residual(const ComplexMatrix& X) const {
  ComplexMatrix r = X;
  for (const auto& B : basis) r -= inner(B, X) * B;
  return r.norm();
}

double LieBasis::bracket_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim(); ++i) {
    for (int j = i + 1; j < dim(); ++j) {
      const ComplexMatrix c = commutator(basis[i], basis[j]);
      const double n = c.norm();
      if (n > 1e-14) worst = std::max(worst, residual(c) / n);
    }
  }
  return worst;
}

LieBasis span_of(int L, const std::vector<ComplexMatrix>& mats, double cutoff) {
  LieBasis out{L, {}};
  if (mats.empty()) return out;
  const int n = 2 * L;
  RealMatrix A(2 * n * n, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (mats[j].rows() != n || mats[j].cols() != n) throw DimensionError("span_of: size mismatch");
    A.col(static_cast<Eigen::Index>(j)) = to_real(mats[j]);
  }
  Eigen::JacobiSVD<RealMatrix> svd(A, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff * s(0)) out.basis.push_back(from_real(svd.matrixU().col(i), n));
  }
  return out;
}

ClosureResult bracket_closure(const std::vector<ComplexMatrix>& generators, int max_r,
                              double cutoff) {
  if (generators.empty()) throw InputError("bracket_closure: no generators");
  if (max_r < 1) throw InputError("bracket_closure: max_r must be >= 1");
  const int L = static_cast<int>(generators.front().rows()) / 2;
  ClosureResult res;
  res.cutoff = cutoff;
  const LieBasis v1 = span_of(L, generators, cutoff);
  if (v1.dim() == 0) throw InputError("bracket_closure: generators are all zero");
  LieBasis v = v1;
  res.dims.push_back(v.dim());
  for (int r = 1; r <= max_r; ++r) {
    std::vector<ComplexMatrix> cand = v.basis;
    for (const auto& a : v.basis)
      for (const auto& b : v1.basis) cand.push_back(commutator(a, b));
    LieBasis next = span_of(L, cand, cutoff);
    if (next.dim() == v.dim()) {
      res.basis = std::move(v);
      res.r = r;
      res.stabilized = true;
      return res;
    }
    v = std::move(next);
    res.dims.push_back(v.dim());
  }
  res.basis = std::move(v);
  res.r = max_r;
  res.stabilized = false;
  return res;
}

int tangent_rank(const LieBasis& basis, const IsotropicFrame& x, double cutoff) {
  if (basis.dim() == 0) return 0;
  const int m = 2 * x.dim() * x.dim() - x.dim();
  RealMatrix J(m, basis.dim());
  for (int i = 0; i < basis.dim(); ++i) J.col(i) = tangent_coordinates(basis.basis[i], x);
  Eigen::BDCSVD<RealMatrix> svd(J);
  const RealVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > cutoff * s(0) ? 1 : 0;
  return rank;
}

std::vector<ComplexMatrix> hermitian_basis(int L) {
  const double r2 = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> out;
  for (int j = 0; j < L; ++j) {
    ComplexMatrix E = ComplexMatrix::Zero(L, L);
    E(j, j) = 1.0;
    out.push_back(E);
    for (int k = j + 1; k < L; ++k) {
      ComplexMatrix S = ComplexMatrix::Zero(L, L), A = ComplexMatrix::Zero(L, L);
      S(j, k) = S(k, j) = r2;
      A(j, k) = kI * r2;
      A(k, j) = -kI * r2;
      out.push_back(S);
      out.push_back(A);
    }
  }
  return out;
}

LieBasis full_ull_basis(int L) {
  const int n = 2 * L;
  std::vector<ComplexMatrix> mats;
  for (const auto& H : hermitian_basis(L)) {
    ComplexMatrix X = ComplexMatrix::Zero(n, n);
    X.topLeftCorner(L, L) = kI * H;
    mats.push_back(X);
    X.setZero();
    X.bottomRightCorner(L, L) = kI * H;
    mats.push_back(X);
  }
  for (int j = 0; j < L; ++j) {
    for (int k = 0; k < L; ++k) {
      for (const Complex z : {Complex(1.0), kI}) {
        ComplexMatrix X = ComplexMatrix::Zero(n, n);
        X(j, L + k) = z;
        X(L + k, j) = std::conj(z);
        mats.push_back(X);
      }
    }
  }
  return span_of(L, mats);
}

ComplexMatrix rotation_generator(int L) {
  ComplexMatrix X = ComplexMatrix::Zero(2 * L, 2 * L);
  X.topLeftCorner(L, L).diagonal().setConstant(-kI);
  X.bottomRightCorner(L, L).diagonal().setConstant(kI);
  return X;
}

std::vector<ComplexMatrix> wires_generators(const WiresModel& model) {
  const ComplexMatrix& R = model.rotation();
  std::vector<ComplexMatrix> out;
  for (const auto& W : hermitian_basis(model.L())) {
    ComplexMatrix P = model.perturbation(W);
    for (int j = 0; j < 3; ++j) {
      out.push_back(P);
      P = R * P * R.adjoint();
    }
  }
  if (!RotationGroup(model.k()).is_finite()) out.push_back(rotation_generator(model.L()));
  return out;
}

double averaged_conjugate_identity(double k, const ComplexMatrix& W) {
  const double s = std::sin(k);
  if (std::abs(s) < 1e-12) throw BandEdgeError("averaged_conjugate_identity: sin k = 0");
  const int L = static_cast<int>(W.rows());
  const Complex c = kI / (2.0 * s);
  ComplexMatrix P(2 * L, 2 * L);
  P << c * W, c * W, -c * W, -c * W;
  const ComplexMatrix R = rotation_matrix(L, k);
  const ComplexMatrix lhs =
      -2.0 * std::cos(2.0 * k) * P + R * P * R.adjoint() + R.adjoint() * P * R;
  ComplexMatrix rhs = ComplexMatrix::Zero(2 * L, 2 * L);
  rhs.topLeftCorner(L, L) = kI * W;
  rhs.bottomRightCorner(L, L) = -kI * W;
  rhs *= (1.0 - std::cos(2.0 * k)) / s;
  return (lhs - rhs).norm();
}

}  // namespace flagwalk
