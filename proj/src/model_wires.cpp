// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/model_wires.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace flagwalk {

double wavenumber(double E) {
  if (!(std::abs(E) < 2.0)) {
    throw BandEdgeError("energy E = " + std::to_string(E) + " is outside the open band (-2, 2)");
  }
  return std::acos(-E / 2.0);
}

ComplexMatrix rotation_matrix(int L, double theta) {
  ComplexMatrix R = ComplexMatrix::Zero(2 * L, 2 * L);
  const Complex e = std::polar(1.0, -theta);
  for (int i = 0; i < L; ++i) {
    R(i, i) = e;
    R(L + i, L + i) = std::conj(e);
  }
  return R;
}

WiresModel::WiresModel(int L, double E, double lambda, EnsembleKind kind)
    : L_(L), E_(E), k_(wavenumber(E)), lambda_(lambda), sin_k_(std::sin(k_)), spec_{L, kind} {
  if (L < 1) throw InputError("WiresModel: L must be >= 1");
  if (!(lambda >= 0.0)) throw InputError("WiresModel: lambda must be >= 0");
  if (sin_k_ < 1e-8) throw BandEdgeError("WiresModel: sin(k) vanishes at E = " + std::to_string(E));

  const ComplexMatrix I = ComplexMatrix::Identity(L, L);
  const double r2 = 1.0 / std::sqrt(2.0);
  C_.resize(2 * L, 2 * L);
  C_ << r2 * I, -kI * r2 * I, r2 * I, kI * r2 * I;

  const double cos_k = std::cos(k_);
  const double ns = 1.0 / std::sqrt(sin_k_);
  N_.resize(2 * L, 2 * L);
  N_ << ns * sin_k_ * I, ComplexMatrix::Zero(L, L), -ns * cos_k * I, ns * I;

  CN_ = C_ * N_;
  // N^{-1} = sqrt(sin k)^{-1} (1, 0; cos k, sin k), C^{-1} = C^*.
  ComplexMatrix N_inv(2 * L, 2 * L);
  N_inv << ns * I, ComplexMatrix::Zero(L, L), ns * cos_k * I, ns * sin_k_ * I;
  CN_inv_ = N_inv * C_.adjoint();
  Rk_ = rotation_matrix(L, k_);
}

ComplexMatrix WiresModel::transfer_hat(const ComplexMatrix& W) const {
  const ComplexMatrix I = ComplexMatrix::Identity(L_, L_);
  ComplexMatrix T(2 * L_, 2 * L_);
  T << lambda_ * W - E_ * I, -I, I, ComplexMatrix::Zero(L_, L_);
  return T;
}

ComplexMatrix WiresModel::normal_form(const ComplexMatrix& W) const {
  return CN_ * transfer_hat(W) * CN_inv_;
}

ComplexMatrix WiresModel::perturbation(const ComplexMatrix& W) const {
  const Complex c = kI / (2.0 * sin_k_);
  ComplexMatrix P(2 * L_, 2 * L_);
  P << c * W, c * W, -c * W, -c * W;
  return P;
}

ComplexMatrix WiresModel::step_matrix(const ComplexMatrix& W) const {
  return Rk_ * expm(lambda_ * perturbation(W));
}

RotationGroup::RotationGroup(double k, double tol, std::int64_t s_max) : k_(k) {
  for (std::int64_t s = 1; s <= s_max; ++s) {
    const double phase = std::remainder(static_cast<double>(s) * k, 2.0 * std::numbers::pi);
    if (std::abs(std::polar(1.0, phase) - 1.0) < tol) {
      order_ = s;
      break;
    }
  }
}

double RotationGroup::sample(Rng& rng) const {
  if (order_) {
    std::uniform_int_distribution<std::int64_t> pick(0, *order_ - 1);
    return 2.0 * std::numbers::pi * static_cast<double>(pick(rng)) / static_cast<double>(*order_);
  }
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return u(rng);
}

Complex RotationGroup::average_exp(std::int64_t m) const {
  if (m == 0) return 1.0;
  if (order_) return (m % *order_ == 0) ? Complex(1.0) : Complex(0.0);
  return 0.0;
}

std::vector<double> RotationGroup::quadrature(int max_degree, int min_points) const {
  std::int64_t n = 0;
  if (order_) {
    n = *order_;
  } else {
    n = std::max<std::int64_t>(2 * max_degree + 1, min_points);
  }
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j)
    nodes[static_cast<std::size_t>(j)] =
        2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return nodes;
}

}  // namespace flagwalk
