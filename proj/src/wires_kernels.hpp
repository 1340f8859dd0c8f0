// SPDX-License-Identifier: Apache-2.0
//
// Fixed-size inner loops for the wires model. Lc is the compile-time wire
// count (or Eigen::Dynamic). The dynamic-size code in dynamics.cpp is the
// reference these are tested against.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "flagwalk/dynamics.hpp"

namespace flagwalk::detail {

template <int Lc>
struct WiresTypes {
  static constexpr int N2 = Lc == Eigen::Dynamic ? Eigen::Dynamic : 2 * Lc;
  using MatL = Eigen::Matrix<Complex, Lc, Lc>;
  using MatTop = Eigen::Matrix<Complex, Lc, N2>;
  using Mat2 = Eigen::Matrix<Complex, N2, N2>;
};

/// One replica of the reorthogonalized product of T_hat matrices. Returns the
/// 2L exponents in descending order.
template <int Lc>
std::vector<double> qr_replica(const WiresModel& model, std::int64_t n_steps, std::int64_t burn,
                               int q, Rng rng) {
  using Ty = WiresTypes<Lc>;
  const int L = model.L();
  const int n2 = 2 * L;
  const double lambda = model.lambda();
  const double E = model.E();
  const typename Ty::Mat2 to_normal = model.to_normal();
  const typename Ty::Mat2 from_normal = model.from_normal();
  typename Ty::Mat2 X = from_normal;
  typename Ty::Mat2 Y(n2, n2), R(n2, n2);
  typename Ty::MatL W(L, L);
  typename Ty::MatTop top(L, n2);
  std::vector<double> logs(static_cast<std::size_t>(n2), 0.0);
  const std::int64_t total = burn + n_steps;

  for (std::int64_t s = 1; s <= total; ++s) {
    sample_w_fill(model.spec(), rng, W);
    top = X.topRows(L);
    X.topRows(L).noalias() = lambda * (W * top);
    X.topRows(L) -= E * top + X.bottomRows(L);
    X.bottomRows(L) = top;
    const bool due = s % q == 0 || s == burn || s == total;
    if (due || X.cwiseAbs2().maxCoeff() > 1e200) {
      Y.noalias() = to_normal * X;
      if (!qr_positive_inplace(Y, R)) throw DegenerateFrameError("lyapunov_qr: frame collapsed", s);
      if (s > burn) {
        for (int i = 0; i < n2; ++i) logs[static_cast<std::size_t>(i)] += std::log(R(i, i).real());
      }
      X.noalias() = from_normal * Y;
    }
  }
  for (double& v : logs) v /= static_cast<double>(n_steps);
  std::sort(logs.begin(), logs.end(), std::greater<>());
  return logs;
}

/// One replica of the isotropic-frame chain accumulating the one-step p-volume
/// growth for p = 1..L. Uses T = R_k (1 + lambda P(W)), exact because P^2 = 0.
template <int Lc>
std::vector<double> volume_replica(const WiresModel& model, std::int64_t n_steps,
                                   std::int64_t burn, Rng rng) {
  using MatL = typename WiresTypes<Lc>::MatL;
  const int L = model.L();
  const Complex em = std::polar(1.0, -model.k());
  const Complex ep = std::conj(em);
  const Complex c = kI * model.lambda() / (2.0 * model.sin_k());
  MatL U = MatL::Identity(L, L), V = MatL::Identity(L, L);
  MatL W(L, L), Z(L, L), X(L, L), Y(L, L), R(L, L), G(L, L);
  Eigen::LLT<MatL> llt(L);
  std::vector<double> sums(static_cast<std::size_t>(L), 0.0);
  const std::int64_t total = burn + n_steps;

  for (std::int64_t s = 1; s <= total; ++s) {
    sample_w_fill(model.spec(), rng, W);
    Z.noalias() = c * (W * (U + V));
    X = em * (U + Z);
    Y = ep * (V - Z);
    if (s > burn) {
      G.noalias() = 0.5 * (X.adjoint() * X);
      G.noalias() += 0.5 * (Y.adjoint() * Y);
      llt.compute(G);
      if (llt.info() != Eigen::Success) {
        throw DegenerateVolumeError("lyapunov_birkhoff: Gram determinant is not positive");
      }
      double acc = 0.0;
      for (int p = 0; p < L; ++p) {
        acc += std::log(llt.matrixLLT()(p, p).real());
        sums[static_cast<std::size_t>(p)] += acc;
      }
    }
    if (!qr_positive_inplace(X, R)) throw DegenerateFrameError("chain: AU + BV singular", s);
    R.template triangularView<Eigen::Upper>().template solveInPlace<Eigen::OnTheRight>(Y);
    U = X;
    V = Y;
    if ((V.adjoint() * V - MatL::Identity(L, L)).norm() > 1e-11) {
      MatL Rv(L, L);
      qr_positive_inplace(V, Rv);
    }
  }
  for (double& v : sums) v /= static_cast<double>(n_steps);
  return sums;
}

/// Dispatches a kernel template on the wire count.
template <template <int> class Kernel, class... Args>
auto dispatch_L(int L, Args&&... args) {
  switch (L) {
    case 1: return Kernel<1>::run(std::forward<Args>(args)...);
    case 2: return Kernel<2>::run(std::forward<Args>(args)...);
    case 3: return Kernel<3>::run(std::forward<Args>(args)...);
    case 4: return Kernel<4>::run(std::forward<Args>(args)...);
    default: return Kernel<Eigen::Dynamic>::run(std::forward<Args>(args)...);
  }
}

template <int Lc>
struct QrKernel {
  template <class... A>
  static std::vector<double> run(A&&... a) { return qr_replica<Lc>(std::forward<A>(a)...); }
};

template <int Lc>
struct VolumeKernel {
  template <class... A>
  static std::vector<double> run(A&&... a) { return volume_replica<Lc>(std::forward<A>(a)...); }
};

}  // namespace flagwalk::detail
