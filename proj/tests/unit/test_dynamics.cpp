// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "flagwalk/dynamics.hpp"
#include "flagwalk/perturbation.hpp"
#include "test_util.hpp"
#include "wires_kernels.hpp"

using namespace flagwalk;

namespace {

// Distance between gauge-invariant data: |entries| of U*V and Tr_p(U*V).
double gauge_distance(const IsotropicFrame& a, const IsotropicFrame& b) {
  const ComplexMatrix A = a.U.adjoint() * a.V, B = b.U.adjoint() * b.V;
  double d = (A.cwiseAbs() - B.cwiseAbs()).norm();
  for (int p = 1; p <= a.dim(); ++p) d += std::abs(trace_p(A, p) - trace_p(B, p));
  return d;
}

ComplexMatrix random_ull(int L, Rng& rng) {
  // exp of a random element of u(L,L)
  ComplexMatrix X = ComplexMatrix::Zero(2 * L, 2 * L);
  const ComplexMatrix A = testutil::random_hermitian(L, rng), D = testutil::random_hermitian(L, rng);
  const ComplexMatrix B = ginibre(L, L, rng);
  X.topLeftCorner(L, L) = kI * A;
  X.bottomRightCorner(L, L) = kI * D;
  X.topRightCorner(L, L) = B;
  X.bottomLeftCorner(L, L) = B.adjoint();
  return expm(0.5 * X);
}

}  // namespace

TEST_CASE("act by the identity leaves the frame unchanged") {
  Rng rng(1);
  const IsotropicFrame x = haar_frame(3, rng);
  const IsotropicFrame y = act(ComplexMatrix::Identity(6, 6), x);
  CHECK((y.U - x.U).norm() <= 1e-14);
  CHECK((y.V - x.V).norm() <= 1e-14);
}

TEST_CASE("act by R_k is a pure gauge-equivalent phase rotation") {
  Rng rng(2);
  const WiresModel m(2, 1.0, 0.1);
  const IsotropicFrame x = haar_frame(2, rng);
  const IsotropicFrame y = act(m.rotation(), x);
  const Complex e = std::polar(1.0, -m.k());
  // e^{-ik} U is unitary, so R = 1 and S = 1.
  CHECK((y.U - e * x.U).norm() <= 1e-13);
  CHECK((y.V - std::conj(e) * x.V).norm() <= 1e-13);
  // Same point of M as (U, e^{2ik} V).
  const IsotropicFrame z{x.U, std::conj(e * e) * x.V};
  CHECK(gauge_distance(y, z) <= 1e-13);
}

TEST_CASE("act keeps V unitary for random U(L,L) elements") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const int L = 1 + i % 4;
    const ComplexMatrix T = random_ull(L, rng);
    CHECK(check_lorentz(T, L) <= 1e-10);
    const IsotropicFrame y = act(T, haar_frame(L, rng));
    CHECK(unitarity_defect(y.V) <= 1e-10);
    CHECK(unitarity_defect(y.U) <= 1e-10);
  }
}

TEST_CASE("act is a group action up to gauge") {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const int L = 1 + i % 3;
    const ComplexMatrix T1 = random_ull(L, rng), T2 = random_ull(L, rng);
    const IsotropicFrame x = haar_frame(L, rng);
    CHECK(gauge_distance(act(T1 * T2, x), act(T1, act(T2, x))) <= 1e-9);
  }
}

TEST_CASE("act raises on a singular upper block") {
  const int L = 1;
  ComplexMatrix T(2, 2);
  T << 1.0, -1.0, 0.0, 1.0;  // AU + BV = 0 for U = V = 1
  CHECK_THROWS_AS(act(T, IsotropicFrame::identity(L)), DegenerateFrameError);
}

TEST_CASE("lambda = 0 orbit is the deterministic rotation orbit") {
  const WiresModel m(2, 0.4, 0.0);
  Rng rng(5);
  Rng rng0(5);
  const IsotropicFrame x0 = haar_frame(2, rng0);
  const auto traj = run_chain(m, x0, 20, rng);
  IsotropicFrame y = x0;
  for (int n = 1; n <= 20; ++n) {
    y = act(m.rotation(), y);
    CHECK(gauge_distance(traj[static_cast<std::size_t>(n)], y) <= 1e-12);
  }
}

TEST_CASE("same seed gives the same trajectory; unitarity holds over 1e4 steps") {
  const WiresModel m(2, 1.0, 0.3);
  Rng a(6), b(6);
  const auto ta = run_chain(m, IsotropicFrame::identity(2), 10000, a);
  const auto tb = run_chain(m, IsotropicFrame::identity(2), 10000, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].U == tb[i].U);
    worst = std::max(worst, ta[i].unitarity_defect());
  }
  CHECK(worst <= 1e-10);
  CHECK_THROWS_AS(run_chain(m, IsotropicFrame::identity(2), 0, a), InputError);
}

TEST_CASE("Birkhoff of a constant") {
  const WiresModel m(2, 1.0, 0.1);
  BirkhoffOptions o;
  o.n_steps = 200;
  o.replicas = 4;
  o.burn_in = 10;
  const auto e = birkhoff(m, [](const IsotropicFrame&) { return 1.0; }, o);
  CHECK(e.mean == 1.0);
  CHECK(e.stderr == 0.0);
  CHECK(e.n_replicas == 4);
}

TEST_CASE("Birkhoff mean of F_1 approaches its Haar expectation (L = 1)") {
  const WiresModel m(1, 1.0, 0.05);
  BirkhoffOptions o;
  o.n_steps = 200000;
  o.replicas = 8;
  o.seed = 3;
  const auto e = birkhoff(m, [](const IsotropicFrame& x) { return class_function_Fp(x, 1); }, o);
  CHECK(std::abs(e.mean - 1.0) <= 3.0 * e.stderr + 0.5 * 0.05);
}

TEST_CASE("high-frequency observable averages to zero at irrational k") {
  const WiresModel m(1, 0.5, 0.1);
  BirkhoffOptions o;
  o.n_steps = 100000;
  o.replicas = 8;
  o.seed = 4;
  const auto e = birkhoff(
      m, [](const IsotropicFrame& x) { return std::pow((x.U.adjoint() * x.V).determinant(), 3).real(); }, o);
  CHECK(std::abs(e.mean) <= 3.0 * e.stderr + 0.1);
}

TEST_CASE("class-function Birkhoff estimates do not depend on the starting gauge") {
  const WiresModel m(2, 1.0, 0.2);
  Rng rng(7);
  const IsotropicFrame x0 = haar_frame(2, rng);
  Eigen::VectorXd ph(2);
  ph << 0.7, -2.1;
  BirkhoffOptions o;
  o.n_steps = 2000;
  o.replicas = 4;
  o.seed = 5;
  const auto f = [](const IsotropicFrame& x) { return class_function_Fp(x, 1); };
  o.x0 = x0;
  const auto a = birkhoff(m, f, o);
  o.x0 = x0.gauged(ph);
  const auto b = birkhoff(m, f, o);
  CHECK(std::abs(a.mean - b.mean) <= 1e-9);
}

TEST_CASE("serial and parallel replicas are bit-identical") {
  const WiresModel m(2, 1.0, 0.2);
  BirkhoffOptions o;
  o.n_steps = 3000;
  o.replicas = 5;
  o.seed = 9;
  const auto f = [](const IsotropicFrame& x) { return class_function_Fp(x, 2); };
  o.exec = Exec::serial;
  const auto s = birkhoff(m, f, o);
  o.exec = Exec::parallel;
  const auto p = birkhoff(m, f, o);
  CHECK(s.replica_means == p.replica_means);

  LyapunovOptions lo;
  lo.n_steps = 5000;
  lo.replicas = 3;
  lo.seed = 10;
  lo.exec = Exec::serial;
  const auto qs = lyapunov_qr(m, lo);
  const auto bs = lyapunov_birkhoff_all(m, lo);
  lo.exec = Exec::parallel;
  const auto qp = lyapunov_qr(m, lo);
  const auto bp = lyapunov_birkhoff_all(m, lo);
  CHECK(qs.replica_exponents == qp.replica_exponents);
  CHECK(bs[1].replica_means == bp[1].replica_means);
}

TEST_CASE("fast kernels agree with the reference construction") {
  for (int L : {1, 2, 3, 5}) {
    const WiresModel m(L, 0.8, 0.3, L == 3 ? EnsembleKind::rademacher : EnsembleKind::gaussian);
    LyapunovOptions o;
    o.n_steps = 2000;
    o.replicas = 2;
    o.burn_in = 100;
    o.seed = 11;
    o.kernel = Kernel::fast;
    const auto qf = lyapunov_qr(m, o);
    const auto bf = lyapunov_birkhoff_all(m, o);
    o.kernel = Kernel::reference;
    const auto qr = lyapunov_qr(m, o);
    const auto br = lyapunov_birkhoff_all(m, o);
    for (int i = 0; i < 2 * L; ++i)
      CHECK(qf.exponents[static_cast<std::size_t>(i)] ==
            doctest::Approx(qr.exponents[static_cast<std::size_t>(i)]).epsilon(1e-9).scale(1e-12));
    for (int p = 0; p < L; ++p)
      CHECK(bf[static_cast<std::size_t>(p)].mean ==
            doctest::Approx(br[static_cast<std::size_t>(p)].mean).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("lambda = 0: exponents and volume growth vanish") {
  const WiresModel m(3, 1.0, 0.0);
  LyapunovOptions o;
  o.n_steps = 5000;
  o.replicas = 2;
  for (auto k : {Kernel::fast, Kernel::reference}) {
    o.kernel = k;
    for (double g : lyapunov_qr(m, o).exponents) CHECK(std::abs(g) <= 1e-8);
    for (const auto& e : lyapunov_birkhoff_all(m, o)) CHECK(std::abs(e.mean) <= 1e-10);
  }
}

TEST_CASE("Lyapunov spectrum is symmetric and matches the perturbative value (short run)") {
  const WiresModel m(1, 1.0, 0.3);
  LyapunovOptions o;
  o.n_steps = 400000;
  o.replicas = 4;
  o.seed = 12;
  const auto s = lyapunov_qr(m, o);
  REQUIRE(s.exponents.size() == 2);
  const double se = std::hypot(s.stderr[0], s.stderr[1]);
  CHECK(std::abs(s.exponents[0] + s.exponents[1]) <= 3.0 * se + 1e-12);
  const double pred = gamma_perturbative(1, 1, 1.0, 0.3);
  CHECK(std::abs(s.exponents[0] - pred) <= 0.15 * pred + 3.0 * s.stderr[0]);
  const auto b = lyapunov_birkhoff(m, 1, o);
  const double comb = std::hypot(b.stderr, s.stderr[0]);
  CHECK(std::abs(b.mean - s.exponents[0]) <= 3.0 * comb + 0.15 * pred);
}

TEST_CASE("Lyapunov input validation") {
  const WiresModel m(2, 1.0, 0.1);
  LyapunovOptions o;
  o.n_steps = 0;
  CHECK_THROWS_AS(lyapunov_qr(m, o), InputError);
  o.n_steps = 10;
  CHECK_THROWS_AS(lyapunov_birkhoff(m, 3, o), InputError);
  CHECK(default_burn_in(0.1) == 1000);
  CHECK(default_burn_in(0.05) == 4000);
}
