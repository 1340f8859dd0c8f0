// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>

#include "flagwalk/matrix_core.hpp"
#include "flagwalk/model_wires.hpp"
#include "flagwalk/stats.hpp"
#include "test_util.hpp"

using namespace flagwalk;

TEST_CASE("expm of zero is the identity") {
  for (int n : {1, 3, 6}) {
    CHECK((expm(ComplexMatrix::Zero(n, n)) - ComplexMatrix::Identity(n, n)).norm() == 0.0);
  }
}

TEST_CASE("expm of diag(i pi, -i pi) is -1") {
  ComplexMatrix A = ComplexMatrix::Zero(2, 2);
  A(0, 0) = kI * std::numbers::pi;
  A(1, 1) = -kI * std::numbers::pi;
  CHECK((expm(A) + ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("expm matches the eigen-decomposition oracle on anti-Hermitian input") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    ComplexMatrix H = testutil::random_hermitian(n, rng);
    H *= (0.01 + 9.9 * trial / 50.0) / H.norm();
    const ComplexMatrix ref = testutil::exp_i_hermitian(H);
    CHECK((expm(kI * H) - ref).norm() <= 1e-12 * ref.norm());
  }
}

TEST_CASE("expm matches a long-double series oracle on general input with norm <= 10") {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 5;
    ComplexMatrix A = testutil::random_matrix(n, rng);
    A *= (0.001 + 10.0 * trial / 40.0) / A.norm();
    const ComplexMatrix ref = testutil::exp_series(A);
    CHECK((expm(A) - ref).norm() <= 1e-12 * ref.norm());
  }
}

TEST_CASE("expm inverse and adjoint identities") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    ComplexMatrix H = testutil::random_hermitian(n, rng);
    const ComplexMatrix A = kI * H / H.norm();
    CHECK((expm(A) * expm(-A) - ComplexMatrix::Identity(n, n)).norm() <= 1e-12);
    const ComplexMatrix B = testutil::random_matrix(n, rng);
    CHECK((expm(B).adjoint() - expm(B.adjoint())).norm() <= 1e-12 * expm(B).norm());
  }
}

TEST_CASE("expm of a nilpotent matrix is the finite series") {
  ComplexMatrix N = ComplexMatrix::Zero(3, 3);
  N(0, 1) = 2.0;
  N(1, 2) = Complex(0.0, 3.0);
  ComplexMatrix ref = ComplexMatrix::Identity(3, 3) + N + 0.5 * N * N;
  CHECK((expm(N) - ref).norm() < 1e-14);
}

TEST_CASE("expm rejects non-square input") {
  CHECK_THROWS_AS(expm(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("qr_positive spec examples") {
  const auto one = qr_positive(ComplexMatrix::Identity(1, 1));
  CHECK(one.Q(0, 0) == Complex(1.0));
  CHECK(one.R(0, 0) == Complex(1.0));
  ComplexMatrix m(1, 1);
  m(0, 0) = -1.0;
  const auto neg = qr_positive(m);
  CHECK(std::abs(neg.Q(0, 0) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(neg.R(0, 0) - Complex(1.0)) < 1e-15);
}

TEST_CASE("qr_positive reconstructs with a positive real diagonal") {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 7;
    const ComplexMatrix M = testutil::random_matrix(n, rng);
    const auto [Q, R] = qr_positive(M);
    CHECK((Q * R - M).norm() <= 1e-12 * std::max(1.0, M.norm()));
    CHECK(unitarity_defect(Q) <= 1e-12);
    for (int i = 0; i < n; ++i) {
      CHECK(R(i, i).real() > 0.0);
      CHECK(R(i, i).imag() == 0.0);
      for (int j = 0; j < i; ++j) CHECK(R(i, j) == Complex(0.0));
    }
  }
}

TEST_CASE("qr_positive is idempotent on unitaries") {
  Rng rng(15);
  for (int n : {1, 2, 4, 7}) {
    const ComplexMatrix U = haar_unitary(n, rng);
    const auto [Q, R] = qr_positive(U);
    CHECK((Q - U).norm() <= 1e-12);
    CHECK((R - ComplexMatrix::Identity(n, n)).norm() <= 1e-12);
  }
}

TEST_CASE("in-place Gram-Schmidt QR agrees with the Householder factorization") {
  Rng rng(16);
  for (int n : {1, 2, 3, 5, 8}) {
    const ComplexMatrix M = testutil::random_matrix(n, rng);
    ComplexMatrix Q = M, R;
    REQUIRE(qr_positive_inplace(Q, R));
    const auto ref = qr_positive(M);
    CHECK((Q - ref.Q).norm() <= 1e-12);
    CHECK((R - ref.R).norm() <= 1e-12 * M.norm());
  }
}

TEST_CASE("qr_positive flags singular input") {
  ComplexMatrix M = ComplexMatrix::Ones(3, 3);
  CHECK_THROWS_AS(qr_positive(M), SingularityError);
  ComplexMatrix Q = M, R;
  CHECK_FALSE(qr_positive_inplace(Q, R));
}

TEST_CASE("haar_unitary moments") {
  Rng rng(17);
  const int N = 40000;
  Accumulator re1, im1;
  for (int i = 0; i < N; ++i) {
    const Complex z = haar_unitary(1, rng)(0, 0);
    CHECK(std::abs(std::abs(z) - 1.0) < 1e-14);
    re1.add(z.real());
    im1.add(z.imag());
  }
  CHECK(std::abs(re1.mean) <= 3.0 / std::sqrt(N));
  CHECK(std::abs(im1.mean) <= 3.0 / std::sqrt(N));

  for (int L : {2, 3, 5}) {
    Accumulator tr2, q11;
    for (int i = 0; i < 20000; ++i) {
      const ComplexMatrix Q = haar_unitary(L, rng);
      CHECK(unitarity_defect(Q) <= 1e-12);
      tr2.add(std::norm(Q.trace()));
      q11.add(std::norm(Q(0, 0)));
    }
    CHECK(std::abs(tr2.mean - 1.0) <= 4.0 * tr2.stderr_of_mean());
    CHECK(std::abs(q11.mean - 1.0 / L) <= 4.0 * q11.stderr_of_mean());
  }
}

TEST_CASE("left invariance of the Haar sampler") {
  Rng rng(18);
  const int L = 3;
  const ComplexMatrix U0 = haar_unitary(L, rng);
  Accumulator plain, shifted;
  for (int i = 0; i < 20000; ++i) {
    plain.add(std::norm(haar_unitary(L, rng)(0, 1)));
    shifted.add(std::norm((U0 * haar_unitary(L, rng))(0, 1)));
  }
  const double se = std::hypot(plain.stderr_of_mean(), shifted.stderr_of_mean());
  CHECK(std::abs(plain.mean - shifted.mean) <= 4.0 * se);
}

TEST_CASE("indefinite forms") {
  const ComplexMatrix G = lorentz_form(2), J = symplectic_form(2);
  CHECK(G(0, 0) == Complex(1.0));
  CHECK(G(3, 3) == Complex(-1.0));
  CHECK(J(0, 2) == Complex(-1.0));
  CHECK(J(2, 0) == Complex(1.0));
  CHECK(check_lorentz(ComplexMatrix::Identity(4, 4), 2) == 0.0);
  CHECK(check_symplectic(ComplexMatrix::Identity(4, 4), 2) == 0.0);
}

TEST_CASE("check_lorentz on R_k and on sampled steps") {
  Rng rng(19);
  for (double E : {1.0, 0.5, -1.3}) {
    const WiresModel m(3, E, 0.2);
    CHECK(check_lorentz(m.rotation(), 3) <= 1e-14);
    for (int i = 0; i < 20; ++i) CHECK(check_lorentz(m.step_matrix(m.sample_w(rng)), 3) <= 1e-12);
  }
}

TEST_CASE("isotropic frame helpers") {
  Rng rng(20);
  const IsotropicFrame x = haar_frame(3, rng);
  const ComplexMatrix phi = x.phi();
  CHECK((phi.adjoint() * phi - ComplexMatrix::Identity(3, 3)).norm() <= 1e-12);
  CHECK((phi.adjoint() * lorentz_form(3) * phi).norm() <= 1e-12);
  Eigen::VectorXd ph(3);
  ph << 0.3, -1.0, 2.0;
  const IsotropicFrame g = x.gauged(ph);
  CHECK(std::abs((g.U.adjoint() * g.V).trace() - (x.U.adjoint() * x.V).trace()) < 1e-12);
  CHECK(IsotropicFrame::identity(2).unitarity_defect() == 0.0);
}
