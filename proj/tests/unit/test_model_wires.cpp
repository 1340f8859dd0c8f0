// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>

#include "flagwalk/model_wires.hpp"
#include "test_util.hpp"

using namespace flagwalk;

TEST_CASE("wavenumber convention and band edges") {
  CHECK(wavenumber(1.0) == doctest::Approx(2.0 * std::numbers::pi / 3.0).epsilon(1e-15));
  CHECK(wavenumber(0.0) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(wavenumber(2.0), BandEdgeError);
  CHECK_THROWS_AS(WiresModel(2, -2.5, 0.1), BandEdgeError);
  CHECK_THROWS_AS(WiresModel(0, 1.0, 0.1), InputError);
  CHECK_THROWS_AS(WiresModel(1, 1.0, -0.1), InputError);
}

TEST_CASE("derived matrices match their displays") {
  const WiresModel m(1, 1.0, 0.1);
  const double r2 = 1.0 / std::sqrt(2.0);
  const ComplexMatrix& C = m.cayley();
  CHECK(std::abs(C(0, 0) - r2) < 1e-16);
  CHECK(std::abs(C(0, 1) + kI * r2) < 1e-16);
  CHECK(std::abs(C(1, 0) - r2) < 1e-16);
  CHECK(std::abs(C(1, 1) - kI * r2) < 1e-16);
  CHECK(unitarity_defect(C) <= 1e-15);
  const double sk = std::sin(m.k()), ck = std::cos(m.k());
  const ComplexMatrix& N = m.normalizer();
  CHECK(std::abs(N(0, 0) - std::sqrt(sk)) < 1e-15);
  CHECK(std::abs(N(1, 0) + ck / std::sqrt(sk)) < 1e-15);
  CHECK(std::abs(N(1, 1) - 1.0 / std::sqrt(sk)) < 1e-15);
  CHECK((m.to_normal() * m.from_normal() - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("transfer_hat blocks and symplectic structure") {
  const WiresModel m0(1, 0.0, 0.0);
  ComplexMatrix expect(2, 2);
  expect << 0.0, -1.0, 1.0, 0.0;
  CHECK((m0.transfer_hat(ComplexMatrix::Ones(1, 1)) - expect).norm() == 0.0);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const int L = 1 + i % 5;
    const WiresModel m(L, -1.9 + 3.8 * (i % 37) / 37.0, 0.5 * (i % 11) / 11.0);
    const ComplexMatrix T = m.transfer_hat(m.sample_w(rng));
    CHECK(check_symplectic(T, L) <= 1e-12);
    CHECK(std::abs(T.determinant() - 1.0) <= 1e-10);
  }
}

TEST_CASE("normal form equals R_k expm(lambda P) over random draws") {
  Rng rng(2);
  std::uniform_real_distribution<double> uE(-1.95, 1.95), ul(0.0, 0.5);
  std::uniform_int_distribution<int> uL(1, 6);
  for (int i = 0; i < 1000; ++i) {
    const WiresModel m(uL(rng), uE(rng), ul(rng), i % 2 ? EnsembleKind::rademacher : EnsembleKind::gaussian);
    const ComplexMatrix W = m.sample_w(rng);
    const ComplexMatrix T = m.normal_form(W);
    CHECK((T - m.step_matrix(W)).norm() <= 1e-10);
    CHECK(check_lorentz(T, m.L()) <= 1e-10);
  }
}

TEST_CASE("normal form at lambda = 0 and the L = 1, E = 1 example") {
  Rng rng(3);
  const WiresModel m0(3, 0.7, 0.0);
  CHECK((m0.normal_form(m0.sample_w(rng)) - m0.rotation()).norm() <= 1e-12);

  const WiresModel m(1, 1.0, 0.1);
  const ComplexMatrix W = ComplexMatrix::Ones(1, 1);
  const double k = 2.0 * std::numbers::pi / 3.0;
  ComplexMatrix Rk(2, 2), P(2, 2);
  Rk << std::polar(1.0, -k), 0.0, 0.0, std::polar(1.0, k);
  const Complex c = kI / (2.0 * std::sin(k));
  P << c, c, -c, -c;
  // P^2 = 0, so exp(lambda P) = 1 + lambda P.
  const ComplexMatrix rhs = Rk * (ComplexMatrix::Identity(2, 2) + 0.1 * P);
  CHECK((m.normal_form(W) - rhs).norm() <= 1e-10);
}

TEST_CASE("perturbation lies in u(L,L) and squares to zero") {
  Rng rng(4);
  for (int L : {1, 2, 4}) {
    const WiresModel m(L, 0.3, 0.1);
    const ComplexMatrix P = m.perturbation(m.sample_w(rng));
    const ComplexMatrix G = lorentz_form(L);
    CHECK((P.adjoint() * G + G * P).norm() <= 1e-13);
    CHECK((P * P).norm() <= 1e-13);
  }
}

TEST_CASE("rotation group classification") {
  const RotationGroup g3(2.0 * std::numbers::pi / 3.0);
  REQUIRE(g3.order().has_value());
  CHECK(*g3.order() == 3);
  CHECK(std::abs(g3.average_exp(2)) == 0.0);
  CHECK(std::abs(g3.average_exp(4)) == 0.0);
  CHECK(g3.average_exp(3) == Complex(1.0));

  const RotationGroup g4(std::numbers::pi / 2.0);
  REQUIRE(g4.order().has_value());
  CHECK(*g4.order() == 4);
  CHECK(g4.average_exp(4) == Complex(1.0));
  CHECK(std::abs(g4.average_exp(2)) == 0.0);

  const RotationGroup ginf(1.0);
  CHECK_FALSE(ginf.is_finite());
  for (int m = 1; m < 10; ++m) CHECK(std::abs(ginf.average_exp(m)) == 0.0);
  CHECK_FALSE(RotationGroup(wavenumber(0.5)).is_finite());
}

TEST_CASE("rotation group quadrature is exact on trigonometric polynomials") {
  for (double k : {2.0 * std::numbers::pi / 3.0, std::numbers::pi / 2.0, 1.0}) {
    const RotationGroup g(k);
    const auto nodes = g.quadrature(4, 16);
    for (int m = -4; m <= 4; ++m) {
      Complex acc = 0.0;
      for (double t : nodes) acc += std::polar(1.0, m * t);
      acc /= static_cast<double>(nodes.size());
      CHECK(std::abs(acc - g.average_exp(m)) < 1e-14);
    }
  }
}

TEST_CASE("finite group elements are distinct and the sampler covers them") {
  const RotationGroup g(2.0 * std::numbers::pi / 3.0);
  Rng rng(5);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 3000; ++i) {
    const double t = g.sample(rng);
    const int j = static_cast<int>(std::lround(t / (2.0 * std::numbers::pi / 3.0)));
    REQUIRE(j >= 0);
    REQUIRE(j < 3);
    ++counts[j];
  }
  for (int c : counts) CHECK(std::abs(c - 1000) < 150);
  // R_k commutes with R_theta for every theta.
  const ComplexMatrix Rk = rotation_matrix(2, 2.0 * std::numbers::pi / 3.0);
  for (double t : g.quadrature(0)) {
    const ComplexMatrix Rt = rotation_matrix(2, t);
    CHECK((Rk * Rt - Rt * Rk).norm() == 0.0);
  }
}
