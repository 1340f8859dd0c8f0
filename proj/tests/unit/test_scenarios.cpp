// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>

#include "flagwalk/perturbation.hpp"
#include "flagwalk/scenarios.hpp"

using namespace flagwalk;

TEST_CASE("orbit averages of the circle example") {
  const Complex x0 = std::polar(1.0, 0.3);
  CHECK(circle_orbit_average(0.5, x0, 4) == doctest::Approx(std::cos(1.2)));
  CHECK(circle_orbit_average(0.5, x0, 2) == 0.0);
  CHECK(circle_orbit_average(0.5, x0, 1) == 0.0);
  CHECK(circle_orbit_average(1.0, x0, 2) == doctest::Approx(std::cos(0.6)));
  CHECK(circle_orbit_average(std::numbers::sqrt2 / 10.0, x0, 4) == 0.0);
}

TEST_CASE("Birkhoff averages depend on the starting point when lambda is rational") {
  for (double phi : {0.0, 0.3, 1.1}) {
    const Complex x0 = std::polar(1.0, phi);
    const auto est = circle_counterexample(0.5, x0, 20000, 1, 4, Exec::parallel);
    REQUIRE(est.size() == 3);
    const int ms[3] = {1, 2, 4};
    for (int i = 0; i < 3; ++i) {
      const double expect = circle_orbit_average(0.5, x0, ms[i]);
      CHECK(std::abs(est[static_cast<std::size_t>(i)].mean - expect) <=
            4.0 * est[static_cast<std::size_t>(i)].stderr + 1e-3);
    }
    // Re(z^4) is conserved exactly along every trajectory.
    CHECK(est[2].stderr <= 1e-12);
  }
}

TEST_CASE("irrational lambda: endpoints equidistribute") {
  GenericOptions o;
  o.n_steps = 10000;
  o.replicas = 500;
  o.seed = 2;
  const auto res = run_generic(circle_model(std::numbers::sqrt2 / 10.0), CircleManifold{}, {}, o);
  REQUIRE(res.endpoints.size() == 500);
  std::vector<double> u;
  for (Complex z : res.endpoints) {
    double a = std::arg(z) / (2.0 * std::numbers::pi);
    if (a < 0.0) a += 1.0;
    u.push_back(a);
  }
  CHECK(ks_uniform(u) <= 1.63 / std::sqrt(500.0));
}

TEST_CASE("KS distance of known samples") {
  CHECK(ks_uniform({0.5}) == doctest::Approx(0.5));
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back((i + 0.5) / 100.0);
  CHECK(ks_uniform(grid) == doctest::Approx(0.005));
  CHECK_THROWS_AS(ks_uniform({}), InputError);
}

TEST_CASE("circle input validation") {
  GenericOptions o;
  o.n_steps = 10;
  o.replicas = 1;
  CHECK_THROWS_AS(run_generic(circle_model(0.1), CircleManifold{Complex(2.0, 0.0)}, {}, o), InputError);
  GenericModel bad = circle_model(0.1);
  bad.R(0, 0) = 1.5;
  CHECK_THROWS_AS(run_generic(bad, CircleManifold{}, {}, o), InputError);
  GenericModel two = circle_model(0.1);
  two.R = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(run_generic(two, CircleManifold{}, {}, o), InputError);
  CHECK_THROWS_AS(circle_counterexample(0.1, Complex(0.0, 0.5), 10, 1), InputError);
}

TEST_CASE("lambda = 0 flow is deterministic rotation") {
  GenericOptions o;
  o.n_steps = 7;
  o.replicas = 3;
  GenericModel m = circle_model(0.0);
  m.R(0, 0) = std::polar(1.0, 0.25);
  const auto res = run_generic(m, CircleManifold{}, {}, o);
  for (Complex z : res.endpoints) CHECK(std::abs(z - std::polar(1.0, 7 * 0.25)) < 1e-13);
}

TEST_CASE("wires model through the generic path is bit-identical to the wires chain") {
  const WiresModel w(2, 1.0, 0.2);
  const auto f = [](const IsotropicFrame& x) { return class_function_Fp(x, 1); };
  BirkhoffOptions bo;
  bo.n_steps = 500;
  bo.replicas = 3;
  bo.seed = 4;
  bo.burn_in = 0;
  const auto direct = birkhoff(w, f, bo);
  GenericOptions go;
  go.n_steps = 500;
  go.replicas = 3;
  go.seed = 4;
  const auto gen = run_generic(wires_as_generic(w), FlagManifold{2, std::nullopt}, {f}, go);
  CHECK(gen.estimates.front().replica_means == direct.replica_means);
  CHECK_THROWS_AS(run_generic(wires_as_generic(w), FlagManifold{3, std::nullopt}, {f}, go), DimensionError);
}

TEST_CASE("centering diagnostics") {
  const auto c = centering(circle_model(0.1), 40000, 5);
  CHECK(c.commutator_norm == 0.0);
  CHECK(c.mean_p1_norm <= 4.0 * c.mean_p1_stderr * std::sqrt(2.0));
  GenericModel biased = circle_model(0.1);
  biased.P_series[0] = [](Rng&) { return ComplexMatrix::Constant(1, 1, Complex(0.0, 1.0)); };
  const auto b = centering(biased, 100, 5);
  CHECK(b.mean_p1_norm == doctest::Approx(1.0));
  CHECK(b.mean_p1_stderr == 0.0);
  const auto w = centering(wires_as_generic(WiresModel(2, 1.0, 0.1)), 20000, 6);
  CHECK(w.mean_p1_norm <= 5.0 * 4.0 * w.mean_p1_stderr);
}
