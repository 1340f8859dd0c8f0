// SPDX-License-Identifier: Apache-2.0
//
// Chains driven by a user-assembled step T = R expm(sum_n lambda^n P_n), on
// the circle or on the flag manifold, and the two-point circle example whose
// invariant measure depends on the starting point.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "flagwalk/dynamics.hpp"
#include "flagwalk/matrix_core.hpp"
#include "flagwalk/model_wires.hpp"
#include "flagwalk/parallel.hpp"

namespace flagwalk {

using MatrixSampler = std::function<ComplexMatrix(Rng&)>;

struct GenericModel {
  ComplexMatrix R;
  std::vector<MatrixSampler> P_series;  ///< P_1, ..., P_nmax
  double lambda = 0.0;

  int dim() const { return static_cast<int>(R.rows()); }
  /// R expm(sum_n lambda^n P_n(rng)); samplers are called in order 1..nmax.
  ComplexMatrix step(Rng& rng) const;
  StepSampler sampler() const;
};

/// Estimated E(P_1) and its commutator with R.
struct CenteringDiagnostics {
  double mean_p1_norm = 0.0;        ///< ||mean of P_1||_F
  double mean_p1_stderr = 0.0;      ///< entrywise max standard error of that mean
  double commutator_norm = 0.0;     ///< ||[R, mean of P_1]||_F
  std::int64_t nsamples = 0;
};

CenteringDiagnostics centering(const GenericModel& model, std::int64_t nsamples,
                               std::uint64_t seed);

/// The wires model as R_k expm(lambda P(W)); trajectories coincide bit for bit
/// with the wires chain for equal seeds.
GenericModel wires_as_generic(const WiresModel& model);

struct CircleManifold {
  Complex x0{1.0, 0.0};
};
struct FlagManifold {
  int L = 1;
  std::optional<IsotropicFrame> x0;
};

using CircleFunction = std::function<double(Complex)>;

struct GenericOptions {
  std::int64_t n_steps = 10'000;
  std::int64_t replicas = 8;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
};

struct GenericResult {
  std::vector<BirkhoffEstimate> estimates;  ///< one per observable
  CenteringDiagnostics centering;
  std::vector<Complex> endpoints;           ///< circle only: final z per replica
};

/// z_{n+1} = T_n z_n on the unit circle. Throws InputError when T is not 1 x 1
/// or |T| deviates from 1 by more than 1e-12, or when |x0| != 1.
GenericResult run_generic(const GenericModel& model, const CircleManifold& m,
                          const std::vector<CircleFunction>& fs, const GenericOptions& opts);
/// Flag-manifold chain through the same replica machinery as the wires model.
GenericResult run_generic(const GenericModel& model, const FlagManifold& m,
                          const std::vector<FrameFunction>& fs, const GenericOptions& opts);

/// R = 1, P_1 = +-i pi with probability 1/2 each: z -> e^{+-i pi lambda} z.
GenericModel circle_model(double lambda);

/// Birkhoff averages of Re(z^m), m in {1, 2, 4}, from x0. Throws InputError
/// when |x0| != 1.
std::vector<BirkhoffEstimate> circle_counterexample(double lambda, Complex x0, std::int64_t n,
                                                    std::uint64_t seed, std::int64_t replicas = 8,
                                                    Exec exec = Exec::parallel);

/// Limit of the Birkhoff average of Re(z^m) from x0 when e^{i pi lambda}
/// generates a finite group of order s (the uniform measure on the orbit
/// coset): Re(x0^m) if s divides m, else 0. Zero for a dense orbit.
double circle_orbit_average(double lambda, Complex x0, int m);

/// Kolmogorov-Smirnov distance of the sample from the uniform law on [0, 1).
double ks_uniform(std::vector<double> u);

}  // namespace flagwalk
