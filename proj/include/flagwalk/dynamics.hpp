// SPDX-License-Identifier: Apache-2.0
//
// Markov chain x_n = T_n . x_{n-1} on isotropic frames, disorder-averaged
// Birkhoff sums, and two independent estimators of the Lyapunov spectrum.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flagwalk/matrix_core.hpp"
#include "flagwalk/model_wires.hpp"
#include "flagwalk/parallel.hpp"
#include "flagwalk/stats.hpp"

namespace flagwalk {

using FrameFunction = std::function<double(const IsotropicFrame&)>;

/// Scratch buffers for act_inplace so the chain allocates nothing per step.
struct ActWorkspace {
  ComplexMatrix X, Y, R;
  Eigen::LLT<ComplexMatrix> llt;
};

/// Flag action (A B; C D).(U; V) = (AU + BV; CU + DV) S with S = R^{-1} from
/// qr_positive(AU + BV). Throws DegenerateFrameError if AU + BV is singular.
IsotropicFrame act(const ComplexMatrix& T, const IsotropicFrame& frame);

/// In-place action. When `log_volumes` is non-null it receives, for p = 1..L,
/// log sqrt det of the leading p x p block of Phi^* T^* T Phi evaluated
/// before the move. Returns false when the frame degenerates.
bool act_inplace(const ComplexMatrix& T, IsotropicFrame& frame, ActWorkspace& ws,
                 RealVector* log_volumes = nullptr);

/// Re-unitarize U and V with qr_positive when either drifts beyond `threshold`.
/// Returns true if a correction was applied.
bool reunitarize(IsotropicFrame& frame, double threshold = 1e-11);

struct ChainState {
  IsotropicFrame frame;
  std::int64_t step = 0;
  Rng rng;
};

/// Source of step matrices T_{lambda, sigma}. The wires model is one instance;
/// scenario models supply their own.
using StepSampler = std::function<void(Rng&, ComplexMatrix&)>;

StepSampler wires_sampler(const WiresModel& model);

/// Advances the state by one step; throws DegenerateFrameError with the step index.
void advance(ChainState& state, const StepSampler& sampler, ActWorkspace& ws,
             ComplexMatrix& T_buf, RealVector* log_volumes = nullptr);

/// Iterates n steps of x_n = T_n . x_{n-1}, calling visit(n, x_n) for n = 1..n
/// (visit(0, x0) first). Deterministic given the RNG state.
void run_chain(const StepSampler& sampler, const IsotropicFrame& x0, std::int64_t n, Rng& rng,
               const std::function<void(std::int64_t, const IsotropicFrame&)>& visit);
/// Materialized trajectory x_0..x_n for the wires model.
std::vector<IsotropicFrame> run_chain(const WiresModel& model, const IsotropicFrame& x0,
                                      std::int64_t n, Rng& rng);

struct BirkhoffEstimate {
  double mean = 0.0;
  double stderr = 0.0;  ///< across replicas
  std::int64_t n_steps = 0;
  std::int64_t n_replicas = 0;
  std::int64_t burn_in = 0;
  std::vector<double> replica_means;
};

BirkhoffEstimate make_estimate(std::vector<double> replica_means, std::int64_t n_steps,
                               std::int64_t burn_in);

/// max(10^3, 10 / lambda^2)
std::int64_t default_burn_in(double lambda);

struct BirkhoffOptions {
  std::int64_t n_steps = 100'000;
  std::int64_t replicas = 8;
  std::optional<std::int64_t> burn_in;  ///< default_burn_in(lambda) when unset
  std::optional<IsotropicFrame> x0;     ///< identity frame when unset
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
  /// Optional running-mean trace of replica 0: one entry per `trace_every` steps.
  std::int64_t trace_every = 0;
};

struct TracePoint {
  std::int64_t step;
  double value;
  double running_mean;
};

/// Averages f over n_steps post-burn-in frames of each replica chain.
BirkhoffEstimate birkhoff(const WiresModel& model, const FrameFunction& f,
                          const BirkhoffOptions& opts, std::vector<TracePoint>* trace = nullptr);
/// Same with several observables on one set of trajectories.
std::vector<BirkhoffEstimate> birkhoff_many(const StepSampler& sampler,
                                            const std::vector<FrameFunction>& fs, int L,
                                            const BirkhoffOptions& opts, std::int64_t burn_in,
                                            std::vector<TracePoint>* trace = nullptr);

enum class LyapunovMethod { qr_oracle, birkhoff_fp };

struct LyapunovSpectrum {
  std::vector<double> exponents;  ///< 2L values, descending
  std::vector<double> stderr;     ///< per exponent, across replicas
  LyapunovMethod method = LyapunovMethod::qr_oracle;
  std::int64_t n_steps = 0;
  std::int64_t n_replicas = 0;
  std::vector<std::vector<double>> replica_exponents;

  /// Sum of the top p exponents with its across-replica stderr.
  std::pair<double, double> partial_sum(int p) const;
};

/// `fast` runs fixed-size specialized loops; `reference` runs the literal
/// dynamic-size construction (full T_hat products, or act() with
/// step_matrix()). Both consume the RNG identically.
enum class Kernel { fast, reference };

struct LyapunovOptions {
  std::int64_t n_steps = 1'000'000;
  std::int64_t replicas = 8;
  std::optional<std::int64_t> burn_in;
  int reorth_interval = 8;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
  Kernel kernel = Kernel::fast;
};

/// Products of T_hat transfer matrices on a 2L frame, re-QR every q steps.
/// Norms are measured in normal-form coordinates (the frame is carried as
/// (CN)^{-1} Y), which leaves the exponents unchanged and makes lambda = 0 an
/// exact isometry.
LyapunovSpectrum lyapunov_qr(const WiresModel& model, const LyapunovOptions& opts);

/// Birkhoff averages of the one-step p-volume growth f_p along the isotropic
/// frame chain; entry p-1 estimates gamma_1 + ... + gamma_p.
std::vector<BirkhoffEstimate> lyapunov_birkhoff_all(const WiresModel& model,
                                                    const LyapunovOptions& opts);
BirkhoffEstimate lyapunov_birkhoff(const WiresModel& model, int p, const LyapunovOptions& opts);

}  // namespace flagwalk
