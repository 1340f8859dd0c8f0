// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/dynamics.hpp"

#include "wires_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace flagwalk {

bool act_inplace(const ComplexMatrix& T, IsotropicFrame& frame, ActWorkspace& ws,
                 RealVector* log_volumes) {
  const int L = frame.dim();
  if (T.rows() != 2 * L || T.cols() != 2 * L) {
    throw DimensionError("act: T must be 2L x 2L for an L-frame");
  }
  ws.X.noalias() = T.topLeftCorner(L, L) * frame.U;
  ws.X.noalias() += T.topRightCorner(L, L) * frame.V;
  ws.Y.noalias() = T.bottomLeftCorner(L, L) * frame.U;
  ws.Y.noalias() += T.bottomRightCorner(L, L) * frame.V;

  if (log_volumes) {
    // Phi^* T^* T Phi with Phi = (U; V)/sqrt(2).
    ComplexMatrix gram = 0.5 * (ws.X.adjoint() * ws.X + ws.Y.adjoint() * ws.Y);
    ws.llt.compute(gram);
    const ComplexMatrix& chol = ws.llt.matrixLLT();
    log_volumes->resize(L);
    double acc = 0.0;
    for (int p = 0; p < L; ++p) {
      const double d = chol(p, p).real();
      if (ws.llt.info() != Eigen::Success || !(d > 0.0)) {
        throw DegenerateVolumeError("lyapunov_birkhoff: Gram determinant is not positive");
      }
      acc += std::log(d);
      (*log_volumes)(p) = acc;
    }
  }

  if (!qr_positive_inplace(ws.X, ws.R)) return false;
  ws.R.triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(ws.Y);
  frame.U.swap(ws.X);
  frame.V.swap(ws.Y);
  reunitarize(frame);
  return true;
}

bool reunitarize(IsotropicFrame& frame, double threshold) {
  bool fixed = false;
  if (unitarity_defect(frame.V) > threshold) {
    frame.V = qr_positive(frame.V).Q;
    fixed = true;
  }
  if (unitarity_defect(frame.U) > threshold) {
    frame.U = qr_positive(frame.U).Q;
    fixed = true;
  }
  return fixed;
}

IsotropicFrame act(const ComplexMatrix& T, const IsotropicFrame& frame) {
  IsotropicFrame out = frame;
  ActWorkspace ws;
  if (!act_inplace(T, out, ws)) throw DegenerateFrameError("act: AU + BV is singular");
  return out;
}

StepSampler wires_sampler(const WiresModel& model) {
  return [model, W = ComplexMatrix()](Rng& rng, ComplexMatrix& T) mutable {
    sample_w_into(model.spec(), rng, W);
    T = model.step_matrix(W);
  };
}

void advance(ChainState& state, const StepSampler& sampler, ActWorkspace& ws,
             ComplexMatrix& T_buf, RealVector* log_volumes) {
  sampler(state.rng, T_buf);
  ++state.step;
  if (!act_inplace(T_buf, state.frame, ws, log_volumes)) {
    throw DegenerateFrameError("chain: AU + BV singular at step " + std::to_string(state.step),
                               state.step);
  }
}

void run_chain(const StepSampler& sampler, const IsotropicFrame& x0, std::int64_t n, Rng& rng,
               const std::function<void(std::int64_t, const IsotropicFrame&)>& visit) {
  if (n < 1) throw InputError("run_chain: n must be >= 1");
  ChainState st{x0, 0, rng};
  ActWorkspace ws;
  ComplexMatrix T;
  visit(0, st.frame);
  for (std::int64_t i = 0; i < n; ++i) {
    advance(st, sampler, ws, T);
    visit(st.step, st.frame);
  }
  rng = st.rng;
}

std::vector<IsotropicFrame> run_chain(const WiresModel& model, const IsotropicFrame& x0,
                                      std::int64_t n, Rng& rng) {
  std::vector<IsotropicFrame> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  run_chain(wires_sampler(model), x0, n, rng,
            [&](std::int64_t, const IsotropicFrame& x) { out.push_back(x); });
  return out;
}

BirkhoffEstimate make_estimate(std::vector<double> replica_means, std::int64_t n_steps,
                               std::int64_t burn_in) {
  BirkhoffEstimate e;
  const Accumulator acc = accumulate(replica_means);
  e.mean = acc.mean;
  e.stderr = acc.stderr_of_mean();
  e.n_steps = n_steps;
  e.n_replicas = static_cast<std::int64_t>(replica_means.size());
  e.burn_in = burn_in;
  e.replica_means = std::move(replica_means);
  return e;
}

std::int64_t default_burn_in(double lambda) {
  if (lambda <= 0.0) return 1000;
  return std::max<std::int64_t>(1000, static_cast<std::int64_t>(std::ceil(10.0 / (lambda * lambda))));
}

std::vector<BirkhoffEstimate> birkhoff_many(const StepSampler& sampler,
                                            const std::vector<FrameFunction>& fs, int L,
                                            const BirkhoffOptions& opts, std::int64_t burn_in,
                                            std::vector<TracePoint>* trace) {
  if (opts.n_steps < 1 || opts.replicas < 1) throw InputError("birkhoff: n and replicas must be >= 1");
  const IsotropicFrame x0 = opts.x0.value_or(IsotropicFrame::identity(L));
  const std::size_t nf = fs.size();

  std::vector<TracePoint> trace0;
  auto per_replica = map_replicas(
      opts.replicas,
      [&](std::int64_t r) {
        StepSampler local = sampler;
        ChainState st{x0, 0, make_stream(opts.seed, Stream::chain, static_cast<std::uint64_t>(r))};
        ActWorkspace ws;
        ComplexMatrix T;
        for (std::int64_t i = 0; i < burn_in; ++i) advance(st, local, ws, T);
        std::vector<double> sums(nf, 0.0);
        for (std::int64_t i = 0; i < opts.n_steps; ++i) {
          for (std::size_t j = 0; j < nf; ++j) {
            const double v = fs[j](st.frame);
            sums[j] += v;
            if (r == 0 && j == 0 && trace && opts.trace_every > 0 &&
                (i + 1) % opts.trace_every == 0) {
              trace0.push_back({i + 1, v, sums[0] / static_cast<double>(i + 1)});
            }
          }
          advance(st, local, ws, T);
        }
        for (double& s : sums) s /= static_cast<double>(opts.n_steps);
        return sums;
      },
      opts.exec);

  std::vector<BirkhoffEstimate> out;
  for (std::size_t j = 0; j < nf; ++j) {
    std::vector<double> means;
    for (const auto& rep : per_replica) means.push_back(rep[j]);
    out.push_back(make_estimate(std::move(means), opts.n_steps, burn_in));
  }
  if (trace) *trace = std::move(trace0);
  return out;
}

BirkhoffEstimate birkhoff(const WiresModel& model, const FrameFunction& f,
                          const BirkhoffOptions& opts, std::vector<TracePoint>* trace) {
  const std::int64_t burn = opts.burn_in.value_or(default_burn_in(model.lambda()));
  return birkhoff_many(wires_sampler(model), {f}, model.L(), opts, burn, trace).front();
}

std::pair<double, double> LyapunovSpectrum::partial_sum(int p) const {
  std::vector<double> sums;
  for (const auto& rep : replica_exponents) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += rep[static_cast<std::size_t>(i)];
    sums.push_back(s);
  }
  const Accumulator acc = accumulate(sums);
  return {acc.mean, acc.stderr_of_mean()};
}

namespace {

// Literal form: full T_hat products measured in normal-form coordinates,
// Householder-based qr_positive.
std::vector<double> qr_replica_reference(const WiresModel& model, std::int64_t n_steps,
                                         std::int64_t burn, int q, Rng rng) {
  const int n2 = 2 * model.L();
  ComplexMatrix X = model.from_normal();
  ComplexMatrix W;
  std::vector<double> logs(static_cast<std::size_t>(n2), 0.0);
  const std::int64_t total = burn + n_steps;
  for (std::int64_t s = 1; s <= total; ++s) {
    sample_w_into(model.spec(), rng, W);
    X = model.transfer_hat(W) * X;
    if (s % q == 0 || s == burn || s == total || X.cwiseAbs2().maxCoeff() > 1e200) {
      const QrResult qr = qr_positive(model.to_normal() * X);
      if (s > burn) {
        for (int i = 0; i < n2; ++i) logs[static_cast<std::size_t>(i)] += std::log(qr.R(i, i).real());
      }
      X = model.from_normal() * qr.Q;
    }
  }
  for (double& v : logs) v /= static_cast<double>(n_steps);
  std::sort(logs.begin(), logs.end(), std::greater<>());
  return logs;
}

std::vector<double> volume_replica_reference(const WiresModel& model, std::int64_t n_steps,
                                             std::int64_t burn, Rng rng) {
  const int L = model.L();
  StepSampler sampler = wires_sampler(model);
  ChainState st{IsotropicFrame::identity(L), 0, std::move(rng)};
  ActWorkspace ws;
  ComplexMatrix T;
  RealVector vol(L);
  std::vector<double> sums(static_cast<std::size_t>(L), 0.0);
  for (std::int64_t i = 0; i < burn; ++i) advance(st, sampler, ws, T);
  for (std::int64_t i = 0; i < n_steps; ++i) {
    advance(st, sampler, ws, T, &vol);
    for (int p = 0; p < L; ++p) sums[static_cast<std::size_t>(p)] += vol(p);
  }
  for (double& s : sums) s /= static_cast<double>(n_steps);
  return sums;
}

}  // namespace

LyapunovSpectrum lyapunov_qr(const WiresModel& model, const LyapunovOptions& opts) {
  if (opts.n_steps < 1 || opts.replicas < 1) throw InputError("lyapunov_qr: n and replicas must be >= 1");
  const int n2 = 2 * model.L();
  const std::int64_t burn = opts.burn_in.value_or(default_burn_in(model.lambda()));
  const int q = std::max(1, opts.reorth_interval);

  auto reps = map_replicas(
      opts.replicas,
      [&](std::int64_t r) {
        Rng rng = make_stream(opts.seed, Stream::lyapunov_qr, static_cast<std::uint64_t>(r));
        if (opts.kernel == Kernel::reference) {
          return qr_replica_reference(model, opts.n_steps, burn, q, std::move(rng));
        }
        return detail::dispatch_L<detail::QrKernel>(model.L(), model, opts.n_steps, burn, q,
                                                    std::move(rng));
      },
      opts.exec);

  LyapunovSpectrum spec;
  spec.method = LyapunovMethod::qr_oracle;
  spec.n_steps = opts.n_steps;
  spec.n_replicas = opts.replicas;
  for (int i = 0; i < n2; ++i) {
    Accumulator acc;
    for (const auto& rep : reps) acc.add(rep[static_cast<std::size_t>(i)]);
    spec.exponents.push_back(acc.mean);
    spec.stderr.push_back(acc.stderr_of_mean());
  }
  spec.replica_exponents = std::move(reps);
  return spec;
}

std::vector<BirkhoffEstimate> lyapunov_birkhoff_all(const WiresModel& model,
                                                    const LyapunovOptions& opts) {
  if (opts.n_steps < 1 || opts.replicas < 1) {
    throw InputError("lyapunov_birkhoff: n and replicas must be >= 1");
  }
  const int L = model.L();
  const std::int64_t burn = opts.burn_in.value_or(default_burn_in(model.lambda()));

  auto reps = map_replicas(
      opts.replicas,
      [&](std::int64_t r) {
        Rng rng = make_stream(opts.seed, Stream::lyapunov_birkhoff, static_cast<std::uint64_t>(r));
        if (opts.kernel == Kernel::reference) {
          return volume_replica_reference(model, opts.n_steps, burn, std::move(rng));
        }
        return detail::dispatch_L<detail::VolumeKernel>(L, model, opts.n_steps, burn,
                                                        std::move(rng));
      },
      opts.exec);

  std::vector<BirkhoffEstimate> out;
  for (int p = 0; p < L; ++p) {
    std::vector<double> means;
    for (const auto& rep : reps) means.push_back(rep[static_cast<std::size_t>(p)]);
    out.push_back(make_estimate(std::move(means), opts.n_steps, burn));
  }
  return out;
}

BirkhoffEstimate lyapunov_birkhoff(const WiresModel& model, int p, const LyapunovOptions& opts) {
  if (p < 1 || p > model.L()) throw InputError("lyapunov_birkhoff: p must lie in [1, L]");
  return lyapunov_birkhoff_all(model, opts)[static_cast<std::size_t>(p - 1)];
}

}  // namespace flagwalk
