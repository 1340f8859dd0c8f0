// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flagwalk {

ComplexMatrix GenericModel::step(Rng& rng) const {
  ComplexMatrix S = ComplexMatrix::Zero(dim(), dim());
  double coef = 1.0;
  for (const auto& P : P_series) {
    coef *= lambda;
    S += coef * P(rng);
  }
  return R * expm(S);
}

StepSampler GenericModel::sampler() const {
  return [m = *this](Rng& rng, ComplexMatrix& T) { T = m.step(rng); };
}

CenteringDiagnostics centering(const GenericModel& model, std::int64_t nsamples,
                               std::uint64_t seed) {
  CenteringDiagnostics d;
  d.nsamples = nsamples;
  if (model.P_series.empty() || nsamples < 2) return d;
  const int n = model.dim();
  Rng rng = make_stream(seed, Stream::generator);
  std::vector<Accumulator> re(static_cast<std::size_t>(n * n)), im(re.size());
  for (std::int64_t s = 0; s < nsamples; ++s) {
    const ComplexMatrix P = model.P_series.front()(rng);
    for (int i = 0; i < n * n; ++i) {
      re[static_cast<std::size_t>(i)].add(P.data()[i].real());
      im[static_cast<std::size_t>(i)].add(P.data()[i].imag());
    }
  }
  ComplexMatrix mean(n, n);
  for (int i = 0; i < n * n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    mean.data()[i] = Complex(re[u].mean, im[u].mean);
    d.mean_p1_stderr =
        std::max({d.mean_p1_stderr, re[u].stderr_of_mean(), im[u].stderr_of_mean()});
  }
  d.mean_p1_norm = mean.norm();
  d.commutator_norm = commutator(model.R, mean).norm();
  return d;
}

GenericModel wires_as_generic(const WiresModel& model) {
  const WignerSpec spec = model.spec();
  const WiresModel m = model;
  return GenericModel{model.rotation(),
                      {[m, spec](Rng& rng) { return m.perturbation(flagwalk::sample_w(spec, rng)); }},
                      model.lambda()};
}

namespace {

void check_unit(Complex z, const char* what) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw InputError(std::string(what) + " must lie on the unit circle");
}

}  // namespace

GenericResult run_generic(const GenericModel& model, const CircleManifold& m,
                          const std::vector<CircleFunction>& fs, const GenericOptions& opts) {
  if (model.dim() != 1) throw InputError("run_generic(circle): R must be 1 x 1");
  if (opts.n_steps < 1 || opts.replicas < 1) throw InputError("run_generic: n and replicas must be >= 1");
  check_unit(m.x0, "x0");
  const std::size_t nf = fs.size();
  struct Rep {
    std::vector<double> sums;
    Complex end;
  };
  auto reps = map_replicas(
      opts.replicas,
      [&](std::int64_t r) {
        Rng rng = make_stream(opts.seed, Stream::scenario, static_cast<std::uint64_t>(r));
        Complex z = m.x0;
        auto move = [&](std::int64_t s) {
          const Complex t = model.step(rng)(0, 0);
          if (std::abs(std::abs(t) - 1.0) > 1e-12) {
            throw InputError("run_generic(circle): step " + std::to_string(s) + " is not unitary");
          }
          z *= t;
          z /= std::abs(z);
        };
        for (std::int64_t s = 0; s < opts.burn_in; ++s) move(s);
        Rep rep{std::vector<double>(nf, 0.0), z};
        for (std::int64_t s = 0; s < opts.n_steps; ++s) {
          for (std::size_t j = 0; j < nf; ++j) rep.sums[j] += fs[j](z);
          move(opts.burn_in + s);
        }
        for (double& v : rep.sums) v /= static_cast<double>(opts.n_steps);
        rep.end = z;
        return rep;
      },
      opts.exec);
  GenericResult out;
  for (std::size_t j = 0; j < nf; ++j) {
    std::vector<double> means;
    for (const auto& rep : reps) means.push_back(rep.sums[j]);
    out.estimates.push_back(make_estimate(std::move(means), opts.n_steps, opts.burn_in));
  }
  for (const auto& rep : reps) out.endpoints.push_back(rep.end);
  out.centering = centering(model, 10'000, opts.seed);
  return out;
}

GenericResult run_generic(const GenericModel& model, const FlagManifold& m,
                          const std::vector<FrameFunction>& fs, const GenericOptions& opts) {
  if (model.dim() != 2 * m.L) throw DimensionError("run_generic(flag): R must be 2L x 2L");
  BirkhoffOptions bo;
  bo.n_steps = opts.n_steps;
  bo.replicas = opts.replicas;
  bo.seed = opts.seed;
  bo.exec = opts.exec;
  bo.x0 = m.x0;
  GenericResult out;
  out.estimates = birkhoff_many(model.sampler(), fs, m.L, bo, opts.burn_in);
  out.centering = centering(model, 10'000, opts.seed);
  return out;
}

GenericModel circle_model(double lambda) {
  ComplexMatrix R = ComplexMatrix::Identity(1, 1);
  MatrixSampler p1 = [](Rng& rng) {
    ComplexMatrix P(1, 1);
    P(0, 0) = Complex(0.0, (rng() >> 63) ? std::numbers::pi : -std::numbers::pi);
    return P;
  };
  return GenericModel{R, {p1}, lambda};
}

std::vector<BirkhoffEstimate> circle_counterexample(double lambda, Complex x0, std::int64_t n,
                                                    std::uint64_t seed, std::int64_t replicas,
                                                    Exec exec) {
  check_unit(x0, "x0");
  std::vector<CircleFunction> fs;
  for (int m : {1, 2, 4}) fs.push_back([m](Complex z) { return std::pow(z, m).real(); });
  GenericOptions o;
  o.n_steps = n;
  o.replicas = replicas;
  o.seed = seed;
  o.exec = exec;
  return run_generic(circle_model(lambda), CircleManifold{x0}, fs, o).estimates;
}

double circle_orbit_average(double lambda, Complex x0, int m) {
  const RotationGroup g(std::numbers::pi * lambda);
  if (!g.is_finite() || m % *g.order() != 0) return 0.0;
  return std::pow(x0, m).real();
}

double ks_uniform(std::vector<double> u) {
  if (u.empty()) throw InputError("ks_uniform: empty sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace flagwalk
