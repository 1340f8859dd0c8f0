// SPDX-License-Identifier: Apache-2.0
#include "flagwalk/report.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "flagwalk/liealg.hpp"
#include "flagwalk/perturbation.hpp"
#include "flagwalk/scenarios.hpp"

namespace flagwalk {

using json = nlohmann::ordered_json;

namespace {

constexpr std::pair<Scenario, const char*> kScenarioNames[] = {
    {Scenario::lyapunov, "lyapunov"},           {Scenario::birkhoff, "birkhoff"},
    {Scenario::haar_check, "haar-check"},       {Scenario::closure, "closure"},
    {Scenario::counterexample, "counterexample"}, {Scenario::moments, "moments"},
    {Scenario::divergence, "divergence"},
};

bool needs_band(Scenario s) {
  return s != Scenario::counterexample && s != Scenario::moments;
}

Record within(std::string name, double est, double se, double pred, std::string ref, double tol) {
  return {std::move(name), est, se, pred, std::move(ref), tol, std::abs(est - pred) <= tol};
}

std::int64_t burn(const RunConfig& c) { return c.burn_in.value_or(default_burn_in(c.lambda)); }

std::vector<int> p_values(const RunConfig& c) {
  if (c.p > 0) return {c.p};
  std::vector<int> ps;
  for (int p = 1; p <= c.L; ++p) ps.push_back(p);
  return ps;
}

void run_lyapunov(const RunConfig& c, Report& rep) {
  const WiresModel m(c.L, c.E, c.lambda, c.ensemble);
  LyapunovOptions o;
  o.n_steps = c.steps;
  o.replicas = c.replicas;
  o.burn_in = burn(c);
  o.seed = *c.seed;
  o.exec = c.exec;
  const LyapunovSpectrum s = lyapunov_qr(m, o);
  const double rel = c.tolerance.value_or(0.15);
  for (int p : p_values(c)) {
    const auto i = static_cast<std::size_t>(p - 1);
    const double pred = gamma_perturbative(c.L, p, c.E, c.lambda);
    rep.records.push_back(within("gamma_" + std::to_string(p), s.exponents[i], s.stderr[i], pred,
                                 "lambda^2 (1 + 2(L - p)) / (8 sin^2 k)",
                                 std::max(rel * std::abs(pred), 3.0 * s.stderr[i])));
  }
  const double sk = m.sin_k();
  for (int p = 1; p < c.L; ++p) {
    std::vector<double> gaps;
    for (const auto& r : s.replica_exponents) gaps.push_back(r[p - 1] - r[p]);
    const Accumulator a = accumulate(gaps);
    rep.records.push_back(within("spacing_" + std::to_string(p), a.mean, a.stderr_of_mean(),
                                 gamma_spacing(c.E, c.lambda), "lambda^2 / (4 sin^2 k)",
                                 3.0 * a.stderr_of_mean() + 0.2 * std::pow(c.lambda / sk, 3)));
  }
  rep.timing.steps = (c.steps + *o.burn_in) * c.replicas;
}

void run_birkhoff(const RunConfig& c, Report& rep) {
  const WiresModel m(c.L, c.E, c.lambda, c.ensemble);
  LyapunovOptions o;
  o.n_steps = c.steps;
  o.replicas = c.replicas;
  o.burn_in = burn(c);
  o.seed = *c.seed;
  o.exec = c.exec;
  const auto sums = lyapunov_birkhoff_all(m, o);
  const double rel = c.tolerance.value_or(0.15);
  for (int p : p_values(c)) {
    const auto& e = sums[static_cast<std::size_t>(p - 1)];
    const double pred = gamma_partial_sum(c.L, p, c.E, c.lambda);
    rep.records.push_back(within("partial_sum_" + std::to_string(p), e.mean, e.stderr, pred,
                                 "lambda^2 p (2L - p) / (8 sin^2 k)",
                                 std::max(rel * std::abs(pred), 3.0 * e.stderr)));
  }
  BirkhoffOptions bo;
  bo.n_steps = c.steps;
  bo.replicas = c.replicas;
  bo.burn_in = burn(c);
  bo.seed = *c.seed;
  bo.exec = c.exec;
  bo.trace_every = std::max<std::int64_t>(1, c.steps / 1000);
  for (int p : p_values(c)) {
    std::vector<TracePoint> trace;
    const auto e = birkhoff(m, [p](const IsotropicFrame& x) { return class_function_Fp(x, p); }, bo,
                            rep.trace.empty() ? &trace : nullptr);
    if (rep.trace.empty()) rep.trace = std::move(trace);
    const double pred = 2.0 * c.L * p - p * p;
    rep.records.push_back(within("F_" + std::to_string(p) + "_mean", e.mean, e.stderr, pred,
                                 "Haar expectation 2Lp - p^2",
                                 c.tolerance.value_or(3.0 * e.stderr + 0.5 * c.lambda)));
  }
  rep.timing.steps = 2 * (c.steps + burn(c)) * c.replicas;
}

void run_haar_check(const RunConfig& c, Report& rep) {
  const WiresModel m(c.L, c.E, c.lambda, c.ensemble);
  const Estimate e = check_rho0_haar(m, c.steps, *c.seed, c.exec);
  const double tol = c.tolerance.value_or(3.0 * e.stderr);
  const RotationGroup g(m.k());
  if (std::abs(g.average_exp(4)) > 0.5) {
    rep.records.push_back({"rho0_deviation_nonzero", e.value, e.stderr, 0.0,
                           "E_theta e^{4 i theta} = 1: adjoint generator does not annihilate 1",
                           tol, std::abs(e.value) > tol});
  } else {
    rep.records.push_back(within("rho0_weighted_adjoint", e.value, e.stderr, 0.0,
                                 "adjoint averaged generator annihilates 1", tol));
  }
  rep.timing.steps = c.steps;
}

void run_closure(const RunConfig& c, Report& rep) {
  const WiresModel m(c.L, c.E, c.lambda, c.ensemble);
  const ClosureResult cl = bracket_closure(wires_generators(m));
  const double target = 2.0 * c.L * c.L - 1.0;
  std::ostringstream dims;
  for (std::size_t i = 0; i < cl.dims.size(); ++i) dims << (i ? "," : "") << cl.dims[i];
  rep.records.push_back({"closure_dim", static_cast<double>(cl.basis.dim()), 0.0, target,
                         "dim >= 2L^2 - 1; dims " + dims.str(), 0.0,
                         cl.stabilized && cl.basis.dim() >= target});
  rep.records.push_back(within("closure_bracket_defect", cl.basis.bracket_defect(), 0.0, 0.0,
                               "closed under commutators", 1e-8));
  const int frames = static_cast<int>(std::min<std::int64_t>(c.replicas, 1000));
  Rng rng = make_stream(*c.seed, Stream::frames);
  int lo = std::numeric_limits<int>::max(), hi = 0;
  for (int i = 0; i < std::max(frames, 1); ++i) {
    const int r = tangent_rank(cl.basis, haar_frame(c.L, rng));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double dimM = 2.0 * c.L * c.L - c.L;
  rep.records.push_back(within("tangent_rank_min", lo, 0.0, dimM, "dim M = 2L^2 - L", 0.0));
  rep.records.push_back(within("tangent_rank_max", hi, 0.0, dimM, "dim M = 2L^2 - L", 0.0));
  rep.timing.steps = frames;
}

void run_counterexample(const RunConfig& c, Report& rep) {
  const Complex x0s[] = {Complex(1.0, 0.0), std::polar(1.0, std::numbers::pi / 8.0)};
  const char* labels[] = {"x0=1", "x0=exp(i pi/8)"};
  const int ms[] = {1, 2, 4};
  double avg4[2] = {0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    const auto est = circle_counterexample(c.lambda, x0s[i], c.steps, *c.seed, c.replicas, c.exec);
    for (int j = 0; j < 3; ++j) {
      const double pred = circle_orbit_average(c.lambda, x0s[i], ms[j]);
      const double tol = c.tolerance.value_or(
          3.0 * est[j].stderr + 10.0 / (static_cast<double>(c.steps) * c.lambda * c.lambda));
      rep.records.push_back(within("re_z" + std::to_string(ms[j]) + "[" + labels[i] + "]",
                                   est[j].mean, est[j].stderr, pred,
                                   "uniform measure on the orbit closure of x0", tol));
    }
    avg4[i] = est[2].mean;
  }
  const double d_pred = std::abs(circle_orbit_average(c.lambda, x0s[0], 4) -
                                 circle_orbit_average(c.lambda, x0s[1], 4));
  rep.records.push_back(within(d_pred > 0.5 ? "non_unique_invariant_measure" : "x0_independence",
                               std::abs(avg4[0] - avg4[1]), 0.0, d_pred,
                               "difference of Re(z^4) averages between starting points",
                               c.tolerance.value_or(1e-6 + 20.0 / (c.steps * c.lambda * c.lambda))));
  rep.timing.steps = 2 * c.steps * c.replicas;
}

void run_moments(const RunConfig& c, Report& rep) {
  const WignerSpec spec{c.L, c.ensemble};
  Rng rng = make_stream(*c.seed, Stream::generator);
  const ComplexMatrix P = ginibre(c.L, c.L, rng), Q = ginibre(c.L, c.L, rng);
  const double sigma = c.tolerance.value_or(4.0);
  for (const MomentReport& mr : {verify_w_identities(spec, P, Q, c.steps, *c.seed, c.exec),
                                 verify_variance_conditions(spec, c.steps, *c.seed + 1, c.exec)}) {
    for (const auto& id : mr.identities) {
      rep.records.push_back({"moment:" + id.name, id.max_abs_deviation, id.stderr_at_max, 0.0,
                             "exact second-moment identity", sigma * id.stderr_at_max,
                             id.max_sigma <= sigma});
    }
  }
  rep.timing.steps = 2 * c.steps;
}

void run_divergence(const RunConfig& c, Report& rep) {
  const WiresModel m(c.L, c.E, c.lambda, c.ensemble);
  Rng rng = make_stream(*c.seed, Stream::divergence);
  double worst = 0.0;
  const std::int64_t n = std::max<std::int64_t>(1, std::min<std::int64_t>(c.replicas, 1000));
  for (std::int64_t i = 0; i < n; ++i) {
    const IsotropicFrame x = haar_frame(c.L, rng);
    const ComplexMatrix P = m.perturbation(m.sample_w(rng));
    worst = std::max(worst, std::abs(divergence_dp(x, upper_right(P), c.L) - divergence_numeric(P, x)));
  }
  rep.records.push_back(within("divergence_closed_vs_numeric", worst, 0.0, 0.0,
                               "2 Re Tr(C U* B V) against finite-difference divergence",
                               c.tolerance.value_or(1e-4)));
  rep.timing.steps = n;
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [v, n] : kScenarioNames)
    if (v == s) return n;
  return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
  for (const auto& [v, n] : kScenarioNames)
    if (s == n) return v;
  throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

void validate(const RunConfig& c) {
  if (c.L < 1) throw ConfigError("L", "must be >= 1");
  if (!(c.lambda >= 0.0) || !std::isfinite(c.lambda)) throw ConfigError("lambda", "must be >= 0");
  if (c.scenario == Scenario::counterexample && !(c.lambda > 0.0)) {
    throw ConfigError("lambda", "must be > 0 for the counterexample");
  }
  if (needs_band(c.scenario) && !(std::abs(c.E) < 2.0)) {
    throw ConfigError("E", "must satisfy |E| < 2");
  }
  if (!c.seed) throw ConfigError("seed", "is required");
  if (c.steps < 2) throw ConfigError("steps", "must be >= 2");
  if (c.replicas < 1) throw ConfigError("replicas", "must be >= 1");
  if (c.burn_in && *c.burn_in < 0) throw ConfigError("burn-in", "must be >= 0");
  if (c.p < 0 || c.p > c.L) throw ConfigError("p", "must satisfy 0 <= p <= L");
  if (c.tolerance && !(*c.tolerance >= 0.0)) throw ConfigError("tolerance", "must be >= 0");
}

bool Report::all_pass() const {
  if (error) return false;
  for (const auto& r : records)
    if (!r.pass) return false;
  return !records.empty();
}

Report run(const RunConfig& config) {
  validate(config);
  Report rep;
  rep.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (config.scenario) {
      case Scenario::lyapunov: run_lyapunov(config, rep); break;
      case Scenario::birkhoff: run_birkhoff(config, rep); break;
      case Scenario::haar_check: run_haar_check(config, rep); break;
      case Scenario::closure: run_closure(config, rep); break;
      case Scenario::counterexample: run_counterexample(config, rep); break;
      case Scenario::moments: run_moments(config, rep); break;
      case Scenario::divergence: run_divergence(config, rep); break;
    }
  } catch (const DegenerateFrameError& e) {
    rep.error = ErrorRecord{"DegenerateFrameError", e.what(), e.step};
  } catch (const DegenerateVolumeError& e) {
    rep.error = ErrorRecord{"DegenerateVolumeError", e.what(), -1};
  } catch (const std::exception& e) {
    rep.error = ErrorRecord{"RuntimeError", e.what(), -1};
  }
  rep.timing.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

json config_json(const RunConfig& c) {
  json j;
  j["scenario"] = to_string(c.scenario);
  j["L"] = c.L;
  j["E"] = c.E;
  j["lambda"] = c.lambda;
  j["ensemble"] = to_string(c.ensemble);
  j["steps"] = c.steps;
  j["replicas"] = c.replicas;
  j["burn_in"] = c.burn_in ? json(*c.burn_in) : json(nullptr);
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["p"] = c.p;
  j["tolerance"] = c.tolerance ? json(*c.tolerance) : json(nullptr);
  j["out"] = c.out;
  j["csv"] = c.csv;
  return j;
}

RunConfig config_from(const json& j) {
  RunConfig c;
  c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  c.L = j.at("L").get<int>();
  c.E = j.at("E").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.ensemble = ensemble_from_string(j.at("ensemble").get<std::string>());
  c.steps = j.at("steps").get<std::int64_t>();
  c.replicas = j.at("replicas").get<std::int64_t>();
  if (!j.at("burn_in").is_null()) c.burn_in = j.at("burn_in").get<std::int64_t>();
  if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
  c.p = j.at("p").get<int>();
  if (!j.at("tolerance").is_null()) c.tolerance = j.at("tolerance").get<double>();
  c.out = j.at("out").get<std::string>();
  c.csv = j.at("csv").get<std::string>();
  return c;
}

// JSON has no representation for non-finite numbers.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string to_json_string(const Report& r, int indent) {
  json j;
  j["config"] = config_json(r.config);
  j["records"] = json::array();
  for (const auto& rec : r.records) {
    json o;
    o["name"] = rec.name;
    o["estimate"] = number(rec.estimate);
    o["stderr"] = number(rec.stderr);
    o["prediction"] = number(rec.prediction);
    o["prediction_ref"] = rec.prediction_ref;
    o["tolerance"] = number(rec.tolerance);
    o["pass"] = rec.pass;
    j["records"].push_back(o);
  }
  j["timing"] = {{"wall_seconds", r.timing.wall_seconds}, {"steps", r.timing.steps}};
  if (r.error) {
    j["error"] = {{"type", r.error->type}, {"message", r.error->message}, {"step", r.error->step}};
  } else {
    j["error"] = nullptr;
  }
  j["all_pass"] = r.all_pass();
  return j.dump(indent);
}

Report report_from_json_string(const std::string& s) {
  try {
    const json j = json::parse(s);
    Report r;
    r.config = config_from(j.at("config"));
    for (const auto& o : j.at("records")) {
      if (o.size() != 7) throw InputError("report: record must have exactly 7 fields");
      r.records.push_back({o.at("name").get<std::string>(), number_from(o.at("estimate")),
                           number_from(o.at("stderr")), number_from(o.at("prediction")),
                           o.at("prediction_ref").get<std::string>(),
                           number_from(o.at("tolerance")), o.at("pass").get<bool>()});
    }
    r.timing.wall_seconds = j.at("timing").at("wall_seconds").get<double>();
    r.timing.steps = j.at("timing").at("steps").get<std::int64_t>();
    if (!j.at("error").is_null()) {
      const auto& e = j.at("error");
      r.error = ErrorRecord{e.at("type").get<std::string>(), e.at("message").get<std::string>(),
                            e.at("step").get<std::int64_t>()};
    }
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
}

std::string trace_to_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "step,value,running_mean\n";
  for (const auto& t : trace) os << t.step << ',' << t.value << ',' << t.running_mean << '\n';
  return os.str();
}

}  // namespace flagwalk
