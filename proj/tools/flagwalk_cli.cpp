// SPDX-License-Identifier: Apache-2.0
//
// flagwalk: run one scenario, write a JSON report (and optionally a CSV
// running-mean trace), exit 0 iff every record passes.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "flagwalk/report.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 3;
constexpr int kFail = 1;

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace flagwalk;
  CLI::App app{"Random products on the isotropic flag manifold"};
  RunConfig cfg;
  std::string scenario = "lyapunov", ensemble = "gaussian";
  std::uint64_t seed = 0;
  std::int64_t burn_in = -1;
  double tolerance = -1.0;
  bool serial = false;

  app.add_option("--scenario", scenario,
                 "lyapunov | birkhoff | haar-check | closure | counterexample | moments | divergence");
  app.add_option("--L", cfg.L, "number of wires");
  app.add_option("--E", cfg.E, "energy, |E| < 2");
  app.add_option("--lambda", cfg.lambda, "coupling strength");
  app.add_option("--ensemble", ensemble, "gaussian | rademacher");
  app.add_option("--steps", cfg.steps, "steps per replica, or Monte Carlo samples");
  app.add_option("--replicas", cfg.replicas, "independent replicas (frames for closure/divergence)");
  app.add_option("--burn-in", burn_in, "discarded steps (default max(1000, 10/lambda^2))");
  app.add_option("--seed", seed, "random seed")->required();
  app.add_option("--p", cfg.p, "report only this p (0 = all)");
  app.add_option("--tolerance", tolerance, "override the scenario tolerance");
  app.add_option("--out", cfg.out, "JSON report path");
  app.add_option("--csv", cfg.csv, "CSV trace path (step,value,running_mean)");
  app.add_flag("--serial", serial, "run replicas on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  Report rep;
  try {
    cfg.scenario = scenario_from_string(scenario);
    try {
      cfg.ensemble = ensemble_from_string(ensemble);
    } catch (const InputError& e) {
      throw ConfigError("ensemble", e.what());
    }
    cfg.seed = seed;
    if (burn_in >= 0) cfg.burn_in = burn_in;
    if (tolerance >= 0.0) cfg.tolerance = tolerance;
    cfg.exec = serial ? Exec::serial : Exec::parallel;
    rep = run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: field '" << e.field << "': " << e.what() << "\n";
    return kUsageError;
  }

  const std::string text = to_json_string(rep);
  if (!cfg.out.empty() && !write_file(cfg.out, text + "\n")) {
    std::cerr << "cannot write " << cfg.out << "\n";
    return kRuntimeError;
  }
  if (!cfg.csv.empty() && !write_file(cfg.csv, trace_to_csv(rep.trace))) {
    std::cerr << "cannot write " << cfg.csv << "\n";
    return kRuntimeError;
  }

  for (const auto& r : rep.records) {
    std::printf("%-4s %-40s est=% .6e  se=%.2e  pred=% .6e  tol=%.2e\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.estimate, r.stderr, r.prediction, r.tolerance);
  }
  if (rep.error) {
    std::fprintf(stderr, "error: %s: %s\n", rep.error->type.c_str(), rep.error->message.c_str());
    if (cfg.out.empty()) std::cout << text << "\n";
    return kRuntimeError;
  }
  std::printf("%s (%.2fs)\n", rep.all_pass() ? "all records pass" : "some records fail",
              rep.timing.wall_seconds);
  return rep.all_pass() ? 0 : kFail;
}
