// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration, dispatch, and the JSON/CSV report format.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flagwalk/dynamics.hpp"
#include "flagwalk/ensembles.hpp"

namespace flagwalk {

enum class Scenario { lyapunov, birkhoff, haar_check, closure, counterexample, moments, divergence };

std::string to_string(Scenario s);
/// Accepts the CLI spelling (haar-check). Throws InputError naming "scenario".
Scenario scenario_from_string(const std::string& s);

struct RunConfig {
  Scenario scenario = Scenario::lyapunov;
  int L = 1;
  double E = 1.0;
  double lambda = 0.1;
  EnsembleKind ensemble = EnsembleKind::gaussian;
  std::int64_t steps = 100'000;
  std::int64_t replicas = 8;
  std::optional<std::int64_t> burn_in;
  std::optional<std::uint64_t> seed;
  int p = 0;                         ///< 0: every p = 1..L
  std::optional<double> tolerance;   ///< overrides the scenario's relative/absolute tolerance
  std::string out;                   ///< JSON report path ("" = none)
  std::string csv;                   ///< CSV trace path ("" = none)
  Exec exec = Exec::parallel;
};

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& c);

struct ConfigError : InputError {
  std::string field;
  ConfigError(std::string f, const std::string& what) : InputError(f + ": " + what), field(std::move(f)) {}
};

struct Record {
  std::string name;
  double estimate = 0.0;
  double stderr = 0.0;
  double prediction = 0.0;
  std::string prediction_ref;
  double tolerance = 0.0;
  bool pass = false;

  bool operator==(const Record&) const = default;
};

struct Timing {
  double wall_seconds = 0.0;  ///< excluded from the determinism guarantee
  std::int64_t steps = 0;     ///< total chain steps or samples consumed

  bool operator==(const Timing&) const = default;
};

struct ErrorRecord {
  std::string type;
  std::string message;
  std::int64_t step = -1;

  bool operator==(const ErrorRecord&) const = default;
};

struct Report {
  RunConfig config;
  std::vector<Record> records;
  Timing timing;
  std::optional<ErrorRecord> error;
  std::vector<TracePoint> trace;  ///< written to CSV, not to JSON

  bool all_pass() const;
};

/// Runs the scenario. Runtime failures are captured into `error`.
Report run(const RunConfig& config);

std::string to_json_string(const Report& r, int indent = 2);
/// Inverse of to_json_string (trace excluded). Throws InputError on schema violations.
Report report_from_json_string(const std::string& s);
std::string trace_to_csv(const std::vector<TracePoint>& trace);

}  // namespace flagwalk
