#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "model_io.hpp"

namespace fedtrace::cli {

/// A single CLI run. Command-specific inputs (f, g, F, field, samples,
/// normalization, path, dt, t0) stay in `extra`.
struct JobSpec {
  std::string command;
  Json model;
  int order = 2;
  std::optional<int> weyl_cap;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::string output;
  Json extra = Json::object();

  /// Throws SchemaError on unknown commands, N < 1, D < 1 or tolerance <= 0.
  static JobSpec from_json(const Json& j);
  void validate() const;
  Json to_json() const;
};

/// Report with the job echo, one entry per check and the computed values.
/// Deterministic in (job, seed); "status" is "pass" iff every check passed.
Json run(const JobSpec& job);

/// Report for a job that could not be parsed.
Json schema_failure(const Json& raw, const std::string& message);

bool report_passed(const Json& report);

}  // namespace fedtrace::cli
