#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "job.hpp"

using fedtrace::cli::Json;

int main(int argc, char** argv) {
  CLI::App app{"Fedosov star products, trace densities and invariants"};
  std::string job_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> order;
  std::optional<int> weyl_cap;
  std::optional<double> tolerance;
  std::string out_path;
  app.add_option("--job", job_path, "Job description (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Seed for randomized suites");
  app.add_option("--order", order, "Target nu-order N");
  app.add_option("--weyl-cap", weyl_cap, "Weyl degree cap D");
  app.add_option("--tolerance", tolerance, "Tolerance for quadrature-backed checks");
  app.add_option("--out", out_path, "Report path (default: the job's output, else stdout)");
  CLI11_PARSE(app, argc, argv);

  Json raw;
  Json report;
  try {
    std::ifstream in(job_path);
    raw = Json::parse(in);
    if (raw.is_object()) {
      if (seed) raw["seed"] = *seed;
      if (order) raw["order"] = *order;
      if (weyl_cap) raw["weyl_cap"] = *weyl_cap;
      if (tolerance) raw["tolerance"] = *tolerance;
      if (!out_path.empty()) raw["output"] = out_path;
    }
    const auto job = fedtrace::cli::JobSpec::from_json(raw);
    if (out_path.empty()) out_path = job.output;
    report = fedtrace::cli::run(job);
  } catch (const Json::parse_error& e) {
    report = fedtrace::cli::schema_failure(nullptr, std::string("job: invalid JSON: ") + e.what());
  } catch (const fedtrace::cli::SchemaError& e) {
    report = fedtrace::cli::schema_failure(raw, e.what());
  }

  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << text;
  }
  return fedtrace::cli::report_passed(report) ? 0 : 1;
}
