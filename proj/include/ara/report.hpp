#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ara/json_io.hpp"

namespace ara {

enum class Method { rand, exact, cg, marginal_bound };

const char* to_string(Method m);
// Throws ParseError on an unknown name.
Method parse_method(const std::string& name);

struct SolveOptions {
  Method method = Method::rand;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  double cutoff_s = 600.0;
  std::size_t retry_cap = kDefaultRetryCap;
  std::size_t enumeration_cap = 1'000'000;
  std::size_t node_cap = 10'000'000;
};

// A parsed instance together with its ARA encoding.
struct LoadedInstance {
  Domain domain = Domain::ara;
  std::optional<FamsInstance> fams;
  std::optional<TsgInstance> tsg;
  std::shared_ptr<const AraGame> game;
  std::string digest;  // FNV-1a 64 of the canonical JSON, hex
  std::map<std::string, std::string> metadata;
};

// Invalid instances raise ParseError so the CLI reports them as input errors.
LoadedInstance load_instance(const Json& j);
LoadedInstance load_instance(const FamsInstance& inst);
LoadedInstance load_instance(const TsgInstance& inst);

std::string fnv1a64_hex(const std::string& bytes);

struct SolveReport {
  std::string method;
  std::string domain;
  std::string status = "ok";  // ok | failed | timeout
  std::string error;
  double value = 0.0;
  double upper_bound = 0.0;
  std::optional<double> loss_pct;
  std::int64_t wall_ms = 0;
  std::uint64_t seed = 0;
  std::string instance_digest;
  std::size_t samples = 0;
  std::size_t sample_failures = 0;
  // TSG: min over categories of coverage(estimate) / coverage(marginal), and
  // the smallest such ratio seen on any single sample.
  std::optional<double> detection_ratio;
  std::optional<double> min_sample_detection_ratio;
  std::optional<double> c_measured;
  std::vector<std::pair<std::string, double>> coverages;  // reported (clamped) per target
  std::size_t iterations = 0;                               // cg rounds
  std::map<std::string, std::string> generator;
};

// Runs one method. Solver errors propagate; TimeoutError when the cutoff is hit.
SolveReport solve_instance(const LoadedInstance& inst, const SolveOptions& options);

// Sets loss_pct = 100 (exact - value) / |exact|.
void set_loss(SolveReport& report, double exact);

// Throws NumericalError when value > upper_bound + 1e-6.
Json report_to_json(const SolveReport& report);

// Reads the instance, solves, writes the JSON report to out_path ("-" or
// empty for stdout) and returns it.
SolveReport cli_solve(const std::string& instance_path, const SolveOptions& options, const std::string& out_path);

struct BenchConfig {
  Domain family = Domain::fams;
  std::vector<std::size_t> sizes;  // flights
  std::size_t seeds = 30;
  std::uint64_t base_seed = 1;
  std::vector<Method> methods;
  std::size_t samples = 1000;
  double cutoff_s = 600.0;
  std::map<std::string, double> params;
};

BenchConfig bench_config_from_json(const Json& j);

struct BenchRow {
  std::string family;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  SolveReport report;
};

struct BenchAggregate {
  std::string family;
  std::size_t size = 0;
  std::string method;
  std::size_t ok = 0;
  std::size_t total = 0;
  double mean_value = 0.0;
  double mean_upper_bound = 0.0;
  std::optional<double> mean_loss_pct;
  double mean_wall_ms = 0.0;
  std::size_t sample_failures = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;  // ordered by size, seed, method
  std::vector<BenchAggregate> aggregates;
};

// Worker count from ARA_THREADS, else the hardware concurrency.
std::size_t worker_threads();

BenchResult run_bench(const BenchConfig& cfg);
std::string bench_csv(const BenchResult& result);

BenchResult cli_bench(const std::string& config_path, const std::string& out_csv);

}  // namespace ara
