#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "ara/generators.hpp"
#include "ara/report.hpp"

namespace ara {

std::size_t worker_threads() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ARA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
  }
  return hw;
}

BenchConfig bench_config_from_json(const Json& j) {
  auto fail = [](const std::string& what) -> void { throw ParseError("bench config: " + what); };
  if (!j.is_object()) fail("expected an object");
  BenchConfig cfg;
  try {
    const std::string family = j.at("family").get<std::string>();
    if (family == "fams")
      cfg.family = Domain::fams;
    else if (family == "tsg")
      cfg.family = Domain::tsg;
    else
      fail("family must be 'fams' or 'tsg'");
    cfg.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::size_t>();
    if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    if (j.contains("samples")) cfg.samples = j.at("samples").get<std::size_t>();
    if (j.contains("cutoff_s")) cfg.cutoff_s = j.at("cutoff_s").get<double>();
    if (j.contains("params"))
      for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
        cfg.params[it.key()] = it.value().get<double>();
  } catch (const Json::exception& e) {
    fail(e.what());
  }
  if (cfg.methods.empty()) fail("'methods' must name at least one method");
  if (cfg.sizes.empty()) fail("'sizes' must list at least one size");
  if (cfg.seeds == 0) fail("'seeds' must be at least 1");
  return cfg;
}

namespace {

std::size_t param(const BenchConfig& cfg, const char* key, std::size_t fallback) {
  auto it = cfg.params.find(key);
  return it == cfg.params.end() ? fallback : static_cast<std::size_t>(std::llround(it->second));
}

double param_d(const BenchConfig& cfg, const char* key, double fallback) {
  auto it = cfg.params.find(key);
  return it == cfg.params.end() ? fallback : it->second;
}

LoadedInstance make_instance(const BenchConfig& cfg, std::size_t size, std::uint64_t seed) {
  if (cfg.family == Domain::fams) {
    FamsGenConfig g;
    g.seed = seed;
    g.flights = size;
    g.marshals = param(cfg, "marshals", g.marshals);
    g.targets_per_schedule = param(cfg, "targets_per_schedule", g.targets_per_schedule);
    if (cfg.params.count("schedules_per_flight"))
      g.schedules = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.params.at("schedules_per_flight") *
                                                                                   static_cast<double>(size))));
    else
      g.schedules = param(cfg, "schedules", g.schedules);
    return load_instance(gen_fams(g));
  }
  TsgGenConfig g;
  g.seed = seed;
  g.flights = size;
  g.risk_levels = param(cfg, "risk_levels", g.risk_levels);
  g.resource_types = param(cfg, "resource_types", g.resource_types);
  g.team_types = param(cfg, "team_types", g.team_types);
  g.min_passengers = static_cast<std::int64_t>(param(cfg, "min_passengers", static_cast<std::size_t>(g.min_passengers)));
  g.max_passengers = static_cast<std::int64_t>(param(cfg, "max_passengers", static_cast<std::size_t>(g.max_passengers)));
  g.max_base_capacity =
      static_cast<std::int64_t>(param(cfg, "max_base_capacity", static_cast<std::size_t>(g.max_base_capacity)));
  g.load = param_d(cfg, "load", g.load);
  return load_instance(gen_tsg(g));
}

struct Task {
  std::size_t size;
  std::uint64_t seed;
};

std::vector<BenchRow> run_task(const BenchConfig& cfg, const Task& task) {
  const std::string family = to_string(cfg.family);
  std::vector<BenchRow> rows;
  std::optional<LoadedInstance> inst;
  std::string gen_error;
  try {
    inst = make_instance(cfg, task.size, task.seed);
  } catch (const std::exception& e) {
    gen_error = e.what();
  }
  for (Method m : cfg.methods) {
    BenchRow row{family, task.size, task.seed, {}};
    row.report.method = to_string(m);
    row.report.domain = family;
    row.report.seed = task.seed;
    if (!inst) {
      row.report.status = "failed";
      row.report.error = gen_error;
      rows.push_back(std::move(row));
      continue;
    }
    SolveOptions opt;
    opt.method = m;
    opt.seed = task.seed;
    opt.samples = cfg.samples;
    opt.cutoff_s = cfg.cutoff_s;
    try {
      row.report = solve_instance(*inst, opt);
      report_to_json(row.report);  // enforces value <= upper_bound
    } catch (const TimeoutError& e) {
      row.report.status = "timeout";
      row.report.error = e.what();
    } catch (const std::exception& e) {
      row.report.status = "failed";
      row.report.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  // Loss against the first exact method that finished.
  std::optional<double> exact;
  for (const BenchRow& r : rows)
    if (!exact && r.report.status == "ok" && (r.report.method == "exact" || r.report.method == "cg"))
      exact = r.report.value;
  if (exact)
    for (BenchRow& r : rows)
      if (r.report.status == "ok") set_loss(r.report, *exact);
  return rows;
}

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  std::vector<Task> tasks;
  for (std::size_t size : cfg.sizes)
    for (std::size_t s = 0; s < cfg.seeds; ++s) tasks.push_back({size, cfg.base_seed + s});

  std::vector<std::vector<BenchRow>> per_task(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) per_task[t] = run_task(cfg, tasks[t]);
  };
  const std::size_t threads = std::min(worker_threads(), tasks.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  BenchResult out;
  for (auto& rows : per_task)
    for (auto& r : rows) out.rows.push_back(std::move(r));

  for (std::size_t size : cfg.sizes)
    for (Method m : cfg.methods) {
      BenchAggregate a;
      a.family = to_string(cfg.family);
      a.size = size;
      a.method = to_string(m);
      double loss = 0.0;
      std::size_t loss_n = 0;
      for (const BenchRow& r : out.rows) {
        if (r.size != size || r.report.method != a.method) continue;
        ++a.total;
        a.sample_failures += r.report.sample_failures;
        if (r.report.status != "ok") continue;
        ++a.ok;
        a.mean_value += r.report.value;
        a.mean_upper_bound += r.report.upper_bound;
        a.mean_wall_ms += static_cast<double>(r.report.wall_ms);
        if (r.report.loss_pct) {
          loss += *r.report.loss_pct;
          ++loss_n;
        }
      }
      if (a.ok) {
        a.mean_value /= static_cast<double>(a.ok);
        a.mean_upper_bound /= static_cast<double>(a.ok);
        a.mean_wall_ms /= static_cast<double>(a.ok);
      }
      if (loss_n) a.mean_loss_pct = loss / static_cast<double>(loss_n);
      out.aggregates.push_back(a);
    }
  return out;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream os;
  os << "family,size,seed,method,value,upper_bound,loss_pct,wall_ms,sample_failures,status\n";
  for (const BenchRow& r : result.rows) {
    const bool ok = r.report.status == "ok";
    os << r.family << ',' << r.size << ',' << r.seed << ',' << r.report.method << ','
       << (ok ? num(r.report.value) : "") << ',' << (ok ? num(r.report.upper_bound) : "") << ','
       << (r.report.loss_pct ? num(*r.report.loss_pct) : "") << ',' << r.report.wall_ms << ','
       << r.report.sample_failures << ',' << r.report.status << '\n';
  }
  for (const BenchAggregate& a : result.aggregates) {
    os << a.family << ',' << a.size << ",mean," << a.method << ',' << (a.ok ? num(a.mean_value) : "") << ','
       << (a.ok ? num(a.mean_upper_bound) : "") << ',' << (a.mean_loss_pct ? num(*a.mean_loss_pct) : "") << ','
       << (a.ok ? num(a.mean_wall_ms) : "") << ',' << a.sample_failures << ",aggregate " << a.ok << '/' << a.total
       << '\n';
  }
  return os.str();
}

BenchResult cli_bench(const std::string& config_path, const std::string& out_csv) {
  const BenchConfig cfg = bench_config_from_json(read_json_file(config_path));
  BenchResult result = run_bench(cfg);
  const std::string csv = bench_csv(result);
  if (out_csv.empty() || out_csv == "-")
    std::cout << csv;
  else
    write_text_file(out_csv, csv);
  return result;
}

}  // namespace ara
