#include "ara/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "ara/exact.hpp"
#include "ara/marginal.hpp"
#include "ara/sampler.hpp"

namespace ara {

const char* to_string(Method m) {
  switch (m) {
    case Method::rand: return "rand";
    case Method::exact: return "exact";
    case Method::cg: return "cg";
    case Method::marginal_bound: return "marginal-bound";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "rand") return Method::rand;
  if (name == "exact") return Method::exact;
  if (name == "cg") return Method::cg;
  if (name == "marginal-bound" || name == "marginal") return Method::marginal_bound;
  throw ParseError("unknown method '" + name + "' (expected rand, exact, cg or marginal-bound)");
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

template <typename F>
auto as_parse_error(F&& f) {
  try {
    return f();
  } catch (const InvalidGameError& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  } catch (const StructuralError& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
}

}  // namespace

LoadedInstance load_instance(const FamsInstance& inst) {
  LoadedInstance out;
  out.domain = Domain::fams;
  out.game = std::make_shared<const AraGame>(as_parse_error([&] { return encode_fams(inst); }));
  out.fams = inst;
  out.metadata = inst.metadata;
  out.digest = fnv1a64_hex(fams_to_json(inst).dump());
  return out;
}

LoadedInstance load_instance(const TsgInstance& inst) {
  LoadedInstance out;
  out.domain = Domain::tsg;
  out.game = std::make_shared<const AraGame>(as_parse_error([&] { return encode_tsg(inst); }));
  out.tsg = inst;
  out.metadata = inst.metadata;
  out.digest = fnv1a64_hex(tsg_to_json(inst).dump());
  return out;
}

LoadedInstance load_instance(const Json& j) {
  switch (detect_domain(j)) {
    case Domain::fams: return load_instance(fams_from_json(j));
    case Domain::tsg: return load_instance(tsg_from_json(j));
    case Domain::ara: break;
  }
  LoadedInstance out;
  out.domain = Domain::ara;
  out.game = std::make_shared<const AraGame>(as_parse_error([&] { return game_from_json(j); }));
  out.digest = fnv1a64_hex(game_to_json(*out.game).dump());
  return out;
}

void set_loss(SolveReport& report, double exact) {
  if (exact == 0.0) {
    report.loss_pct = report.value == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    return;
  }
  report.loss_pct = 100.0 * (exact - report.value) / std::abs(exact);
}

namespace {

template <typename T>
void fill_coverages(SolveReport& r, const AraGame& game, const Matrix<T>& x) {
  for (std::size_t t = 0; t < game.targets().size(); ++t)
    r.coverages.emplace_back(game.targets()[t].id, reported_coverage(coverage(game, x, t)));
}

void solve_rand(const LoadedInstance& inst, const SolveOptions& opt, const MarginalSolution& ms,
                const Deadline& deadline, SolveReport& r) {
  const AraGame& game = *inst.game;
  const Pe0Form pe0 = as_parse_error([&] { return to_pe0(game); });
  const FamsFixer fams_fixer;
  const TsgFixer tsg_fixer;
  const DomainFixer& fixer = inst.domain == Domain::fams || (inst.domain == Domain::ara && pe0.has_slack())
                                 ? static_cast<const DomainFixer&>(fams_fixer)
                                 : static_cast<const DomainFixer&>(tsg_fixer);
  if (opt.samples == 0) throw Error("rand needs at least one sample");
  Rng rng(opt.seed);
  PureSampler sampler(ms, pe0, fixer, opt.retry_cap);
  MixedStrategyEstimate est;
  est.samples.reserve(opt.samples);
  std::optional<double> min_sample_ratio;
  for (std::size_t m = 0; m < opt.samples; ++m) {
    if ((m & 15) == 0) deadline.check("rand sampling");
    est.samples.push_back(sampler.draw(rng, &r.sample_failures));
    if (inst.domain == Domain::tsg) {
      const double ratio = detection_ratio(game, ms.x_m.values, est.samples.back().values).min;
      min_sample_ratio = min_sample_ratio ? std::min(*min_sample_ratio, ratio) : ratio;
    }
  }
  est.mean = average(est.samples);
  r.value = game_value(game, est.mean);
  r.samples = opt.samples;
  fill_coverages(r, game, est.mean);
  if (inst.domain == Domain::tsg) {
    const double ratio = detection_ratio(game, ms.x_m.values, est.mean).min;
    r.detection_ratio = ratio;
    r.min_sample_detection_ratio = min_sample_ratio;
    r.c_measured = c_measured(ratio);
  }
}

}  // namespace

SolveReport solve_instance(const LoadedInstance& inst, const SolveOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const Deadline deadline(opt.cutoff_s);
  const AraGame& game = *inst.game;
  SolveReport r;
  r.method = to_string(opt.method);
  r.domain = to_string(inst.domain);
  r.seed = opt.seed;
  r.instance_digest = inst.digest;
  r.generator = inst.metadata;

  const MarginalSolution ms = solve_marginal(game);
  r.upper_bound = ms.upper_bound;

  switch (opt.method) {
    case Method::marginal_bound:
      r.value = ms.upper_bound;
      fill_coverages(r, game, ms.x_m.values);
      break;
    case Method::rand:
      solve_rand(inst, opt, ms, deadline, r);
      break;
    case Method::exact: {
      const EnumeratedStrategySet set = enumerate_pure(game, opt.enumeration_cap, deadline);
      if (set.truncated)
        throw CapExceededError("pure strategy enumeration passed " + std::to_string(opt.enumeration_cap) +
                               " strategies; the exact value cannot be certified");
      const ExactSolution ex = exact_maximin(game, set);
      r.value = ex.value;
      Matrix<double> mix(game.k(), game.n());
      for (std::size_t m = 0; m < set.strategies.size(); ++m) {
        auto src = set.strategies[m].values.flat();
        auto dst = mix.flat();
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += ex.weights[m] * src[c];
      }
      fill_coverages(r, game, mix);
      break;
    }
    case Method::cg: {
      if (inst.domain != Domain::fams) throw ParseError("method 'cg' applies to FAMS instances only");
      FamsCgOptions cg;
      cg.node_cap = opt.node_cap;
      cg.deadline = deadline;
      const ColumnGenerationResult res = fams_column_generation(*inst.fams, cg);
      if (!res.converged) throw NumericalError("column generation stopped before convergence");
      r.value = res.value;
      r.iterations = res.iterations;
      Matrix<double> mix(game.k(), game.n());
      for (std::size_t m = 0; m < res.columns.size(); ++m) {
        auto src = res.columns[m].values.flat();
        auto dst = mix.flat();
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += res.weights[m] * src[c];
      }
      fill_coverages(r, game, mix);
      break;
    }
  }
  r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json report_to_json(const SolveReport& r) {
  if (r.status == "ok" && r.value > r.upper_bound + 1e-6)
    throw NumericalError("report value " + std::to_string(r.value) + " exceeds upper bound " +
                         std::to_string(r.upper_bound));
  Json j;
  j["method"] = r.method;
  j["domain"] = r.domain;
  j["status"] = r.status;
  if (!r.error.empty()) j["error"] = r.error;
  j["value"] = r.value;
  j["upper_bound"] = r.upper_bound;
  j["loss_pct"] = r.loss_pct ? Json(*r.loss_pct) : Json(nullptr);
  j["wall_ms"] = r.wall_ms;
  j["seed"] = r.seed;
  j["instance_digest"] = r.instance_digest;
  j["samples"] = r.samples;
  j["sample_failures"] = r.sample_failures;
  if (r.detection_ratio) {
    j["detection_ratio"] = *r.detection_ratio;
    j["min_sample_detection_ratio"] = r.min_sample_detection_ratio ? Json(*r.min_sample_detection_ratio) : Json(nullptr);
    j["c_measured"] = number_or_null(r.c_measured.value_or(0.0));
  }
  if (r.iterations) j["iterations"] = r.iterations;
  Json cov = Json::object();
  for (const auto& [id, c] : r.coverages) cov[id] = c;
  j["coverages"] = cov;
  if (!r.generator.empty()) {
    Json g = Json::object();
    for (const auto& [k, v] : r.generator) g[k] = v;
    j["generator"] = g;
  }
  return j;
}

SolveReport cli_solve(const std::string& instance_path, const SolveOptions& options, const std::string& out_path) {
  const LoadedInstance inst = load_instance(read_json_file(instance_path));
  SolveReport r = solve_instance(inst, options);
  const std::string text = report_to_json(r).dump(2) + "\n";
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_text_file(out_path, text);
  return r;
}

}  // namespace ara
