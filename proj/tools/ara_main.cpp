#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ara/generators.hpp"
#include "ara/json_io.hpp"
#include "ara/report.hpp"

namespace {

constexpr int kParseExit = 2;
constexpr int kSolverExit = 3;

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    ara::write_text_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate solver for zero-sum security games on adversarial randomized allocations"};
  app.require_subcommand(1);

  std::string out;
  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("generate", "Write a random FAMS or TSG instance");
  std::string family = "fams";
  ara::FamsGenConfig fams_cfg;
  ara::TsgGenConfig tsg_cfg;
  std::size_t flights = 0;
  gen->add_option("--family", family, "fams or tsg")->check(CLI::IsMember({"fams", "tsg"}));
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_option("--flights", flights, "Number of flights");
  gen->add_option("--schedules", fams_cfg.schedules, "FAMS schedules");
  gen->add_option("--marshals", fams_cfg.marshals, "FAMS marshals");
  gen->add_option("--tps", fams_cfg.targets_per_schedule, "FAMS flights per schedule");
  gen->add_option("--risks", tsg_cfg.risk_levels, "TSG risk levels");
  gen->add_option("--resources", tsg_cfg.resource_types, "TSG resource types");
  gen->add_option("--teams", tsg_cfg.team_types, "TSG team types");
  gen->add_option("--min-passengers", tsg_cfg.min_passengers, "TSG passengers per category, lower end");
  gen->add_option("--max-passengers", tsg_cfg.max_passengers, "TSG passengers per category, upper end");
  gen->add_option("--out", out, "Output path (stdout when omitted)");

  auto* solve = app.add_subcommand("solve", "Solve an instance and write a JSON report");
  std::string instance;
  std::string method = "rand";
  ara::SolveOptions sopt;
  solve->add_option("instance", instance, "Instance JSON (ARA, FAMS or TSG)")->required();
  solve->add_option("--method", method, "rand, exact, cg or marginal-bound");
  solve->add_option("--seed", seed, "Sampling seed");
  solve->add_option("--samples", sopt.samples, "Pure strategies drawn by rand");
  solve->add_option("--cutoff-s", sopt.cutoff_s, "Wall-clock cutoff in seconds");
  solve->add_option("--out", out, "Report path (stdout when omitted)");

  auto* bench = app.add_subcommand("bench", "Run a benchmark sweep and write CSV");
  std::string config;
  bench->add_option("config", config, "Bench config JSON")->required();
  bench->add_option("--out", out, "CSV path (stdout when omitted)");

  auto* impl = app.add_subcommand("check-impl", "Test whether the constraints are bi-hierarchical");
  impl->add_option("instance", instance, "Instance JSON")->required();
  impl->add_option("--out", out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseExit;
  }

  try {
    if (*gen) {
      if (family == "fams") {
        fams_cfg.seed = seed;
        if (flights) fams_cfg.flights = flights;
        emit(ara::fams_to_json(ara::gen_fams(fams_cfg)).dump(2) + "\n", out);
      } else {
        tsg_cfg.seed = seed;
        if (flights) tsg_cfg.flights = flights;
        emit(ara::tsg_to_json(ara::gen_tsg(tsg_cfg)).dump(2) + "\n", out);
      }
    } else if (*solve) {
      sopt.method = ara::parse_method(method);
      sopt.seed = seed;
      ara::cli_solve(instance, sopt, out);
    } else if (*bench) {
      ara::cli_bench(config, out);
    } else if (*impl) {
      const ara::LoadedInstance inst = ara::load_instance(ara::read_json_file(instance));
      const ara::ImplementabilityResult res = ara::check_implementability(*inst.game);
      ara::Json j;
      j["bi_hierarchical"] = res.bi_hierarchical;
      if (res.bi_hierarchical)
        j["partition"] = res.partition;
      else
        j["odd_cycle"] = res.odd_cycle;
      emit(j.dump(2) + "\n", out);
    }
  } catch (const ara::ParseError& e) {
    std::cerr << "ara: " << e.what() << "\n";
    return kParseExit;
  } catch (const std::exception& e) {
    std::cerr << "ara: " << e.what() << "\n";
    return kSolverExit;
  }
  return 0;
}
