#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "ara/json_io.hpp"
#include "ara/report.hpp"
#include "fixtures.hpp"

using namespace ara;

TEST_CASE("FAMS JSON round trip") {
  FamsInstance inst = fixtures::fams_toy();
  inst.forbidden = {{0, 1}};
  const Json j = fams_to_json(inst);
  CHECK(detect_domain(j) == Domain::fams);
  const FamsInstance back = fams_from_json(j);
  CHECK(fams_to_json(back) == j);
  CHECK(back.forbidden.size() == 1);
}

TEST_CASE("TSG JSON round trip") {
  const Json j = tsg_to_json(fixtures::tsg_crossing());
  CHECK(detect_domain(j) == Domain::tsg);
  CHECK(tsg_to_json(tsg_from_json(j)) == j);
}

TEST_CASE("ARA game JSON round trip") {
  const AraGame g = encode_tsg(fixtures::tsg_toy());
  const Json j = game_to_json(g);
  CHECK(detect_domain(j) == Domain::ara);
  const AraGame back = game_from_json(j);
  CHECK(game_to_json(back) == j);
  CHECK(back.constraints().size() == g.constraints().size());
}

TEST_CASE("parse errors name the field") {
  Json j = game_to_json(encode_tsg(fixtures::tsg_toy()));
  j["targets"][2]["u_def"] = "high";
  try {
    game_from_json(j);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("targets[2].u_def") != std::string::npos);
  }
  Json f = fams_to_json(fixtures::fams_toy());
  f.erase("marshals");
  f["marshals"] = -1;
  CHECK_THROWS_AS(fams_from_json(f), ParseError);
  try {
    parse_json("{\n  \"k\": 1,,\n}", "game.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("game.json:2") != std::string::npos);
  }
}

TEST_CASE("invalid instances load as parse errors") {
  TsgInstance inst = fixtures::tsg_toy();
  inst.risks[0].probability = 0.9;
  CHECK_THROWS_AS(load_instance(tsg_to_json(inst)), ParseError);
}

TEST_CASE("FNV-1a digests") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  const LoadedInstance a = load_instance(fixtures::tsg_toy());
  const LoadedInstance b = load_instance(tsg_to_json(fixtures::tsg_toy()));
  CHECK(a.digest == b.digest);
  CHECK(a.digest != load_instance(fixtures::tsg_crossing()).digest);
}

TEST_CASE("method names") {
  CHECK(parse_method("marginal-bound") == Method::marginal_bound);
  CHECK(std::string(to_string(Method::cg)) == "cg");
  CHECK_THROWS_AS(parse_method("simplex"), ParseError);
}

TEST_CASE("reports are reproducible apart from timing") {
  const LoadedInstance inst = load_instance(fixtures::fams_toy());
  SolveOptions o;
  o.seed = 9;
  o.samples = 200;
  Json a = report_to_json(solve_instance(inst, o));
  Json b = report_to_json(solve_instance(inst, o));
  a.erase("wall_ms");
  b.erase("wall_ms");
  CHECK(a == b);
  CHECK(a["value"].get<double>() <= a["upper_bound"].get<double>() + 1e-6);
  o.seed = 10;
  Json c = report_to_json(solve_instance(inst, o));
  c.erase("wall_ms");
  CHECK(c["instance_digest"] == a["instance_digest"]);
}

TEST_CASE("each method reports against the bound") {
  const LoadedInstance inst = load_instance(fixtures::fams_toy());
  SolveOptions o;
  o.samples = 100;
  double exact = 0.0;
  for (Method m : {Method::exact, Method::cg, Method::marginal_bound, Method::rand}) {
    o.method = m;
    const SolveReport r = solve_instance(inst, o);
    CHECK(r.status == "ok");
    CHECK(r.value <= r.upper_bound + 1e-6);
    if (m == Method::exact) exact = r.value;
    if (m == Method::cg) CHECK(r.value == doctest::Approx(exact).epsilon(1e-6));
  }
  o.method = Method::cg;
  CHECK_THROWS_AS(solve_instance(load_instance(fixtures::tsg_toy()), o), ParseError);
}

TEST_CASE("TSG reports carry the detection ratio") {
  SolveOptions o;
  o.samples = 100;
  const Json j = report_to_json(solve_instance(load_instance(fixtures::tsg_crossing()), o));
  REQUIRE(j.contains("detection_ratio"));
  CHECK(j["detection_ratio"].get<double>() > 0.0);
  CHECK(j["detection_ratio"].get<double>() <= 1.0 + 1e-9);
  CHECK(j.contains("c_measured"));
}

TEST_CASE("value above the bound is refused") {
  SolveReport r;
  r.value = 1.0;
  r.upper_bound = 0.5;
  CHECK_THROWS_AS(report_to_json(r), NumericalError);
  r.status = "failed";
  CHECK_NOTHROW(report_to_json(r));
}

TEST_CASE("loss percentage") {
  SolveReport r;
  r.value = -5.5;
  set_loss(r, -5.0);
  REQUIRE(r.loss_pct);
  CHECK(*r.loss_pct == doctest::Approx(10.0));
}

TEST_CASE("bench config parsing") {
  const Json good = parse_json(R"({"family":"fams","sizes":[6],"seeds":2,"methods":["rand","cg"],
                                   "samples":50,"params":{"marshals":2,"schedules":6,"targets_per_schedule":2}})");
  const BenchConfig cfg = bench_config_from_json(good);
  CHECK(cfg.methods.size() == 2);
  CHECK(cfg.params.at("marshals") == 2.0);

  Json bad = good;
  bad["methods"] = Json::array();
  CHECK_THROWS_AS(bench_config_from_json(bad), ParseError);
  bad = good;
  bad["family"] = "chess";
  CHECK_THROWS_AS(bench_config_from_json(bad), ParseError);
  bad = good;
  bad.erase("sizes");
  CHECK_THROWS_AS(bench_config_from_json(bad), ParseError);
}

TEST_CASE("bench output is stable across runs") {
  const BenchConfig cfg = bench_config_from_json(parse_json(
      R"({"family":"fams","sizes":[6,8],"seeds":3,"methods":["rand","exact"],"samples":50,
          "params":{"marshals":2,"schedules":6,"targets_per_schedule":2}})"));
  const BenchResult a = run_bench(cfg);
  const BenchResult b = run_bench(cfg);
  REQUIRE(a.rows.size() == 2 * 3 * 2);
  CHECK(a.aggregates.size() == 4);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].size == b.rows[i].size);
    CHECK(a.rows[i].seed == b.rows[i].seed);
    CHECK(a.rows[i].report.method == b.rows[i].report.method);
    CHECK(a.rows[i].report.value == b.rows[i].report.value);
    CHECK(a.rows[i].report.status == "ok");
  }
  const std::string csv = bench_csv(a);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("family,size,seed,method,value,upper_bound,loss_pct,wall_ms,sample_failures", 0) == 0);
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == a.rows.size() + a.aggregates.size());
  CHECK(csv.find(",mean,rand,") != std::string::npos);
}

TEST_CASE("worker count honours ARA_THREADS") {
  setenv("ARA_THREADS", "1", 1);
  CHECK(worker_threads() == 1);
  setenv("ARA_THREADS", "junk", 1);
  CHECK(worker_threads() >= 1);
  unsetenv("ARA_THREADS");
}
