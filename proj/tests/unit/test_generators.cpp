#include <doctest.h>

#include <set>

#include "ara/generators.hpp"
#include "ara/marginal.hpp"
#include "ara/sampler.hpp"

using namespace ara;

namespace {

FamsGenConfig small_fams(std::uint64_t seed) {
  FamsGenConfig c;
  c.seed = seed;
  c.flights = 5;
  c.schedules = 4;
  c.marshals = 2;
  c.targets_per_schedule = 2;
  return c;
}

}  // namespace

TEST_CASE("FAMS generator is deterministic per seed") {
  const FamsInstance a = gen_fams(small_fams(7));
  const FamsInstance b = gen_fams(small_fams(7));
  const FamsInstance c = gen_fams(small_fams(8));
  REQUIRE(a.schedules.size() == 4);
  bool same = true, differs = false;
  for (std::size_t s = 0; s < 4; ++s) {
    same = same && a.schedules[s].flights == b.schedules[s].flights;
    differs = differs || a.schedules[s].flights != c.schedules[s].flights;
  }
  for (std::size_t f = 0; f < 5; ++f) {
    same = same && a.flights[f].u_undef == b.flights[f].u_undef;
    differs = differs || a.flights[f].u_undef != c.flights[f].u_undef;
  }
  CHECK(same);
  CHECK(differs);
  CHECK(a.metadata.at("seed") == "7");
}

TEST_CASE("FAMS generator ranges") {
  FamsGenConfig cfg;
  cfg.seed = 3;
  const FamsInstance inst = gen_fams(cfg);
  CHECK(inst.flights.size() == 50);
  CHECK(inst.schedules.size() == 100);
  CHECK(inst.marshals == 10);
  for (const auto& f : inst.flights) {
    CHECK(f.u_def == -1.0);
    CHECK(f.u_undef >= -10.0);
    CHECK(f.u_undef <= -2.0);
    CHECK(f.u_undef == static_cast<double>(static_cast<int>(f.u_undef)));
  }
  for (const auto& s : inst.schedules) {
    CHECK(s.flights.size() == 5);
    CHECK(std::set<std::string>(s.flights.begin(), s.flights.end()).size() == 5);
  }
  CHECK_NOTHROW(inst.validate());
}

TEST_CASE("FAMS generator rejects impossible sizes") {
  FamsGenConfig cfg = small_fams(1);
  cfg.targets_per_schedule = 6;
  CHECK_THROWS_AS(gen_fams(cfg), InvalidGameError);
  cfg = small_fams(1);
  cfg.marshals = 0;
  CHECK_THROWS_AS(gen_fams(cfg), InvalidGameError);
}

TEST_CASE("TSG generator keeps passengers within the load factor") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TsgGenConfig cfg;
    cfg.seed = seed;
    const TsgInstance inst = gen_tsg(cfg);
    std::int64_t total = 0;
    for (const auto& c : inst.categories) {
      total += c.passengers;
      CHECK(c.passengers >= cfg.min_passengers);
      CHECK(c.passengers <= cfg.max_passengers);
      CHECK(c.u_def >= c.u_undef);
    }
    CHECK(static_cast<double>(total) <= cfg.load * tsg_screening_capacity(inst) + 1e-6);
    for (const auto& t : inst.teams) {
      CHECK_FALSE(t.members.empty());
      CHECK(t.effectiveness >= cfg.min_effectiveness);
      CHECK(t.effectiveness <= cfg.max_effectiveness);
    }
    double p = 0.0;
    for (std::size_t r = 0; r < inst.risks.size(); ++r) {
      p += inst.risks[r].probability;
      if (r > 0) CHECK(inst.risks[r].probability < inst.risks[r - 1].probability);
    }
    CHECK(p == doctest::Approx(1.0));
  }
}

TEST_CASE("screening capacity of simple instances") {
  TsgInstance inst;
  inst.resources = {{"A", 4}, {"B", 6}};
  inst.teams = {{"TA", {"A"}, 0.5}, {"TAB", {"A", "B"}, 0.5}};
  CHECK(tsg_screening_capacity(inst) == doctest::Approx(4.0));
  inst.teams.push_back({"TB", {"B", "B"}, 0.5});
  // TA + TAB <= 4, TAB + 2 TB <= 6: best is TA = 4, TB = 3.
  CHECK(tsg_screening_capacity(inst) == doctest::Approx(7.0));
}

TEST_CASE("desk-scale TSG instance solves and samples") {
  TsgGenConfig cfg;
  cfg.seed = 11;
  const TsgInstance inst = gen_tsg(cfg);
  CHECK(inst.categories.size() == 36);
  CHECK(inst.teams.size() == 20);
  const AraGame g = encode_tsg(inst);
  const MarginalSolution ms = solve_marginal(g);
  const Pe0Form pe0 = to_pe0(g);
  Rng rng(5);
  const MixedEstimate est = estimate_mixed(ms, pe0, TsgFixer{}, rng, 50);
  CHECK(est.value <= ms.upper_bound + 1e-6);
  for (const auto& p : est.estimate.samples) CHECK(is_valid_pure(g, p).valid);
}

TEST_CASE("TSG generator rejects bad configurations") {
  TsgGenConfig cfg;
  cfg.load = 0.0;
  CHECK_THROWS_AS(gen_tsg(cfg), InvalidGameError);
  cfg = {};
  cfg.max_passengers = 1;
  CHECK_THROWS_AS(gen_tsg(cfg), InvalidGameError);
  cfg = {};
  cfg.team_types = 0;
  CHECK_THROWS_AS(gen_tsg(cfg), InvalidGameError);
}
