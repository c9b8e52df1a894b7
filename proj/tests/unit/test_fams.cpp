#include <doctest.h>

#include <algorithm>

#include "ara/exact.hpp"
#include "ara/fams.hpp"
#include "ara/generators.hpp"
#include "ara/marginal.hpp"
#include "fixtures.hpp"

using namespace ara;

TEST_CASE("encoding of the three-marshal toy") {
  const AraGame g = encode_fams(fixtures::fams_toy());
  CHECK(g.k() == 3);
  CHECK(g.n() == 3);
  CHECK(g.constraints().size() == 5);  // 3 rows + 2 flights
  CHECK(g.targets().size() == 2);
  CHECK(g.targets()[0].cells.size() == 6);  // F1 in S1, S2 for each marshal
  for (std::size_t i = 0; i < 3; ++i) CHECK(g.constraints()[i].upper == 1);
}

TEST_CASE("forbidden pairs and flights in no schedule") {
  FamsInstance inst = fixtures::fams_toy();
  inst.flights.push_back({"F3", -1.0, -7.0});
  inst.forbidden = {{0, 1}};
  const AraGame g = encode_fams(inst);
  CHECK(g.constraints().size() == 6);  // 3 rows, 1 forbidden, 2 flights
  CHECK(g.constraints()[3].upper == 0);
  CHECK(g.targets()[2].cells.empty());
  CHECK(coverage(g, Matrix<double>(3, 3, 1.0), "F3") == 0.0);
}

TEST_CASE("single marshal on a singleton schedule covers its flight fully or not at all") {
  FamsInstance inst;
  inst.marshals = 1;
  inst.flights = {{"F", -1, -4}};
  inst.schedules = {{"S", {"F"}}};
  const AraGame g = encode_fams(inst);
  const auto set = enumerate_pure(g);
  CHECK(set.strategies.size() == 2);
  for (const auto& p : set.strategies) {
    const double c = coverage(g, p.values, "F");
    CHECK((c == 0.0 || c == 1.0));
  }
}

TEST_CASE("invalid FAMS instances are rejected") {
  FamsInstance inst = fixtures::fams_toy();
  inst.schedules[0].flights.clear();
  CHECK_THROWS_AS(encode_fams(inst), InvalidGameError);
  inst = fixtures::fams_toy();
  inst.flights[0].u_def = -10;
  CHECK_THROWS_AS(encode_fams(inst), InvalidGameError);
  inst = fixtures::fams_toy();
  inst.forbidden = {{3, 0}};
  CHECK_THROWS_AS(encode_fams(inst), InvalidGameError);
}

namespace {

IntMatrix fix(const FamsInstance& inst, const IntMatrix& x, std::uint64_t seed = 0) {
  const Pe0Form pe0 = to_pe0(encode_fams(inst));
  Rng rng(seed);
  return FamsFixer{}.fix_inequalities(x, pe0, rng);
}

}  // namespace

TEST_CASE("fixer leaves feasible allocations alone") {
  const IntMatrix x = fixtures::imatrix({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK(fix(fixtures::fams_toy(), x) == x);
}

TEST_CASE("two schedules on one flight: one is released") {
  FamsInstance inst;
  inst.marshals = 2;
  inst.flights = {{"F", -1, -5}};
  inst.schedules = {{"A", {"F"}}, {"B", {"F"}}};
  const IntMatrix out = fix(inst, fixtures::imatrix({{1, 0, 0}, {0, 1, 0}}));
  CHECK(out == fixtures::imatrix({{0, 0, 0}, {0, 1, 0}}));
}

TEST_CASE("schedule with more violated flights is released first") {
  // S0 = {F0, F1}, S1 = {F0}, S2 = {F1}, S3 = {F0}. With S0..S3 all staffed
  // F0 has 3 marshals and F1 has 2; S0 touches two violated flights.
  FamsInstance inst;
  inst.marshals = 4;
  inst.flights = {{"F0", -1, -5}, {"F1", -1, -5}};
  inst.schedules = {{"S0", {"F0", "F1"}}, {"S1", {"F0"}}, {"S2", {"F1"}}, {"S3", {"F0"}}};
  const IntMatrix x = fixtures::imatrix({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}});
  const IntMatrix out = fix(inst, x);
  CHECK(out(0, 0) == 0);  // S0 released first
  // Then F0 still has S1 and S3: lowest column S1 goes.
  CHECK(out == fixtures::imatrix({{0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}}));
}

TEST_CASE("fallback picks a schedule of the worst flight at random") {
  // Both schedules on the doubly staffed F0 also cover a satisfied flight.
  FamsInstance inst;
  inst.marshals = 2;
  inst.flights = {{"F0", -1, -5}, {"F1", -1, -5}, {"F2", -1, -5}};
  inst.schedules = {{"S0", {"F0", "F1"}}, {"S1", {"F0", "F2"}}};
  const IntMatrix x = fixtures::imatrix({{1, 0, 0}, {0, 1, 0}});
  bool saw[2] = {false, false};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const IntMatrix out = fix(inst, x, seed);
    const int left = out(0, 0) + out(1, 1);
    CHECK(left == 1);
    saw[out(0, 0) == 1 ? 1 : 0] = true;
  }
  CHECK(saw[0]);
  CHECK(saw[1]);
}

TEST_CASE("fixer never touches a schedule covering only satisfied flights") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    FamsGenConfig cfg;
    cfg.seed = 100 + trial;
    cfg.flights = 8;
    cfg.schedules = 10;
    cfg.marshals = 4;
    cfg.targets_per_schedule = 2;
    const FamsInstance inst = gen_fams(cfg);
    const AraGame g = encode_fams(inst);
    const Pe0Form pe0 = to_pe0(g);
    // Random assignment of marshals to schedules or slack.
    IntMatrix x(4, 11);
    for (std::uint32_t i = 0; i < 4; ++i) x(i, static_cast<std::size_t>(uniform_int(rng, 0, 10))) = 1;
    const IntMatrix out = FamsFixer{}.fix_inequalities(x, pe0, rng);
    const auto by_flight = inst.schedules_of_flight();
    for (std::size_t j = 0; j < 10; ++j) {
      bool only_ok = true;
      for (const auto& f : inst.schedules[j].flights) {
        std::int64_t load = 0;
        for (std::size_t s : by_flight[inst.flight_index(f)])
          for (std::size_t i = 0; i < 4; ++i) load += x(i, s);
        only_ok = only_ok && load <= 1;
      }
      if (only_ok)
        for (std::size_t i = 0; i < 4; ++i) CHECK(out(i, j) == x(i, j));
    }
    for (std::size_t c = 0; c < x.size(); ++c) CHECK(out.flat()[c] <= x.flat()[c]);
    auto eq = FamsFixer{}.fix_equalities(out, pe0, rng);
    REQUIRE(eq);
    CHECK(is_valid_pure(pe0.game, PureStrategy{*eq}).valid);
  }
}

TEST_CASE("best response basics") {
  FamsInstance inst;
  inst.marshals = 1;
  inst.flights = {{"F0", -1, -5}, {"F1", -1, -5}};
  inst.schedules = {{"A", {"F0"}}, {"B", {"F1"}}};
  const DbrResult r = fams_dbr(inst, fixtures::matrix({{1.0, 2.0}}));
  CHECK(r.strategy.values == fixtures::imatrix({{0, 1}}));
  CHECK(r.value == 2.0);

  inst.forbidden = {{0, 1}};
  CHECK(fams_dbr(inst, fixtures::matrix({{1.0, 2.0}})).strategy.values == fixtures::imatrix({{1, 0}}));

  CHECK_THROWS_AS(fams_dbr(inst, fixtures::matrix({{-1.0, 2.0}})), InvalidGameError);
}

namespace {

double brute_force_dbr(const AraGame& g, const Matrix<double>& d) {
  double best = 0.0;
  for (const PureStrategy& p : enumerate_pure(g).strategies) {
    double v = 0.0;
    for (std::size_t c = 0; c < p.values.size(); ++c) v += d.flat()[c] * p.values.flat()[c];
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("best response matches enumeration") {
  const FamsInstance toy = fixtures::fams_toy();
  CHECK(fams_dbr(toy, Matrix<double>(3, 3, 1.0)).value == doctest::Approx(brute_force_dbr(encode_fams(toy), Matrix<double>(3, 3, 1.0))));

  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    FamsGenConfig cfg;
    cfg.seed = trial;
    cfg.flights = 5;
    cfg.schedules = 5;
    cfg.marshals = 3;
    cfg.targets_per_schedule = 2;
    FamsInstance inst = gen_fams(cfg);
    if (trial % 3 == 0) inst.forbidden = {{0, 0}, {1, 2}};
    Matrix<double> d(3, 5);
    for (double& v : d.flat()) v = uniform01(rng) < 0.2 ? 0.0 : uniform01(rng);
    // Equal rows exercise the symmetry pruning.
    if (trial % 2 == 0)
      for (std::size_t j = 0; j < 5; ++j) d(1, j) = d(0, j);
    const DbrResult r = fams_dbr(inst, d);
    CHECK(r.value == doctest::Approx(brute_force_dbr(encode_fams(inst), d)));
    CHECK(is_valid_pure(encode_fams(inst), r.strategy).valid);
  }
}

TEST_CASE("best response node cap") {
  FamsGenConfig cfg;
  cfg.flights = 40;
  cfg.schedules = 40;
  cfg.marshals = 6;
  cfg.targets_per_schedule = 2;
  const FamsInstance inst = gen_fams(cfg);
  Matrix<double> d(6, 40);
  Rng rng(1);
  for (double& v : d.flat()) v = uniform01(rng);
  DbrOptions o;
  o.node_cap = 10;
  CHECK_THROWS_AS(fams_dbr(inst, d, o), CapExceededError);
}

TEST_CASE("column generation agrees with enumeration") {
  const FamsInstance toy = fixtures::fams_toy();
  const AraGame g = encode_fams(toy);
  const ColumnGenerationResult cg = fams_column_generation(toy);
  CHECK(cg.converged);
  const ExactSolution ex = exact_maximin(g, enumerate_pure(g));
  CHECK(cg.value == doctest::Approx(ex.value).epsilon(1e-6));
  CHECK(cg.value <= solve_marginal(g).upper_bound + 1e-6);

  for (int trial = 0; trial < 15; ++trial) {
    FamsGenConfig cfg;
    cfg.seed = 500 + trial;
    cfg.flights = 6;
    cfg.schedules = 6;
    cfg.marshals = 2;
    cfg.targets_per_schedule = 2;
    const FamsInstance inst = gen_fams(cfg);
    const AraGame h = encode_fams(inst);
    const ColumnGenerationResult r = fams_column_generation(inst);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(exact_maximin(h, enumerate_pure(h)).value).epsilon(1e-6));
    CHECK(r.value <= solve_marginal(h).upper_bound + 1e-6);
  }
}

TEST_CASE("one marshal over disjoint schedules spreads evenly") {
  FamsInstance inst;
  inst.marshals = 1;
  for (int j = 0; j < 4; ++j) {
    inst.flights.push_back({"F" + std::to_string(j), -1, -5});
    inst.schedules.push_back({"S" + std::to_string(j), {"F" + std::to_string(j)}});
  }
  const ColumnGenerationResult r = fams_column_generation(inst);
  CHECK(r.value == doctest::Approx(0.25 * -1 + 0.75 * -5));
}

TEST_CASE("bi-hierarchical FAMS: column generation reaches the marginal bound") {
  // Disjoint singleton schedules: rows and flight columns form two laminar families.
  FamsInstance inst;
  inst.marshals = 2;
  inst.flights = {{"F0", -1, -4}, {"F1", -1, -6}, {"F2", -1, -9}};
  inst.schedules = {{"S0", {"F0"}}, {"S1", {"F1"}}, {"S2", {"F2"}}};
  const AraGame g = encode_fams(inst);
  REQUIRE(check_implementability(g).bi_hierarchical);
  CHECK(fams_column_generation(inst).value == doctest::Approx(solve_marginal(g).upper_bound).epsilon(1e-6));
}

TEST_CASE("co-scheduled flight count") {
  CHECK(fams_cosched_count(fixtures::fams_toy()) == 2);
  FamsInstance inst = fixtures::fams_toy();
  inst.flights.push_back({"F3", -1, -2});
  inst.schedules.push_back({"S4", {"F2", "F3"}});
  CHECK(fams_cosched_count(inst) == 3);
}
