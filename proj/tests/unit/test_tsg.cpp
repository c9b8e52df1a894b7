#include <doctest.h>

#include "ara/exact.hpp"
#include "ara/marginal.hpp"
#include "ara/tsg.hpp"
#include "fixtures.hpp"

using namespace ara;

TEST_CASE("encoding of the two-resource toy") {
  const AraGame g = encode_tsg(fixtures::tsg_toy());
  CHECK(g.k() == 2);
  CHECK(g.n() == 3);
  CHECK(g.constraints().size() == 5);
  int eq = 0, ineq = 0;
  for (const auto& c : g.constraints()) (c.is_equality() ? eq : ineq)++;
  CHECK(eq == 3);
  CHECK(ineq == 2);
  CHECK(g.constraints()[0].upper == 7);
  CHECK(g.constraints()[1].upper == 15);
  CHECK(g.adversary_types().size() == 2);
  CHECK(g.type_targets()[0].size() == 1);
  CHECK(g.type_targets()[1].size() == 2);
  CHECK(g.targets()[2].cells[0].weight == doctest::Approx(0.9 / 15));
}

TEST_CASE("repeated members consume capacity per use") {
  TsgInstance inst = fixtures::tsg_toy();
  inst.teams[0].members = {"XRay", "XRay"};
  inst.resources[0].capacity = 14;
  const AraGame g = encode_tsg(inst);
  CHECK(g.constraints()[0].cells.size() == 6);
  const PureStrategy p{fixtures::imatrix({{1, 2, 4}, {1, 2, 11}})};
  CHECK(constraint_sum(g, p.values, g.constraints()[0]) == 14.0);
  CHECK(is_valid_pure(g, p).valid);
}

TEST_CASE("one team, one category: the unique strategy covers at E") {
  TsgInstance inst;
  inst.resources = {{"R", 3}};
  inst.teams = {{"T", {"R"}, 0.7}};
  inst.categories = {{"C", "L", "F", 3, -1, -6}};
  inst.risks = {{"L", 1.0}};
  const AraGame g = encode_tsg(inst);
  const auto set = enumerate_pure(g);
  REQUIRE(set.strategies.size() == 1);
  CHECK(coverage(g, set.strategies[0].values, "C") == doctest::Approx(0.7));
}

TEST_CASE("TSG instance invariants") {
  TsgInstance inst = fixtures::tsg_toy();
  inst.teams[0].effectiveness = 1.0;
  CHECK_THROWS_AS(encode_tsg(inst), InvalidGameError);
  inst = fixtures::tsg_toy();
  inst.categories[0].passengers = 0;
  CHECK_THROWS_AS(encode_tsg(inst), InvalidGameError);
  inst = fixtures::tsg_toy();
  inst.risks[0].probability = 0.5;
  CHECK_THROWS_AS(encode_tsg(inst), InvalidGameError);
  inst = fixtures::tsg_toy();
  inst.resources[1].capacity = 5;  // 7 + 5 < 21 passengers
  CHECK_THROWS_AS(encode_tsg(inst), InvalidGameError);
}

namespace {

struct Setup {
  AraGame game;
  Pe0Form pe0;
  explicit Setup(const TsgInstance& inst) : game(encode_tsg(inst)), pe0(to_pe0(game)) {}
};

}  // namespace

TEST_CASE("most violated resource is fixed first") {
  // Three single-resource teams; A over by 2, B over by 1.
  TsgInstance inst;
  inst.resources = {{"A", 3}, {"B", 3}, {"C", 30}};
  inst.teams = {{"TA", {"A"}, 0.9}, {"TB", {"B"}, 0.8}, {"TC", {"C"}, 0.1}};
  inst.categories = {{"c0", "L", "F0", 4, -1, -5}, {"c1", "L", "F1", 6, -1, -5}};
  inst.risks = {{"L", 1.0}};
  const Setup s(inst);
  const IntMatrix x = fixtures::imatrix({{2, 3}, {1, 3}, {1, 0}});
  Rng rng(0);
  const IntMatrix out = TsgFixer{}.fix_inequalities(x, s.pe0, rng);
  // A loses two units from the 6-passenger column, then B one unit from it.
  CHECK(out == fixtures::imatrix({{2, 1}, {1, 2}, {1, 0}}));
}

TEST_CASE("inequality fix leaves feasible matrices alone") {
  const Setup s(fixtures::tsg_toy());
  const IntMatrix x = fixtures::imatrix({{1, 2, 4}, {1, 2, 11}});
  Rng rng(0);
  CHECK(TsgFixer{}.fix_inequalities(x, s.pe0, rng) == x);
  auto eq = TsgFixer{}.fix_equalities(x, s.pe0, rng);
  REQUIRE(eq);
  CHECK(*eq == x);
}

TEST_CASE("deficit goes to the team with the least slack") {
  TsgInstance inst;
  inst.resources = {{"A", 3}, {"B", 6}};
  inst.teams = {{"TA", {"A"}, 0.9}, {"TB", {"B"}, 0.5}};
  inst.categories = {{"c", "L", "F", 4, -1, -5}};
  inst.risks = {{"L", 1.0}};
  const Setup s(inst);
  // Slacks after (2, 1): A has 1, B has 5; the missing unit goes to TA.
  Rng rng(0);
  auto out = TsgFixer{}.fix_equalities(fixtures::imatrix({{2}, {1}}), s.pe0, rng);
  REQUIRE(out);
  CHECK(*out == fixtures::imatrix({{3}, {1}}));
}

TEST_CASE("deficits fill small categories first and can fail") {
  TsgInstance inst;
  inst.resources = {{"A", 2}};
  inst.teams = {{"TA", {"A"}, 0.9}, {"TB", {}, 0.1}};
  inst.categories = {{"big", "L", "F0", 5, -1, -5}, {"small", "L", "F1", 2, -1, -5}};
  inst.risks = {{"L", 1.0}};
  const Setup s(inst);
  Rng rng(0);
  // TA has slack 2; TB has no resources (infinite slack). Small category first: TA gets both.
  auto out = TsgFixer{}.fix_equalities(fixtures::imatrix({{0, 0}, {5, 0}}), s.pe0, rng);
  REQUIRE(out);
  CHECK(*out == fixtures::imatrix({{0, 2}, {5, 0}}));

  // A category already over its count cannot be repaired upwards.
  const Setup t(fixtures::tsg_toy());
  CHECK_FALSE(TsgFixer{}.fix_equalities(fixtures::imatrix({{2, 1, 4}, {0, 3, 12}}), t.pe0, rng));

  // Both resources full with one passenger missing: no team fits.
  TsgInstance full;
  full.resources = {{"A", 2}, {"B", 3}};
  full.teams = {{"TA", {"A"}, 0.9}, {"TB", {"A", "B"}, 0.9}, {"TC", {"B"}, 0.5}};
  full.categories = {{"c", "L", "F", 4, -1, -5}};
  full.risks = {{"L", 1.0}};
  const Setup f(full);
  CHECK_FALSE(TsgFixer{}.fix_equalities(fixtures::imatrix({{0}, {2}, {1}}), f.pe0, rng));
}

TEST_CASE("unit decrease changes coverage by E_i / N_j") {
  const AraGame g = encode_tsg(fixtures::tsg_toy());
  const Matrix<double> x = fixtures::matrix({{1, 2, 4}, {1, 2, 11}});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Matrix<double> y = x;
      y(i, j) -= 1;
      const double e = i == 0 ? 0.9 : 0.5;
      const double n = static_cast<double>(fixtures::tsg_toy().categories[j].passengers);
      CHECK(coverage(g, x, j) - coverage(g, y, j) == doctest::Approx(e / n).epsilon(1e-12));
    }
}

TEST_CASE("detection ratio") {
  const AraGame g = encode_tsg(fixtures::tsg_toy());
  const Matrix<double> x = fixtures::matrix({{1, 2, 4}, {1, 2, 11}});
  CHECK(tsg_detection_ratio(x, x, g).min == 1.0);

  // One category drops from 0.60 to 0.55 coverage.
  TsgInstance one;
  one.resources = {{"R", 100}};
  one.teams = {{"T", {"R"}, 0.6}, {"U", {}, 0.0}};
  one.categories = {{"a", "L", "F", 20, -1, -5}, {"b", "L", "G", 20, -1, -5}};
  one.risks = {{"L", 1.0}};
  const AraGame h = encode_tsg(one);
  const Matrix<double> before = fixtures::matrix({{20, 20}, {0, 0}});
  Matrix<double> after = before;
  after(0, 0) = 20.0 * 0.55 / 0.6;
  after(1, 0) = 20.0 - after(0, 0);
  const DetectionRatio r = tsg_detection_ratio(before, after, h);
  CHECK(r.min == doctest::Approx(0.55 / 0.60));
  CHECK(r.per_target[1] == 1.0);
  CHECK(c_measured(r.min) == doctest::Approx(0.60 / 0.55));

  CHECK(tsg_detection_ratio(Matrix<double>(2, 2), Matrix<double>(2, 2), h).min == 1.0);
}

TEST_CASE("fixer direction and validity over random combed matrices") {
  const Setup s(fixtures::tsg_crossing());
  const MarginalSolution ms = solve_marginal(s.game);
  PureSampler sampler(ms, s.pe0, TsgFixer{});
  Rng rng(31);
  const TsgFixer fixer;
  for (int i = 0; i < 2000; ++i) {
    const IntMatrix combed = sampler.comb(rng);
    const PipelineTrace t = run_pipeline(s.pe0, combed, fixer, rng);
    for (std::size_t c = 0; c < combed.size(); ++c) CHECK(t.after_inequalities.flat()[c] <= combed.flat()[c]);
    for (std::size_t q = 0; q < s.pe0.inequalities.size(); ++q)
      CHECK(constraint_sum(s.game, t.after_inequalities, s.pe0.inequality(q)) <= s.pe0.inequality(q).upper);
    if (t.after_equalities) {
      for (std::size_t c = 0; c < combed.size(); ++c)
        CHECK(t.after_equalities->flat()[c] >= t.after_inequalities.flat()[c]);
      CHECK(t.valid);
    }
  }
}
