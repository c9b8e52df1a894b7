#include "ara/tsg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ara {

std::size_t TsgInstance::resource_index(const std::string& id) const {
  for (std::size_t r = 0; r < resources.size(); ++r)
    if (resources[r].id == id) return r;
  throw InvalidGameError("unknown resource '" + id + "'");
}

std::int64_t TsgInstance::multiplicity(std::size_t team, std::size_t resource) const {
  return std::count(teams[team].members.begin(), teams[team].members.end(), resources[resource].id);
}

void TsgInstance::validate() const {
  if (teams.empty()) throw InvalidGameError("TSG instance has no teams");
  if (categories.empty()) throw InvalidGameError("TSG instance has no categories");
  if (risks.empty()) throw InvalidGameError("TSG instance has no risk levels");
  std::set<std::string> ids;
  for (const TsgResource& r : resources) {
    if (!ids.insert(r.id).second) throw InvalidGameError("duplicate resource id '" + r.id + "'");
    if (r.capacity < 0) throw InvalidGameError("resource '" + r.id + "' has negative capacity");
  }
  ids.clear();
  for (const TsgTeam& t : teams) {
    if (!ids.insert(t.id).second) throw InvalidGameError("duplicate team id '" + t.id + "'");
    if (!(t.effectiveness >= 0.0 && t.effectiveness < 1.0))
      throw InvalidGameError("team '" + t.id + "' effectiveness must lie in [0, 1)");
    for (const std::string& m : t.members) resource_index(m);
  }
  ids.clear();
  double total_p = 0.0;
  for (const TsgRisk& r : risks) {
    if (!ids.insert(r.id).second) throw InvalidGameError("duplicate risk id '" + r.id + "'");
    if (!(r.probability >= 0.0 && r.probability <= 1.0))
      throw InvalidGameError("risk '" + r.id + "' probability outside [0, 1]");
    total_p += r.probability;
  }
  if (std::abs(total_p - 1.0) > 1e-9) throw InvalidGameError("risk probabilities do not sum to 1");
  std::set<std::string> cat_ids;
  std::int64_t passengers = 0;
  for (const TsgCategory& c : categories) {
    if (!cat_ids.insert(c.id).second) throw InvalidGameError("duplicate category id '" + c.id + "'");
    if (!ids.count(c.risk)) throw InvalidGameError("category '" + c.id + "' has unknown risk '" + c.risk + "'");
    if (c.passengers < 1) throw InvalidGameError("category '" + c.id + "' needs at least one passenger");
    if (!std::isfinite(c.u_def) || !std::isfinite(c.u_undef) || c.u_def < c.u_undef)
      throw InvalidGameError("category '" + c.id + "' payoffs must be finite with u_def >= u_undef");
    passengers += c.passengers;
  }
  // Each team alone can screen at most min_r C_r / m_r passengers.
  double reach = 0.0;
  for (std::size_t t = 0; t < teams.size(); ++t) {
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < resources.size(); ++r) {
      const std::int64_t m = multiplicity(t, r);
      if (m > 0) cap = std::min(cap, std::floor(static_cast<double>(resources[r].capacity) / static_cast<double>(m)));
    }
    reach += cap;
  }
  if (reach < static_cast<double>(passengers))
    throw InvalidGameError("teams cannot screen all " + std::to_string(passengers) + " passengers");
}

AraGame encode_tsg(const TsgInstance& inst) {
  inst.validate();
  const std::size_t k = inst.teams.size();
  const std::size_t n = inst.categories.size();
  std::vector<AssignmentConstraint> cons;
  for (std::size_t r = 0; r < inst.resources.size(); ++r) {
    AssignmentConstraint cap{{}, 0, inst.resources[r].capacity};
    for (std::size_t i = 0; i < k; ++i) {
      const std::int64_t m = inst.multiplicity(i, r);
      for (std::uint32_t j = 0; j < n; ++j)
        for (std::int64_t u = 0; u < m; ++u) cap.cells.push_back({static_cast<std::uint32_t>(i), j});
    }
    if (!cap.cells.empty()) cons.push_back(std::move(cap));
  }
  std::vector<Target> targets;
  for (std::uint32_t j = 0; j < n; ++j) {
    const TsgCategory& c = inst.categories[j];
    AssignmentConstraint eq{{}, c.passengers, c.passengers};
    Target t{c.id, {}, c.u_def, c.u_undef};
    for (std::uint32_t i = 0; i < k; ++i) {
      eq.cells.push_back({i, j});
      t.cells.push_back({{i, j}, inst.teams[i].effectiveness / static_cast<double>(c.passengers)});
    }
    cons.push_back(std::move(eq));
    targets.push_back(std::move(t));
  }
  std::vector<AdversaryType> types;
  for (const TsgRisk& r : inst.risks) {
    AdversaryType ty{r.id, r.probability, {}};
    for (const TsgCategory& c : inst.categories)
      if (c.risk == r.id) ty.targets.push_back(c.id);
    types.push_back(std::move(ty));
  }
  return AraGame(k, n, std::move(cons), std::move(targets), std::move(types));
}

namespace {

// Per-cell view of the pe0 structure.
struct TsgView {
  std::vector<std::size_t> eq_of_cell;   // pe0 equality position covering each cell
  std::vector<std::int64_t> eq_upper;    // per pe0 equality position
  // Per cell: (inequality position, multiplicity).
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> uses;
};

TsgView make_view(const Pe0Form& pe0) {
  const AraGame& g = pe0.game;
  TsgView v;
  v.eq_of_cell.assign(g.cell_count(), 0);
  for (std::size_t e = 0; e < pe0.equalities.size(); ++e) {
    v.eq_upper.push_back(pe0.equality(e).upper);
    for (Cell c : pe0.equality(e).cells) v.eq_of_cell[g.flat(c)] = e;
  }
  v.uses.resize(g.cell_count());
  for (std::size_t q = 0; q < pe0.inequalities.size(); ++q) {
    std::vector<std::size_t> flat;
    for (Cell c : pe0.inequality(q).cells) flat.push_back(g.flat(c));
    std::sort(flat.begin(), flat.end());
    for (std::size_t a = 0; a < flat.size();) {
      std::size_t b = a;
      while (b < flat.size() && flat[b] == flat[a]) ++b;
      v.uses[flat[a]].push_back({q, static_cast<std::int64_t>(b - a)});
      a = b;
    }
  }
  return v;
}

std::vector<std::int64_t> inequality_sums(const Pe0Form& pe0, const IntMatrix& x) {
  std::vector<std::int64_t> s(pe0.inequalities.size(), 0);
  for (std::size_t q = 0; q < s.size(); ++q)
    for (Cell c : pe0.inequality(q).cells) s[q] += x(c.row, c.col);
  return s;
}

}  // namespace

IntMatrix TsgFixer::fix_inequalities(IntMatrix x, const Pe0Form& pe0, Rng&) const {
  const TsgView view = make_view(pe0);
  const AraGame& g = pe0.game;
  for (;;) {
    const std::vector<std::int64_t> sums = inequality_sums(pe0, x);
    std::size_t worst = sums.size();
    std::int64_t worst_excess = 0;
    for (std::size_t q = 0; q < sums.size(); ++q) {
      const std::int64_t excess = sums[q] - pe0.inequality(q).upper;
      if (excess > worst_excess) {
        worst = q;
        worst_excess = excess;
      }
    }
    if (worst == sums.size()) return x;

    // Distinct cells of the resource in preference order.
    std::vector<Cell> cells = pe0.inequality(worst).cells;
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    std::sort(cells.begin(), cells.end(), [&](Cell a, Cell b) {
      const std::int64_t na = view.eq_upper[view.eq_of_cell[g.flat(a)]];
      const std::int64_t nb = view.eq_upper[view.eq_of_cell[g.flat(b)]];
      if (na != nb) return na > nb;
      if (a.col != b.col) return a.col < b.col;
      return a.row < b.row;
    });
    std::int64_t excess = worst_excess;
    while (excess > 0) {
      auto it = std::find_if(cells.begin(), cells.end(), [&](Cell c) { return x(c.row, c.col) > 0; });
      if (it == cells.end()) throw std::logic_error("over-capacity resource has no positive cell");
      --x(it->row, it->col);
      for (auto [q, m] : view.uses[g.flat(*it)])
        if (q == worst) excess -= m;
    }
  }
}

std::optional<IntMatrix> TsgFixer::fix_equalities(IntMatrix x, const Pe0Form& pe0, Rng&) const {
  const TsgView view = make_view(pe0);
  const AraGame& g = pe0.game;
  const std::vector<std::int64_t> sums = inequality_sums(pe0, x);
  std::vector<std::int64_t> slack(sums.size());
  for (std::size_t q = 0; q < sums.size(); ++q) slack[q] = pe0.inequality(q).upper - sums[q];

  std::vector<std::size_t> order(pe0.equalities.size());
  for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return view.eq_upper[a] < view.eq_upper[b]; });

  for (std::size_t e : order) {
    const AssignmentConstraint& eq = pe0.equality(e);
    std::int64_t have = 0;
    for (Cell c : eq.cells) have += x(c.row, c.col);
    if (have > eq.upper) return std::nullopt;
    for (std::int64_t need = eq.upper - have; need > 0; --need) {
      std::optional<Cell> pick;
      std::int64_t pick_slack = 0;
      for (Cell c : eq.cells) {
        std::int64_t team_slack = std::numeric_limits<std::int64_t>::max();
        bool fits = true;
        for (auto [q, m] : view.uses[g.flat(c)]) {
          fits = fits && slack[q] >= m;
          team_slack = std::min(team_slack, slack[q]);
        }
        if (!fits) continue;
        if (!pick || team_slack < pick_slack || (team_slack == pick_slack && c.row < pick->row)) {
          pick = c;
          pick_slack = team_slack;
        }
      }
      if (!pick) return std::nullopt;
      ++x(pick->row, pick->col);
      for (auto [q, m] : view.uses[g.flat(*pick)]) slack[q] -= m;
    }
  }
  return x;
}

}  // namespace ara
