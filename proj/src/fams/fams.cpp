#include "ara/fams.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace ara {

void FamsInstance::validate() const {
  if (marshals == 0) throw InvalidGameError("FAMS instance has no marshals");
  if (schedules.empty()) throw InvalidGameError("FAMS instance has no schedules");
  std::set<std::string> flight_ids;
  for (const FamsFlight& f : flights) {
    if (!flight_ids.insert(f.id).second) throw InvalidGameError("duplicate flight id '" + f.id + "'");
    if (!std::isfinite(f.u_def) || !std::isfinite(f.u_undef))
      throw InvalidGameError("flight '" + f.id + "' has a non-finite payoff");
    if (f.u_def < f.u_undef) throw InvalidGameError("flight '" + f.id + "' has u_def < u_undef");
  }
  std::set<std::string> schedule_ids;
  for (const FamsSchedule& s : schedules) {
    if (!schedule_ids.insert(s.id).second) throw InvalidGameError("duplicate schedule id '" + s.id + "'");
    if (s.flights.empty()) throw InvalidGameError("schedule '" + s.id + "' has no flights");
    std::set<std::string> seen;
    for (const std::string& f : s.flights) {
      if (!flight_ids.count(f)) throw InvalidGameError("schedule '" + s.id + "' names unknown flight '" + f + "'");
      if (!seen.insert(f).second) throw InvalidGameError("schedule '" + s.id + "' lists flight '" + f + "' twice");
    }
  }
  for (auto [m, s] : forbidden)
    if (m >= marshals || s >= schedules.size())
      throw InvalidGameError("forbidden pair (" + std::to_string(m) + "," + std::to_string(s) + ") out of range");
}

std::size_t FamsInstance::flight_index(const std::string& id) const {
  for (std::size_t f = 0; f < flights.size(); ++f)
    if (flights[f].id == id) return f;
  throw InvalidGameError("unknown flight '" + id + "'");
}

std::vector<std::vector<std::size_t>> FamsInstance::schedules_of_flight() const {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t f = 0; f < flights.size(); ++f) index.emplace(flights[f].id, f);
  std::vector<std::vector<std::size_t>> out(flights.size());
  for (std::size_t s = 0; s < schedules.size(); ++s)
    for (const std::string& f : schedules[s].flights) out[index.at(f)].push_back(s);
  return out;
}

AraGame encode_fams(const FamsInstance& inst) {
  inst.validate();
  const std::size_t k = inst.marshals;
  const std::size_t n = inst.schedules.size();
  std::vector<AssignmentConstraint> cons;
  for (std::uint32_t i = 0; i < k; ++i) {
    AssignmentConstraint row{{}, 0, 1};
    for (std::uint32_t j = 0; j < n; ++j) row.cells.push_back({i, j});
    cons.push_back(std::move(row));
  }
  std::set<std::pair<std::size_t, std::size_t>> forbidden(inst.forbidden.begin(), inst.forbidden.end());
  for (auto [m, s] : forbidden)
    cons.push_back({{{static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(s)}}, 0, 0});

  const auto by_flight = inst.schedules_of_flight();
  std::vector<Target> targets;
  for (std::size_t f = 0; f < inst.flights.size(); ++f) {
    Target t{inst.flights[f].id, {}, inst.flights[f].u_def, inst.flights[f].u_undef};
    AssignmentConstraint alloc{{}, 0, 1};
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::size_t s : by_flight[f]) {
        Cell c{i, static_cast<std::uint32_t>(s)};
        alloc.cells.push_back(c);
        t.cells.push_back({c, 1.0});
      }
    if (!alloc.cells.empty()) cons.push_back(std::move(alloc));
    targets.push_back(std::move(t));
  }
  return AraGame(k, n, std::move(cons), std::move(targets));
}

std::size_t fams_cosched_count(const FamsInstance& inst) {
  const auto by_flight = inst.schedules_of_flight();
  std::size_t best = 1;
  for (std::size_t f = 0; f < inst.flights.size(); ++f) {
    std::set<std::string> together{inst.flights[f].id};
    for (std::size_t s : by_flight[f])
      together.insert(inst.schedules[s].flights.begin(), inst.schedules[s].flights.end());
    best = std::max(best, together.size());
  }
  return best;
}

namespace {

struct FlightView {
  std::int64_t upper;
  const std::vector<Cell>* cells;
  std::vector<std::uint32_t> cols;  // distinct columns touched
};

std::vector<FlightView> flight_views(const Pe0Form& pe0) {
  std::vector<FlightView> out;
  out.reserve(pe0.inequalities.size());
  std::vector<char> seen(pe0.game.n(), 0);
  for (std::size_t q = 0; q < pe0.inequalities.size(); ++q) {
    const AssignmentConstraint& c = pe0.inequality(q);
    FlightView v{c.upper, &c.cells, {}};
    for (Cell cell : c.cells)
      if (!seen[cell.col]) {
        seen[cell.col] = 1;
        v.cols.push_back(cell.col);
      }
    for (std::uint32_t j : v.cols) seen[j] = 0;
    std::sort(v.cols.begin(), v.cols.end());
    out.push_back(std::move(v));
  }
  return out;
}

std::int64_t sum_over(const IntMatrix& x, const std::vector<Cell>& cells) {
  std::int64_t s = 0;
  for (Cell c : cells) s += x(c.row, c.col);
  return s;
}

// Lowest-row positive cell of column col among cells, or nullopt.
std::optional<Cell> lowest_positive(const IntMatrix& x, std::uint32_t col, const std::vector<Cell>* cells) {
  if (cells) {
    std::optional<Cell> best;
    for (Cell c : *cells)
      if (c.col == col && x(c.row, c.col) > 0 && (!best || c.row < best->row)) best = c;
    return best;
  }
  for (std::uint32_t i = 0; i < x.rows(); ++i)
    if (x(i, col) > 0) return Cell{i, col};
  return std::nullopt;
}

}  // namespace

IntMatrix FamsFixer::fix_inequalities(IntMatrix x, const Pe0Form& pe0, Rng& rng) const {
  const std::vector<FlightView> views = flight_views(pe0);
  const std::uint32_t cols = static_cast<std::uint32_t>(pe0.source_cols);

  for (;;) {
    std::vector<std::int64_t> sums(views.size());
    bool any_violated = false;
    for (std::size_t v = 0; v < views.size(); ++v) {
      sums[v] = sum_over(x, *views[v].cells);
      any_violated = any_violated || sums[v] > views[v].upper;
    }
    if (!any_violated) return x;

    // Upper-0 constraints hold forbidden pairs; just clear them.
    bool cleared = false;
    for (std::size_t v = 0; v < views.size() && !cleared; ++v) {
      if (views[v].upper != 0 || sums[v] == 0) continue;
      for (Cell c : *views[v].cells)
        if (x(c.row, c.col) > 0) {
          --x(c.row, c.col);
          cleared = true;
          break;
        }
    }
    if (cleared) continue;

    std::vector<int> violated_count(cols, 0);
    std::vector<char> touches_satisfied(cols, 0);
    for (std::size_t v = 0; v < views.size(); ++v) {
      if (views[v].upper == 0) continue;
      const bool violated = sums[v] > views[v].upper;
      const bool satisfied = !violated && sums[v] > 0;
      for (std::uint32_t j : views[v].cols) {
        if (j >= cols) continue;
        if (violated) ++violated_count[j];
        if (satisfied) touches_satisfied[j] = 1;
      }
    }
    std::optional<std::uint32_t> pick;
    for (std::uint32_t j = 0; j < cols; ++j) {
      if (violated_count[j] == 0 || touches_satisfied[j] || !lowest_positive(x, j, nullptr)) continue;
      if (!pick || violated_count[j] > violated_count[*pick]) pick = j;
    }
    if (pick) {
      Cell c = *lowest_positive(x, *pick, nullptr);
      --x(c.row, c.col);
      continue;
    }

    // Every candidate also covers a satisfied flight: release a random
    // allocated schedule of the worst flight.
    std::size_t worst = views.size();
    for (std::size_t v = 0; v < views.size(); ++v) {
      const std::int64_t excess = sums[v] - views[v].upper;
      if (excess > 0 && (worst == views.size() || excess > sums[worst] - views[worst].upper)) worst = v;
    }
    std::vector<std::uint32_t> allocated;
    for (std::uint32_t j : views[worst].cols)
      if (lowest_positive(x, j, views[worst].cells)) allocated.push_back(j);
    const auto choice = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(allocated.size()) - 1));
    Cell c = *lowest_positive(x, allocated[choice], views[worst].cells);
    --x(c.row, c.col);
  }
}

std::optional<IntMatrix> FamsFixer::fix_equalities(IntMatrix x, const Pe0Form& pe0, Rng&) const {
  const auto slack_col = static_cast<std::uint32_t>(pe0.source_cols);
  for (std::size_t e = 0; e < pe0.equalities.size(); ++e) {
    const AssignmentConstraint& con = pe0.equality(e);
    std::optional<Cell> slack;
    std::int64_t others = 0;
    for (Cell c : con.cells) {
      if (pe0.has_slack() && c.col == slack_col)
        slack = c;
      else
        others += x(c.row, c.col);
    }
    if (slack) {
      const std::int64_t fill = con.upper - others;
      if (fill < x(slack->row, slack->col)) return std::nullopt;
      x(slack->row, slack->col) = static_cast<std::int32_t>(fill);
    } else if (others != con.upper) {
      return std::nullopt;
    }
  }
  return x;
}

}  // namespace ara
