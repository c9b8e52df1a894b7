#include "ara/game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ara/lp.hpp"
#include "ara/polytope.hpp"

namespace ara {

namespace {

std::vector<Cell> unique_cells(const std::vector<Cell>& cells) {
  std::vector<Cell> out = cells;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Cell> unique_cells(const std::vector<WeightedCell>& cells) {
  std::vector<Cell> out;
  out.reserve(cells.size());
  for (const auto& wc : cells) out.push_back(wc.cell);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string cell_str(Cell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

}  // namespace

AraGame::AraGame(std::size_t k, std::size_t n, std::vector<AssignmentConstraint> constraints,
                 std::vector<Target> targets, std::vector<AdversaryType> adversary_types,
                 GameOptions options)
    : k_(k),
      n_(n),
      constraints_(std::move(constraints)),
      targets_(std::move(targets)),
      types_(std::move(adversary_types)),
      options_(options) {
  if (types_.empty()) {
    AdversaryType all{"default", 1.0, {}};
    for (const Target& t : targets_) all.targets.push_back(t.id);
    types_.push_back(std::move(all));
  }
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (!target_ids_.emplace(targets_[i].id, i).second)
      throw InvalidGameError("duplicate target id '" + targets_[i].id + "'");
  }
  validate_structure();
  if (options_.check_weights) validate_weights();
}

std::size_t AraGame::target_index(std::string_view id) const {
  auto it = target_ids_.find(std::string(id));
  if (it == target_ids_.end()) throw Error("unknown target id '" + std::string(id) + "'");
  return it->second;
}

bool AraGame::has_target(std::string_view id) const {
  return target_ids_.count(std::string(id)) != 0;
}

void AraGame::validate_structure() {
  if (k_ == 0 || n_ == 0) throw InvalidGameError("allocation matrix must be at least 1x1");
  auto in_range = [&](Cell c) { return c.row < k_ && c.col < n_; };

  for (std::size_t s = 0; s < constraints_.size(); ++s) {
    const auto& con = constraints_[s];
    const std::string name = "constraint " + std::to_string(s);
    if (con.cells.empty()) throw InvalidGameError(name + " has no cells");
    if (con.lower < 0 || con.lower > con.upper)
      throw InvalidGameError(name + " needs 0 <= lower <= upper");
    for (Cell c : con.cells)
      if (!in_range(c)) throw InvalidGameError(name + " references cell " + cell_str(c) + " outside the matrix");
  }

  if (targets_.size() > k_ * n_ * options_.target_cap_factor)
    throw InvalidGameError("target count " + std::to_string(targets_.size()) + " exceeds cap k*n*" +
                           std::to_string(options_.target_cap_factor));
  for (const Target& t : targets_) {
    const std::string name = "target '" + t.id + "'";
    if (!std::isfinite(t.u_def) || !std::isfinite(t.u_undef))
      throw InvalidGameError(name + " has non-finite payoffs");
    if (t.u_def < t.u_undef) throw InvalidGameError(name + " has u_def < u_undef");
    for (const WeightedCell& wc : t.cells) {
      if (!in_range(wc.cell))
        throw InvalidGameError(name + " references cell " + cell_str(wc.cell) + " outside the matrix");
      if (!std::isfinite(wc.weight) || wc.weight < 0.0)
        throw InvalidGameError(name + " has a negative or non-finite weight");
    }
  }

  std::vector<int> owner(targets_.size(), -1);
  std::unordered_set<std::string> type_ids;
  double total = 0.0;
  type_targets_.clear();
  for (std::size_t th = 0; th < types_.size(); ++th) {
    const AdversaryType& ty = types_[th];
    if (!type_ids.insert(ty.id).second) throw InvalidGameError("duplicate adversary type '" + ty.id + "'");
    if (!std::isfinite(ty.probability) || ty.probability < 0.0 || ty.probability > 1.0)
      throw InvalidGameError("adversary type '" + ty.id + "' probability outside [0,1]");
    total += ty.probability;
    std::vector<std::size_t> idx;
    for (const std::string& id : ty.targets) {
      auto it = target_ids_.find(id);
      if (it == target_ids_.end())
        throw InvalidGameError("adversary type '" + ty.id + "' names unknown target '" + id + "'");
      if (owner[it->second] != -1)
        throw InvalidGameError("target '" + id + "' belongs to more than one adversary type");
      owner[it->second] = static_cast<int>(th);
      idx.push_back(it->second);
    }
    if (ty.probability > 0.0 && idx.empty())
      throw InvalidGameError("adversary type '" + ty.id + "' has positive probability but no targets");
    type_targets_.push_back(std::move(idx));
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidGameError("adversary type probabilities do not sum to 1");
  for (std::size_t i = 0; i < targets_.size(); ++i)
    if (owner[i] == -1) throw InvalidGameError("target '" + targets_[i].id + "' belongs to no adversary type");
}

void AraGame::validate_weights() const {
  // Fast path: some constraint S contains T and max_w * N_S <= 1.
  std::vector<std::vector<Cell>> sets;
  sets.reserve(constraints_.size());
  std::vector<std::vector<std::size_t>> by_cell(k_ * n_);
  for (std::size_t s = 0; s < constraints_.size(); ++s) {
    sets.push_back(unique_cells(constraints_[s].cells));
    for (Cell c : sets.back()) by_cell[flat(c)].push_back(s);
  }

  std::vector<std::size_t> need_lp;
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    const Target& tg = targets_[t];
    double wmax = 0.0;
    for (const auto& wc : tg.cells) wmax = std::max(wmax, wc.weight);
    if (wmax == 0.0) continue;
    std::vector<Cell> tc = unique_cells(tg.cells);
    bool certified = false;
    for (std::size_t s : by_cell[flat(tc.front())]) {
      if (wmax * static_cast<double>(constraints_[s].upper) > 1.0 + kMarginalTolerance) continue;
      if (std::includes(sets[s].begin(), sets[s].end(), tc.begin(), tc.end())) {
        certified = true;
        break;
      }
    }
    if (!certified) need_lp.push_back(t);
  }
  if (need_lp.empty()) return;

  lp::LinearProgram base;
  add_marginal_polytope(base, k_, n_, constraints_);
  for (std::size_t t : need_lp) {
    lp::LinearProgram prog = base;
    for (const auto& wc : targets_[t].cells) prog.objective[flat(wc.cell)] += wc.weight;
    lp::LpSolution sol = lp::solve_lp(prog);
    if (sol.status == lp::Status::infeasible) return;  // empty polytope: vacuous
    if (sol.status == lp::Status::unbounded)
      throw InvalidGameError("target '" + targets_[t].id + "' has unbounded coverage over the marginal polytope");
    if (sol.objective_value > 1.0 + kMarginalTolerance) {
      std::ostringstream os;
      os << "target '" << targets_[t].id << "' weights allow coverage " << sol.objective_value << " > 1";
      throw InvalidGameError(os.str());
    }
  }
}

void check_dimensions(const AraGame& game, std::size_t rows, std::size_t cols) {
  if (rows != game.k() || cols != game.n())
    throw Error("matrix is " + std::to_string(rows) + "x" + std::to_string(cols) + ", game expects " +
                std::to_string(game.k()) + "x" + std::to_string(game.n()));
}

double reported_coverage(double raw) { return std::clamp(raw, 0.0, 1.0); }

std::string describe(const AraGame& game, const Violation& v) {
  std::ostringstream os;
  switch (v.kind) {
    case Violation::Kind::non_integral:
      os << "cell " << cell_str(v.cell) << " is not integral (" << v.achieved << ")";
      break;
    case Violation::Kind::negative:
      os << "cell " << cell_str(v.cell) << " is negative (" << v.achieved << ")";
      break;
    case Violation::Kind::below_lower:
      os << "constraint " << v.constraint << " sum " << v.achieved << " < lower "
         << game.constraints()[v.constraint].lower;
      break;
    case Violation::Kind::above_upper:
      os << "constraint " << v.constraint << " sum " << v.achieved << " > upper "
         << game.constraints()[v.constraint].upper;
      break;
  }
  return os.str();
}

ValidityReport is_valid_pure(const AraGame& game, const PureStrategy& p) {
  check_dimensions(game, p.values.rows(), p.values.cols());
  ValidityReport rep;
  auto flat = p.values.flat();
  for (std::size_t r = 0; r < game.k(); ++r)
    for (std::size_t c = 0; c < game.n(); ++c)
      if (p.values(r, c) < 0) {
        rep.violations.push_back({Violation::Kind::negative, 0,
                                  Cell{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)},
                                  static_cast<double>(p.values(r, c))});
      }
  const auto& cons = game.constraints();
  for (std::size_t s = 0; s < cons.size(); ++s) {
    std::int64_t sum = 0;
    for (const Cell& c : cons[s].cells) sum += flat[game.flat(c)];
    if (sum < cons[s].lower)
      rep.violations.push_back({Violation::Kind::below_lower, s, {}, static_cast<double>(sum)});
    else if (sum > cons[s].upper)
      rep.violations.push_back({Violation::Kind::above_upper, s, {}, static_cast<double>(sum)});
  }
  rep.valid = rep.violations.empty();
  return rep;
}

ValidityReport check_pure(const AraGame& game, const Matrix<double>& x) {
  check_dimensions(game, x.rows(), x.cols());
  ValidityReport rep;
  PureStrategy p{Matrix<std::int32_t>(x.rows(), x.cols())};
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double v = x(r, c);
      if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e9) {
        rep.violations.push_back({Violation::Kind::non_integral, 0,
                                  Cell{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)}, v});
        continue;
      }
      p.values(r, c) = static_cast<std::int32_t>(v);
    }
  if (!rep.violations.empty()) {
    rep.valid = false;
    return rep;
  }
  return is_valid_pure(game, p);
}

ValidityReport check_marginal(const AraGame& game, const Matrix<double>& x, double eps) {
  check_dimensions(game, x.rows(), x.cols());
  ValidityReport rep;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c)
      if (x(r, c) < -eps)
        rep.violations.push_back({Violation::Kind::negative, 0,
                                  Cell{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)}, x(r, c)});
  const auto& cons = game.constraints();
  for (std::size_t s = 0; s < cons.size(); ++s) {
    const double sum = constraint_sum(game, x, cons[s]);
    if (sum < static_cast<double>(cons[s].lower) - eps)
      rep.violations.push_back({Violation::Kind::below_lower, s, {}, sum});
    else if (sum > static_cast<double>(cons[s].upper) + eps)
      rep.violations.push_back({Violation::Kind::above_upper, s, {}, sum});
  }
  rep.valid = rep.violations.empty();
  return rep;
}

namespace {

// Sizes of a, b and their intersection for sorted unique cell lists.
std::size_t intersection_size(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

bool sets_cross(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  const std::size_t inter = intersection_size(a, b);
  return inter > 0 && inter < a.size() && inter < b.size();
}

}  // namespace

bool constraints_cross(const AssignmentConstraint& a, const AssignmentConstraint& b) {
  return sets_cross(unique_cells(a.cells), unique_cells(b.cells));
}

ImplementabilityResult check_implementability(std::span<const AssignmentConstraint> constraints) {
  const std::size_t m = constraints.size();
  std::vector<std::vector<Cell>> sets;
  sets.reserve(m);
  for (const auto& c : constraints) sets.push_back(unique_cells(c.cells));

  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (sets_cross(sets[a], sets[b])) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }

  ImplementabilityResult res;
  res.partition.assign(m, -1);
  std::vector<std::size_t> parent(m, m), depth(m, 0);
  for (std::size_t root = 0; root < m; ++root) {
    if (res.partition[root] != -1) continue;
    res.partition[root] = 0;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (res.partition[v] == -1) {
          res.partition[v] = 1 - res.partition[u];
          parent[v] = u;
          depth[v] = depth[u] + 1;
          queue.push_back(v);
          continue;
        }
        if (res.partition[v] != res.partition[u]) continue;
        // Same colour across an edge: splice the two tree paths into an odd cycle.
        std::vector<std::size_t> left{u}, right{v};
        std::size_t a = u, b = v;
        while (depth[a] > depth[b]) left.push_back(a = parent[a]);
        while (depth[b] > depth[a]) right.push_back(b = parent[b]);
        while (a != b) {
          left.push_back(a = parent[a]);
          right.push_back(b = parent[b]);
        }
        right.pop_back();  // LCA already in left
        res.odd_cycle = std::move(left);
        res.odd_cycle.insert(res.odd_cycle.end(), right.rbegin(), right.rend());
        res.bi_hierarchical = false;
        res.partition.clear();
        return res;
      }
    }
  }
  return res;
}

ImplementabilityResult check_implementability(const AraGame& game) {
  return check_implementability(std::span<const AssignmentConstraint>(game.constraints()));
}

}  // namespace ara
