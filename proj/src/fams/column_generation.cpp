#include "ara/column_generation.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "ara/fams.hpp"
#include "ara/lp.hpp"

namespace ara {

namespace {

constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();

// Restricted master over a growing column pool. Variables are the column
// weights a_m and one free z per adversary type; rows are
// z_theta - sum_m a_m U(P_m, t) <= 0 per target and sum_m a_m = 1.
class Master {
 public:
  Master(const AraGame& game, const std::vector<PureStrategy>& columns) : game_(game) {
    const auto& targets = game.targets();
    target_row_.assign(targets.size(), kNoRow);
    for (const PureStrategy& p : columns) add_variable(p);
    const auto& types = game.adversary_types();
    for (std::size_t th = 0; th < types.size(); ++th) {
      if (types[th].probability <= 0.0) continue;
      const std::size_t z = prog_.add_variable(types[th].probability, utility_floor(game, th), lp::kInf);
      for (std::size_t t : game.type_targets()[th]) {
        std::vector<lp::Term> terms{{z, 1.0}};
        for (std::size_t m = 0; m < columns.size(); ++m)
          if (util_[m][t] != 0.0) terms.push_back({column_var_[m], -util_[m][t]});
        target_row_[t] = prog_.add_row(std::move(terms), lp::Relation::le, 0.0);
      }
    }
    std::vector<lp::Term> convex;
    for (std::size_t m = 0; m < columns.size(); ++m) convex.push_back({column_var_[m], 1.0});
    convex_row_ = prog_.add_row(std::move(convex), lp::Relation::eq, 1.0);
  }

  MasterSolution solve() {
    lp_.emplace(prog_);
    return read(lp_->solution());
  }

  // Appends a column and re-optimises from the previous basis.
  MasterSolution extend(const PureStrategy& p) {
    if (!lp_) throw Error("master LP must be solved before it is extended");
    add_variable(p);
    const std::vector<double>& u = util_.back();
    std::vector<lp::Term> column;
    for (std::size_t t = 0; t < u.size(); ++t)
      if (target_row_[t] != kNoRow && u[t] != 0.0) column.push_back({target_row_[t], -u[t]});
    column.push_back({convex_row_, 1.0});
    column_var_.back() = prog_.num_vars() + extended_++;
    return read(lp_->add_column(0.0, column));
  }

 private:
  void add_variable(const PureStrategy& p) {
    check_dimensions(game_, p.values.rows(), p.values.cols());
    std::vector<double> u(game_.targets().size());
    for (std::size_t t = 0; t < u.size(); ++t) u[t] = defender_utility(game_, p.values, t);
    util_.push_back(std::move(u));
    column_var_.push_back(lp_ ? 0 : prog_.add_variable(0.0));
  }

  MasterSolution read(const lp::LpSolution& sol) const {
    if (sol.status != lp::Status::optimal)
      throw NumericalError(std::string("master LP ended ") + lp::to_string(sol.status));
    MasterSolution out;
    out.value = sol.objective_value;
    out.weights.resize(column_var_.size());
    for (std::size_t m = 0; m < column_var_.size(); ++m) out.weights[m] = std::max(0.0, sol.values[column_var_[m]]);
    out.target_duals.assign(target_row_.size(), 0.0);
    for (std::size_t t = 0; t < target_row_.size(); ++t)
      if (target_row_[t] != kNoRow) out.target_duals[t] = std::max(0.0, sol.duals[target_row_[t]]);
    out.convexity_dual = sol.duals[convex_row_];
    return out;
  }

  const AraGame& game_;
  lp::LinearProgram prog_;
  std::optional<lp::IncrementalSimplex> lp_;
  std::vector<std::vector<double>> util_;  // per column, per target
  std::vector<std::size_t> column_var_;
  std::vector<std::size_t> target_row_;
  std::size_t convex_row_ = 0;
  std::size_t extended_ = 0;
};

}  // namespace

MasterSolution solve_master(const AraGame& game, const std::vector<PureStrategy>& columns) {
  if (columns.empty()) throw Error("master LP needs at least one column");
  return Master(game, columns).solve();
}

ColumnGenerationResult column_generation(const AraGame& game, const PricingOracle& oracle,
                                         std::vector<PureStrategy> initial, const ColumnGenerationOptions& options) {
  ColumnGenerationResult out;
  out.columns = std::move(initial);
  if (out.columns.empty()) out.columns.push_back(PureStrategy{Matrix<std::int32_t>(game.k(), game.n())});
  for (const PureStrategy& p : out.columns)
    if (!is_valid_pure(game, p)) throw InvalidGameError("initial column is not a valid pure strategy");

  const auto& targets = game.targets();
  std::optional<Master> master_lp;
  std::size_t since_refresh = 0;
  for (;;) {
    options.deadline.check("column generation");
    MasterSolution master;
    if (!master_lp || since_refresh >= options.refresh_every) {
      master_lp.emplace(game, out.columns);
      master = master_lp->solve();
      since_refresh = 0;
    } else {
      try {
        master = master_lp->extend(out.columns.back());
        ++since_refresh;
      } catch (const NumericalError&) {
        // Warm starts can stall on a degenerate basis; start over cold.
        master_lp.emplace(game, out.columns);
        master = master_lp->solve();
        since_refresh = 0;
      }
    }
    out.value = master.value;
    out.weights = master.weights;
    if (out.iterations >= options.max_iterations) return out;
    ++out.iterations;

    Matrix<double> d(game.k(), game.n());
    double constant = 0.0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const double y = master.target_duals[t];
      if (y == 0.0) continue;
      constant += y * targets[t].u_undef;
      const double gain = targets[t].u_def - targets[t].u_undef;
      for (const WeightedCell& wc : targets[t].cells) d(wc.cell.row, wc.cell.col) += y * gain * wc.weight;
    }
    PureStrategy next = oracle(d, master.convexity_dual - constant + options.tolerance);
    check_dimensions(game, next.values.rows(), next.values.cols());
    double dx = 0.0;
    auto xf = next.values.flat();
    auto df = d.flat();
    for (std::size_t c = 0; c < xf.size(); ++c) dx += df[c] * xf[c];
    const double reduced = constant + dx - master.convexity_dual;
    if (reduced <= options.tolerance) {
      out.converged = true;
      return out;
    }
    if (std::find(out.columns.begin(), out.columns.end(), next) != out.columns.end()) return out;
    out.columns.push_back(std::move(next));
  }
}

ColumnGenerationResult fams_column_generation(const FamsInstance& inst, const FamsCgOptions& options) {
  const AraGame game = encode_fams(inst);
  DbrOptions dbr;
  dbr.node_cap = options.node_cap;
  dbr.deadline = options.deadline;
  ColumnGenerationOptions cg;
  cg.tolerance = options.tolerance;
  cg.max_iterations = options.max_iterations;
  cg.deadline = options.deadline;
  auto oracle = [&](const Matrix<double>& d, double threshold) {
    DbrOptions o = dbr;
    o.improve_over = threshold;
    return fams_dbr(inst, d, o).strategy;
  };
  return column_generation(game, oracle, {}, cg);
}

}  // namespace ara
