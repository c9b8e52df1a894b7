#include "ara/marginal.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "ara/polytope.hpp"

namespace ara {

MarginalSolution solve_marginal(const AraGame& game, const lp::SimplexOptions& options) {
  lp::LinearProgram prog;
  const std::vector<std::size_t> owner =
      add_marginal_polytope(prog, game.k(), game.n(), game.constraints());

  const auto& types = game.adversary_types();
  std::vector<std::size_t> z_var(types.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t th = 0; th < types.size(); ++th) {
    if (types[th].probability <= 0.0) continue;
    z_var[th] = prog.add_variable(types[th].probability, utility_floor(game, th), lp::kInf);
    for (std::size_t t : game.type_targets()[th]) {
      // z - sum w (U_s - U_u) x <= U_u
      const Target& tg = game.targets()[t];
      const double gain = tg.u_def - tg.u_undef;
      std::vector<lp::Term> terms{{z_var[th], 1.0}};
      for (const WeightedCell& wc : tg.cells)
        if (wc.weight * gain != 0.0) terms.push_back({game.flat(wc.cell), -wc.weight * gain});
      prog.add_row(std::move(terms), lp::Relation::le, tg.u_undef);
    }
  }

  const lp::LpSolution sol = lp::solve_lp(prog, options);
  if (sol.status == lp::Status::infeasible) {
    std::set<std::size_t> cons;
    for (std::size_t r : sol.infeasible_rows)
      if (r < owner.size()) cons.insert(owner[r]);
    std::ostringstream os;
    os << "marginal LP infeasible; unsatisfiable assignment constraints:";
    for (std::size_t c : cons) os << ' ' << c;
    throw InfeasibleError(os.str());
  }
  if (sol.status == lp::Status::unbounded) throw NumericalError("marginal LP reported unbounded");

  MarginalSolution out;
  out.x_m.values = Matrix<double>(game.k(), game.n());
  auto flat = out.x_m.values.flat();
  for (std::size_t c = 0; c < game.cell_count(); ++c) flat[c] = std::max(0.0, sol.values[c]);
  out.upper_bound = sol.objective_value;
  out.per_type_values.resize(types.size());
  for (std::size_t th = 0; th < types.size(); ++th) {
    if (z_var[th] != std::numeric_limits<std::size_t>::max()) {
      out.per_type_values[th] = sol.values[z_var[th]];
      continue;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t t : game.type_targets()[th])
      worst = std::min(worst, defender_utility(game, out.x_m.values, t));
    out.per_type_values[th] = game.type_targets()[th].empty() ? 0.0 : worst;
  }
  return out;
}

}  // namespace ara
