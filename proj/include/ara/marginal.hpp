#pragma once

#include <vector>

#include "ara/game.hpp"
#include "ara/lp.hpp"

namespace ara {

struct MarginalSolution {
  MarginalStrategy x_m;
  // Optimal marginal LP objective; an upper bound on the game value.
  double upper_bound = 0.0;
  // z_theta per adversary type, parallel to game.adversary_types(). For
  // zero-probability types this is the worst target utility under x_m.
  std::vector<double> per_type_values;
};

// Maximises sum_theta p_theta z_theta over the marginal polytope subject to
// z_theta <= U_d(x, t) for every t attacked by theta. Coverage is folded into
// the z rows instead of getting its own variables. Throws InfeasibleError
// naming the constraints the LP could not satisfy.
MarginalSolution solve_marginal(const AraGame& game, const lp::SimplexOptions& options = {});

}  // namespace ara
