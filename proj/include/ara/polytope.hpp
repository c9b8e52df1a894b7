#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ara/game.hpp"
#include "ara/lp.hpp"

namespace ara {

// Adds one LP variable per matrix cell (index = row * n + col, bounds
// [0, inf)) followed by the rows of every assignment constraint. Equalities
// become one eq row; other constraints a le row plus a ge row when the lower
// bound is positive. Returns, per added LP row, the index of the constraint
// it came from.
std::vector<std::size_t> add_marginal_polytope(lp::LinearProgram& lp, std::size_t k, std::size_t n,
                                               std::span<const AssignmentConstraint> constraints);

}  // namespace ara
