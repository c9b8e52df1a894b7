#include "ara/polytope.hpp"

#include <stdexcept>

namespace ara {

std::vector<std::size_t> add_marginal_polytope(lp::LinearProgram& lp, std::size_t k, std::size_t n,
                                               std::span<const AssignmentConstraint> constraints) {
  if (lp.num_vars() != 0 || !lp.rows.empty())
    throw std::logic_error("add_marginal_polytope expects an empty program");
  for (std::size_t c = 0; c < k * n; ++c) lp.add_variable(0.0);
  std::vector<std::size_t> owner;
  for (std::size_t s = 0; s < constraints.size(); ++s) {
    const AssignmentConstraint& con = constraints[s];
    std::vector<lp::Term> terms;
    terms.reserve(con.cells.size());
    for (const Cell& c : con.cells) terms.push_back({static_cast<std::size_t>(c.row) * n + c.col, 1.0});
    if (con.is_equality()) {
      lp.add_row(terms, lp::Relation::eq, static_cast<double>(con.upper));
      owner.push_back(s);
      continue;
    }
    if (con.lower > 0) {
      lp.add_row(terms, lp::Relation::ge, static_cast<double>(con.lower));
      owner.push_back(s);
    }
    lp.add_row(std::move(terms), lp::Relation::le, static_cast<double>(con.upper));
    owner.push_back(s);
  }
  return owner;
}

}  // namespace ara
