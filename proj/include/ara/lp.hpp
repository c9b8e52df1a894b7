#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <vector>

namespace ara::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { le, eq, ge };

struct Term {
  std::size_t var;
  double coef;
};

struct Row {
  std::vector<Term> terms;  // repeated variables are summed
  Relation relation = Relation::le;
  double rhs = 0.0;
};

// maximize objective . x subject to rows and lower <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }

  std::size_t add_variable(double obj, double lo = 0.0, double hi = kInf) {
    objective.push_back(obj);
    lower.push_back(lo);
    upper.push_back(hi);
    return objective.size() - 1;
  }

  std::size_t add_row(std::vector<Term> terms, Relation rel, double rhs) {
    rows.push_back(Row{std::move(terms), rel, rhs});
    return rows.size() - 1;
  }
};

enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status s);

struct LpSolution {
  Status status = Status::infeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  // d objective / d rhs per row: >= 0 on le rows, <= 0 on ge rows.
  std::vector<double> duals;
  // Rows whose phase-one artificial stayed positive (infeasible only).
  std::vector<std::size_t> infeasible_rows;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  // 0 means 50 * (rows + cols) of the standard-form tableau.
  std::size_t iteration_cap = 0;
};

// Dense two-phase primal simplex. Entering column by largest reduced cost,
// falling back to Bland's rule after a run of degenerate pivots; ties are
// broken by lowest index so the result is a deterministic function of the
// input. Infeasible and unbounded are statuses; running past the iteration
// cap throws NumericalError.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

// Column generation support: keeps the final tableau of an optimal solve and
// re-optimises from that basis as variables in [0, inf) are appended. A new
// column lists (row index, coefficient) pairs in Term::var / Term::coef.
class IncrementalSimplex {
 public:
  explicit IncrementalSimplex(LinearProgram lp, const SimplexOptions& options = {});
  ~IncrementalSimplex();
  IncrementalSimplex(IncrementalSimplex&&) noexcept;
  IncrementalSimplex& operator=(IncrementalSimplex&&) noexcept;

  const LpSolution& solution() const;
  // Throws Error unless the current solution is optimal.
  const LpSolution& add_column(double objective, const std::vector<Term>& column);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ara::lp
