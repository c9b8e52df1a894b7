#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ara/deadline.hpp"
#include "ara/game.hpp"

namespace ara {

struct ColumnGenerationOptions {
  double tolerance = 1e-6;
  std::size_t max_iterations = 100'000;
  // Columns added to the warm-started master before it is rebuilt.
  std::size_t refresh_every = 64;
  Deadline deadline;
};

struct ColumnGenerationResult {
  double value = 0.0;
  std::vector<PureStrategy> columns;
  std::vector<double> weights;  // parallel to columns
  std::size_t iterations = 0;
  bool converged = false;
};

// Pricing step for cell weights d (k x n). Must return a pure strategy with
// d . x > threshold when one exists; otherwise any pure strategy. Returning
// the exact maximiser of d . x is always acceptable.
using PricingOracle = std::function<PureStrategy(const Matrix<double>& d, double threshold)>;

// Restricted maximin master over a growing column pool. Starts from initial
// (all-zero matrix when empty). Each round prices with
// d_ij = sum_t y_t (U_s - U_u) w_ij from the master duals y and stops once
// the oracle finds no column with positive reduced cost, returns a column
// already in the pool, or max_iterations is reached.
ColumnGenerationResult column_generation(const AraGame& game, const PricingOracle& oracle,
                                         std::vector<PureStrategy> initial = {},
                                         const ColumnGenerationOptions& options = {});

struct MasterSolution {
  double value = 0.0;
  std::vector<double> weights;
  std::vector<double> target_duals;  // per target, 0 for zero-probability types
  double convexity_dual = 0.0;
};

// Master LP alone: max sum p_theta z_theta s.t. z_theta <= sum_m a_m U(P_m, t),
// sum a = 1, a >= 0.
MasterSolution solve_master(const AraGame& game, const std::vector<PureStrategy>& columns);

}  // namespace ara
