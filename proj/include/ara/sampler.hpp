#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ara/game.hpp"
#include "ara/marginal.hpp"
#include "ara/rng.hpp"

namespace ara {

using IntMatrix = Matrix<std::int32_t>;

// A game whose equality constraints partition the matrix cells and whose
// other constraints all have lower bound 0. When the source game had row
// inequalities instead of equalities, one slack column was appended: cell
// (i, source_cols) holds the unallocated amount of asset i.
struct Pe0Form {
  AraGame source;
  AraGame game;
  std::vector<std::size_t> equalities;    // indices into game.constraints()
  std::vector<std::size_t> inequalities;  // indices into game.constraints()
  std::size_t source_cols = 0;

  bool has_slack() const { return game.n() != source_cols; }
  const AssignmentConstraint& equality(std::size_t i) const { return game.constraints()[equalities[i]]; }
  const AssignmentConstraint& inequality(std::size_t i) const { return game.constraints()[inequalities[i]]; }
};

// Rewrites game into PE0 form. A game that already is one comes back with
// the same matrix and constraints. Throws StructuralError naming the first
// overlapping or uncovered cell otherwise.
Pe0Form to_pe0(const AraGame& game);

// Marginal of the source game extended with slack values when pe0 has a
// slack column.
Matrix<double> lift_marginal(const Pe0Form& pe0, const Matrix<double>& x_m);

// Drops the slack column.
PureStrategy strip_slack(const Pe0Form& pe0, const IntMatrix& x);

// Comb rounding of one equality group with marks at z, z+1, ...; cells are
// packed in the order given. values must sum to an integer within 1e-6.
std::vector<std::int32_t> comb_round(std::span<const double> values, double z);

// Comb sampling of equality s with one fresh uniform draw. Cells are packed
// in ascending (row, col) order; the result lists each distinct cell of s
// once, in that order.
std::vector<std::pair<Cell, std::int32_t>> comb_sample(const Matrix<double>& x_m,
                                                       const AssignmentConstraint& s, Rng& rng);

// Domain repair steps run after comb sampling. fix_inequalities may only
// lower cells; fix_equalities may only raise them and returns nullopt when it
// cannot restore every equality.
class DomainFixer {
 public:
  virtual ~DomainFixer() = default;
  virtual IntMatrix fix_inequalities(IntMatrix x, const Pe0Form& pe0, Rng& rng) const = 0;
  virtual std::optional<IntMatrix> fix_equalities(IntMatrix x, const Pe0Form& pe0, Rng& rng) const = 0;
};

inline constexpr std::size_t kDefaultRetryCap = 100;

// One pass of comb sampling and repair. Exposed so callers can inspect the
// intermediate matrices.
struct PipelineTrace {
  IntMatrix combed;
  IntMatrix after_inequalities;
  std::optional<IntMatrix> after_equalities;
  bool valid = false;
};

PipelineTrace run_pipeline(const Pe0Form& pe0, const IntMatrix& combed, const DomainFixer& fixer, Rng& rng);

// Prepared sampler over a fixed marginal solution.
class PureSampler {
 public:
  PureSampler(const MarginalSolution& ms, const Pe0Form& pe0, const DomainFixer& fixer,
              std::size_t retry_cap = kDefaultRetryCap);

  IntMatrix comb(Rng& rng) const;

  // Returns a pure strategy of the source game. failures, when given, is
  // incremented once per rejected attempt. Throws SamplingFailure after
  // retry_cap consecutive rejections.
  PureStrategy draw(Rng& rng, std::size_t* failures = nullptr) const;

  const Matrix<double>& lifted() const { return lifted_; }
  const Pe0Form& pe0() const { return pe0_; }

 private:
  const Pe0Form& pe0_;
  const DomainFixer& fixer_;
  std::size_t retry_cap_;
  Matrix<double> lifted_;
  std::vector<std::vector<Cell>> comb_cells_;  // per equality, ascending
  std::vector<std::vector<double>> comb_values_;
};

PureStrategy sample_pure(const MarginalSolution& ms, const Pe0Form& pe0, const DomainFixer& fixer, Rng& rng,
                         std::size_t retry_cap = kDefaultRetryCap, std::size_t* failures = nullptr);

struct MixedEstimate {
  MixedStrategyEstimate estimate;
  double value = 0.0;
  std::size_t failures = 0;
};

// Draws m pure strategies, averages them cell-wise and evaluates the game
// value of the average on the source game.
MixedEstimate estimate_mixed(const MarginalSolution& ms, const Pe0Form& pe0, const DomainFixer& fixer, Rng& rng,
                             std::size_t m, std::size_t retry_cap = kDefaultRetryCap);

// Cell-wise mean of pure strategies.
Matrix<double> average(std::span<const PureStrategy> samples);

}  // namespace ara
