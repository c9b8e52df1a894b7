#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ara/errors.hpp"
#include "ara/matrix.hpp"

namespace ara {

inline constexpr double kMarginalTolerance = 1e-7;

struct Cell {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  auto operator<=>(const Cell&) const = default;
};

// n_S <= x[S] <= N_S. A cell listed twice counts twice in x[S], which is how
// a team that uses the same resource twice consumes two units of capacity.
struct AssignmentConstraint {
  std::vector<Cell> cells;
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  bool is_equality() const { return lower == upper; }
};

struct WeightedCell {
  Cell cell;
  double weight = 1.0;
};

struct Target {
  std::string id;
  std::vector<WeightedCell> cells;
  double u_def = 0.0;    // defender utility when the attack is defended
  double u_undef = 0.0;  // defender utility when it is not
};

struct AdversaryType {
  std::string id;
  double probability = 1.0;
  std::vector<std::string> targets;
};

struct GameOptions {
  // Targets allowed per matrix cell.
  std::size_t target_cap_factor = 64;
  // Verify sum_T w x <= 1 over the marginal polytope for every target.
  bool check_weights = true;
};

// The abstract adversarial randomized allocation game. Immutable once built;
// the constructor validates every structural invariant and throws
// InvalidGameError on the first violation.
class AraGame {
 public:
  AraGame(std::size_t k, std::size_t n, std::vector<AssignmentConstraint> constraints,
          std::vector<Target> targets, std::vector<AdversaryType> adversary_types = {},
          GameOptions options = {});

  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }
  std::size_t cell_count() const { return k_ * n_; }
  std::size_t flat(Cell c) const { return static_cast<std::size_t>(c.row) * n_ + c.col; }

  const std::vector<AssignmentConstraint>& constraints() const { return constraints_; }
  const std::vector<Target>& targets() const { return targets_; }
  const std::vector<AdversaryType>& adversary_types() const { return types_; }
  const GameOptions& options() const { return options_; }

  // Target indices attacked by each adversary type, parallel to adversary_types().
  const std::vector<std::vector<std::size_t>>& type_targets() const { return type_targets_; }

  std::size_t target_index(std::string_view id) const;
  bool has_target(std::string_view id) const;

 private:
  void validate_structure();
  void validate_weights() const;

  std::size_t k_;
  std::size_t n_;
  std::vector<AssignmentConstraint> constraints_;
  std::vector<Target> targets_;
  std::vector<AdversaryType> types_;
  GameOptions options_;
  std::vector<std::vector<std::size_t>> type_targets_;
  std::unordered_map<std::string, std::size_t> target_ids_;
};

struct MarginalStrategy {
  Matrix<double> values;
};

struct PureStrategy {
  Matrix<std::int32_t> values;

  bool operator==(const PureStrategy&) const = default;
};

struct MixedStrategyEstimate {
  std::vector<PureStrategy> samples;
  Matrix<double> mean;
};

void check_dimensions(const AraGame& game, std::size_t rows, std::size_t cols);

template <typename T>
double constraint_sum(const AraGame& game, const Matrix<T>& x, const AssignmentConstraint& s) {
  double sum = 0.0;
  auto flat = x.flat();
  for (const Cell& c : s.cells) sum += static_cast<double>(flat[game.flat(c)]);
  return sum;
}

// c_t = sum_{(i,j) in T} w_ij x_ij, unclamped.
template <typename T>
double coverage(const AraGame& game, const Matrix<T>& x, std::size_t target) {
  check_dimensions(game, x.rows(), x.cols());
  if (target >= game.targets().size()) throw Error("target index out of range");
  double c = 0.0;
  auto flat = x.flat();
  for (const WeightedCell& wc : game.targets()[target].cells)
    c += wc.weight * static_cast<double>(flat[game.flat(wc.cell)]);
  return c;
}

template <typename T>
double coverage(const AraGame& game, const Matrix<T>& x, std::string_view target_id) {
  return coverage(game, x, game.target_index(target_id));
}

// Coverage clamped to [0, 1] for display.
double reported_coverage(double raw);

inline double utility_at_coverage(const Target& t, double c) {
  return c * t.u_def + (1.0 - c) * t.u_undef;
}

template <typename T>
double defender_utility(const AraGame& game, const Matrix<T>& x, std::size_t target) {
  return utility_at_coverage(game.targets()[target], coverage(game, x, target));
}

template <typename T>
double defender_utility(const AraGame& game, const Matrix<T>& x, std::string_view target_id) {
  return defender_utility(game, x, game.target_index(target_id));
}

// Lies strictly below U_d(x, t) for every x >= 0 and every target of the
// type, since coverage only moves utility up from u_undef.
inline double utility_floor(const AraGame& game, std::size_t type) {
  double lo = 0.0;
  for (std::size_t t : game.type_targets()[type]) lo = std::min(lo, game.targets()[t].u_undef);
  return lo - 1.0;
}

// sum_theta p_theta * min_{t in T_theta} U_d(x, t). Zero-probability types
// contribute nothing.
template <typename T>
double game_value(const AraGame& game, const Matrix<T>& x) {
  check_dimensions(game, x.rows(), x.cols());
  double value = 0.0;
  const auto& types = game.adversary_types();
  for (std::size_t th = 0; th < types.size(); ++th) {
    if (types[th].probability <= 0.0) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t t : game.type_targets()[th])
      worst = std::min(worst, defender_utility(game, x, t));
    value += types[th].probability * worst;
  }
  return value;
}

inline double game_value(const AraGame& game, const MarginalStrategy& x) {
  return game_value(game, x.values);
}
inline double game_value(const AraGame& game, const PureStrategy& p) {
  return game_value(game, p.values);
}

struct Violation {
  enum class Kind { non_integral, negative, below_lower, above_upper };
  Kind kind;
  std::size_t constraint = 0;  // meaningful for below_lower / above_upper
  Cell cell{};                 // meaningful for non_integral / negative
  double achieved = 0.0;
};

struct ValidityReport {
  bool valid = true;
  std::vector<Violation> violations;

  explicit operator bool() const { return valid; }
};

std::string describe(const AraGame& game, const Violation& v);

// Exact integer check of every assignment constraint.
ValidityReport is_valid_pure(const AraGame& game, const PureStrategy& p);

// Same as is_valid_pure but for a real matrix, which must also be integral.
ValidityReport check_pure(const AraGame& game, const Matrix<double>& x);

// Membership in the marginal polytope within eps.
ValidityReport check_marginal(const AraGame& game, const Matrix<double>& x,
                              double eps = kMarginalTolerance);

// S and S' cross when they intersect and neither contains the other.
bool constraints_cross(const AssignmentConstraint& a, const AssignmentConstraint& b);

struct ImplementabilityResult {
  bool bi_hierarchical = true;
  // Part (0 or 1) of every constraint when bi_hierarchical.
  std::vector<int> partition;
  // Constraint indices forming an odd cycle of crossings otherwise.
  std::vector<std::size_t> odd_cycle;
};

ImplementabilityResult check_implementability(std::span<const AssignmentConstraint> constraints);
ImplementabilityResult check_implementability(const AraGame& game);

}  // namespace ara
