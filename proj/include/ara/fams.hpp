#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ara/column_generation.hpp"
#include "ara/deadline.hpp"
#include "ara/game.hpp"
#include "ara/sampler.hpp"

namespace ara {

struct FamsSchedule {
  std::string id;
  std::vector<std::string> flights;
};

struct FamsFlight {
  std::string id;
  double u_def = 0.0;
  double u_undef = 0.0;
};

struct FamsInstance {
  std::size_t marshals = 0;
  std::vector<FamsSchedule> schedules;
  std::vector<FamsFlight> flights;
  std::vector<std::pair<std::size_t, std::size_t>> forbidden;  // (marshal, schedule)
  std::map<std::string, std::string> metadata;

  // Throws InvalidGameError on empty schedules, unknown or repeated flight
  // ids, out-of-range forbidden pairs or u_def < u_undef.
  void validate() const;

  // Schedule indices per flight, in schedule order.
  std::vector<std::vector<std::size_t>> schedules_of_flight() const;
  std::size_t flight_index(const std::string& id) const;
};

// Marshals are rows, schedules are columns. Constraints are laid out as: one
// row constraint sum_j x_ij <= 1 per marshal, then x_ij = 0 per forbidden
// pair, then x[T_f] <= 1 per flight that appears in some schedule. Each
// flight is a target over its cells with unit weights.
AraGame encode_fams(const FamsInstance& inst);

// Largest number of flights sharing a schedule with any one flight,
// counting the flight itself.
std::size_t fams_cosched_count(const FamsInstance& inst);

// Repair for games whose pe0 inequalities with a positive bound are
// target-allocation constraints over schedule columns. Allocated schedules
// touching the most violated flights and no satisfied flight are released
// first; when none qualifies a schedule of the worst flight is released at
// random. fix_equalities refills the slack column.
class FamsFixer final : public DomainFixer {
 public:
  IntMatrix fix_inequalities(IntMatrix x, const Pe0Form& pe0, Rng& rng) const override;
  std::optional<IntMatrix> fix_equalities(IntMatrix x, const Pe0Form& pe0, Rng& rng) const override;
};

struct DbrOptions {
  std::size_t node_cap = 10'000'000;
  Deadline deadline;
  // When set, any strategy worth more than this is good enough: the greedy
  // strategy is returned if it qualifies, and otherwise the search only
  // looks for strategies above it, returning the greedy one if none exists.
  std::optional<double> improve_over;
};

struct DbrResult {
  PureStrategy strategy;
  double value = 0.0;
  std::size_t nodes = 0;
};

// max d . x over pure strategies by depth-first search over marshals. d is
// marshals x schedules; cells with d <= 0 are never used. Throws
// CapExceededError past options.node_cap.
DbrResult fams_dbr(const FamsInstance& inst, const Matrix<double>& d, const DbrOptions& options = {});

struct FamsCgOptions {
  double tolerance = 1e-6;
  std::size_t max_iterations = 100'000;
  std::size_t node_cap = 10'000'000;
  Deadline deadline;
};

ColumnGenerationResult fams_column_generation(const FamsInstance& inst, const FamsCgOptions& options = {});

}  // namespace ara
