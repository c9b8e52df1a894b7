#pragma once

#include <cstddef>
#include <cstdint>

#include "ara/fams.hpp"
#include "ara/tsg.hpp"

namespace ara {

struct FamsGenConfig {
  std::uint64_t seed = 0;
  std::size_t flights = 50;
  std::size_t schedules = 100;
  std::size_t marshals = 10;
  std::size_t targets_per_schedule = 5;
};

// u_def = -1 and u_undef uniform in {-10, ..., -2} per flight; each schedule
// covers targets_per_schedule distinct flights drawn uniformly.
FamsInstance gen_fams(const FamsGenConfig& cfg);

struct TsgGenConfig {
  std::uint64_t seed = 0;
  std::size_t risk_levels = 6;
  std::size_t resource_types = 8;
  std::size_t team_types = 20;
  std::size_t flights = 6;
  std::int64_t min_passengers = 5;
  std::int64_t max_passengers = 50;
  double min_effectiveness = 0.1;
  double max_effectiveness = 0.95;
  // Total passengers as a fraction of the most screenings the capacities allow.
  double load = 0.85;
  std::int64_t max_base_capacity = 10;
};

// Teams are random non-empty resource subsets. Categories are every (risk,
// flight) pair; higher risk indices are rarer (p proportional to R - r) and
// draw from a lower passenger maximum. Capacities start from random base
// values and are scaled up until the passengers fit within cfg.load of the
// screening capacity.
TsgInstance gen_tsg(const TsgGenConfig& cfg);

// Most screenings the resource capacities allow: max sum_i y_i subject to
// sum_i m_ir y_i <= C_r, y >= 0.
double tsg_screening_capacity(const TsgInstance& inst);

}  // namespace ara
