#include "ara/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ara/lp.hpp"
#include "ara/rng.hpp"

namespace ara {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

FamsInstance gen_fams(const FamsGenConfig& cfg) {
  if (cfg.flights == 0 || cfg.schedules == 0 || cfg.marshals == 0 || cfg.targets_per_schedule == 0)
    throw InvalidGameError("FAMS generator sizes must be at least 1");
  if (cfg.targets_per_schedule > cfg.flights)
    throw InvalidGameError("schedules cannot cover " + std::to_string(cfg.targets_per_schedule) + " of " +
                           std::to_string(cfg.flights) + " flights");
  Rng rng(cfg.seed);
  FamsInstance inst;
  inst.marshals = cfg.marshals;
  for (std::size_t f = 0; f < cfg.flights; ++f)
    inst.flights.push_back({"f" + std::to_string(f), -1.0, static_cast<double>(uniform_int(rng, -10, -2))});
  std::vector<std::size_t> pool(cfg.flights);
  for (std::size_t s = 0; s < cfg.schedules; ++s) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    FamsSchedule sched{"s" + std::to_string(s), {}};
    for (std::size_t p = 0; p < cfg.targets_per_schedule; ++p) {
      const auto q = static_cast<std::size_t>(uniform_int(rng, static_cast<std::int64_t>(p),
                                                          static_cast<std::int64_t>(cfg.flights) - 1));
      std::swap(pool[p], pool[q]);
      sched.flights.push_back(inst.flights[pool[p]].id);
    }
    inst.schedules.push_back(std::move(sched));
  }
  inst.metadata = {{"generator", "fams"},
                   {"seed", std::to_string(cfg.seed)},
                   {"flights", std::to_string(cfg.flights)},
                   {"schedules", std::to_string(cfg.schedules)},
                   {"marshals", std::to_string(cfg.marshals)},
                   {"targets_per_schedule", std::to_string(cfg.targets_per_schedule)}};
  return inst;
}

double tsg_screening_capacity(const TsgInstance& inst) {
  lp::LinearProgram prog;
  for (std::size_t t = 0; t < inst.teams.size(); ++t) prog.add_variable(1.0);
  for (std::size_t r = 0; r < inst.resources.size(); ++r) {
    std::vector<lp::Term> terms;
    for (std::size_t t = 0; t < inst.teams.size(); ++t)
      if (const std::int64_t m = inst.multiplicity(t, r); m > 0) terms.push_back({t, static_cast<double>(m)});
    if (!terms.empty()) prog.add_row(std::move(terms), lp::Relation::le, static_cast<double>(inst.resources[r].capacity));
  }
  const lp::LpSolution sol = lp::solve_lp(prog);
  if (sol.status == lp::Status::unbounded) return std::numeric_limits<double>::infinity();
  if (sol.status != lp::Status::optimal) throw NumericalError("screening capacity LP failed");
  return sol.objective_value;
}

TsgInstance gen_tsg(const TsgGenConfig& cfg) {
  if (cfg.risk_levels == 0 || cfg.resource_types == 0 || cfg.team_types == 0 || cfg.flights == 0)
    throw InvalidGameError("TSG generator sizes must be at least 1");
  if (cfg.min_passengers < 1 || cfg.max_passengers < cfg.min_passengers)
    throw InvalidGameError("TSG generator passenger range is empty");
  if (!(cfg.load > 0.0 && cfg.load <= 1.0)) throw InvalidGameError("TSG generator load must lie in (0, 1]");
  if (cfg.max_base_capacity < 1) throw InvalidGameError("TSG generator base capacity must be at least 1");
  Rng rng(cfg.seed);
  TsgInstance inst;
  for (std::size_t r = 0; r < cfg.resource_types; ++r) inst.resources.push_back({"r" + std::to_string(r), 0});

  for (std::size_t t = 0; t < cfg.team_types; ++t) {
    TsgTeam team{"t" + std::to_string(t), {}, 0.0};
    // Non-empty subset: one guaranteed member plus independent coin flips.
    const auto anchor = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(cfg.resource_types) - 1));
    for (std::size_t r = 0; r < cfg.resource_types; ++r)
      if (r == anchor || uniform01(rng) < 0.3) team.members.push_back(inst.resources[r].id);
    team.effectiveness = cfg.min_effectiveness + (cfg.max_effectiveness - cfg.min_effectiveness) * uniform01(rng);
    inst.teams.push_back(std::move(team));
  }

  const std::size_t levels = cfg.risk_levels;
  const double weight_total = static_cast<double>(levels * (levels + 1)) / 2.0;
  double assigned = 0.0;
  for (std::size_t r = 0; r < levels; ++r) {
    double p = static_cast<double>(levels - r) / weight_total;
    if (r + 1 == levels) p = 1.0 - assigned;
    assigned += p;
    inst.risks.push_back({"R" + std::to_string(r), p});
  }

  std::int64_t total = 0;
  for (std::size_t r = 0; r < levels; ++r) {
    const double shrink = static_cast<double>(r) / static_cast<double>(levels);
    const auto hi = std::max<std::int64_t>(
        cfg.min_passengers,
        static_cast<std::int64_t>(std::llround(static_cast<double>(cfg.max_passengers) -
                                               static_cast<double>(cfg.max_passengers - cfg.min_passengers) * shrink)));
    for (std::size_t f = 0; f < cfg.flights; ++f) {
      TsgCategory c;
      c.id = "R" + std::to_string(r) + "F" + std::to_string(f);
      c.risk = inst.risks[r].id;
      c.flight = "F" + std::to_string(f);
      c.passengers = uniform_int(rng, cfg.min_passengers, hi);
      c.u_def = -1.0;
      c.u_undef = static_cast<double>(uniform_int(rng, -10, -2));
      total += c.passengers;
      inst.categories.push_back(std::move(c));
    }
  }

  std::vector<std::int64_t> base(cfg.resource_types);
  for (auto& b : base) b = uniform_int(rng, 1, cfg.max_base_capacity);
  for (std::size_t r = 0; r < base.size(); ++r) inst.resources[r].capacity = base[r];
  const double reach = tsg_screening_capacity(inst);
  const double scale = static_cast<double>(total) / (cfg.load * reach);
  for (std::size_t r = 0; r < base.size(); ++r)
    inst.resources[r].capacity = static_cast<std::int64_t>(std::ceil(static_cast<double>(base[r]) * scale));

  inst.metadata = {{"generator", "tsg"},
                   {"seed", std::to_string(cfg.seed)},
                   {"risk_levels", std::to_string(cfg.risk_levels)},
                   {"resource_types", std::to_string(cfg.resource_types)},
                   {"team_types", std::to_string(cfg.team_types)},
                   {"flights", std::to_string(cfg.flights)},
                   {"passengers", std::to_string(cfg.min_passengers) + ".." + std::to_string(cfg.max_passengers)},
                   {"effectiveness", fmt(cfg.min_effectiveness) + ".." + fmt(cfg.max_effectiveness)},
                   {"load", fmt(cfg.load)}};
  inst.validate();
  return inst;
}

}  // namespace ara
