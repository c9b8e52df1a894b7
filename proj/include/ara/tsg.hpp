#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ara/game.hpp"
#include "ara/sampler.hpp"

namespace ara {

struct TsgResource {
  std::string id;
  std::int64_t capacity = 0;
};

struct TsgTeam {
  std::string id;
  std::vector<std::string> members;  // resource ids; repeats consume capacity again
  double effectiveness = 0.0;
};

struct TsgCategory {
  std::string id;
  std::string risk;
  std::string flight;
  std::int64_t passengers = 1;
  double u_def = 0.0;
  double u_undef = 0.0;
};

struct TsgRisk {
  std::string id;
  double probability = 0.0;
};

struct TsgInstance {
  std::vector<TsgResource> resources;
  std::vector<TsgTeam> teams;
  std::vector<TsgCategory> categories;
  std::vector<TsgRisk> risks;
  std::map<std::string, std::string> metadata;

  // Throws InvalidGameError when an invariant fails, including the
  // necessary condition that the teams can screen every passenger.
  void validate() const;

  std::size_t resource_index(const std::string& id) const;
  // How many units of resource r one screening by team t consumes.
  std::int64_t multiplicity(std::size_t team, std::size_t resource) const;
};

// Teams are rows, categories are columns. Constraints: one x[S_r] <= C_r per
// resource used by some team (cells repeated per use), then one equality
// sum_i x_ij = N_j per category. Category j is a target with weights
// E_i / N_j; each risk level is an adversary type over its categories.
AraGame encode_tsg(const TsgInstance& inst);

// Repair for games whose pe0 equalities are passenger counts and whose
// inequalities are resource capacities. Works from the pe0 structure alone.
class TsgFixer final : public DomainFixer {
 public:
  // Repeatedly takes the resource with the largest absolute excess (lowest
  // index on ties) and removes single units until it fits, preferring cells
  // of larger categories, then lower column, then lower row.
  IntMatrix fix_inequalities(IntMatrix x, const Pe0Form& pe0, Rng& rng) const override;

  // Fills deficits category by category in ascending passenger count, one
  // unit at a time, using the team with the least slack among those that
  // still fit in every member resource. nullopt when no team fits.
  std::optional<IntMatrix> fix_equalities(IntMatrix x, const Pe0Form& pe0, Rng& rng) const override;
};

struct DetectionRatio {
  std::vector<double> per_target;  // coverage(after) / coverage(before), 1 when before is 0
  double min = 1.0;
};

template <typename A, typename B>
DetectionRatio detection_ratio(const AraGame& game, const Matrix<A>& before, const Matrix<B>& after) {
  DetectionRatio out;
  out.per_target.resize(game.targets().size(), 1.0);
  for (std::size_t t = 0; t < game.targets().size(); ++t) {
    const double b = coverage(game, before, t);
    const double a = coverage(game, after, t);
    out.per_target[t] = b > 0.0 ? a / b : 1.0;
    out.min = std::min(out.min, out.per_target[t]);
  }
  return out;
}

inline DetectionRatio tsg_detection_ratio(const Matrix<double>& before, const Matrix<double>& after,
                                          const AraGame& game) {
  return detection_ratio(game, before, after);
}

// 1 / ratio, infinite when the ratio is 0.
inline double c_measured(double min_ratio) {
  return min_ratio > 0.0 ? 1.0 / min_ratio : std::numeric_limits<double>::infinity();
}

}  // namespace ara
