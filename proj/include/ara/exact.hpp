#pragma once

#include <cstddef>
#include <vector>

#include "ara/deadline.hpp"
#include "ara/game.hpp"

namespace ara {

struct EnumeratedStrategySet {
  std::vector<PureStrategy> strategies;
  bool truncated = false;  // false means the list is every pure strategy
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// Depth-first search over cells in row-major order, pruning on running
// constraint sums against both bounds. Every cell must belong to some
// constraint (otherwise it is unbounded). Stops with truncated = true once
// cap strategies are found and another exists.
EnumeratedStrategySet enumerate_pure(const AraGame& game, std::size_t cap = kDefaultEnumerationCap,
                                     const Deadline& deadline = {});

struct ExactSolution {
  double value = 0.0;
  std::vector<double> weights;  // parallel to the input strategies
};

// Maximin LP over the given strategies. Throws Error on truncated input and
// InfeasibleError when there are no strategies.
ExactSolution exact_maximin(const AraGame& game, const EnumeratedStrategySet& set);

}  // namespace ara
