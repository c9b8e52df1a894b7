#include "ara/exact.hpp"

#include <algorithm>
#include <limits>

#include "ara/column_generation.hpp"

namespace ara {

namespace {

class Enumerator {
 public:
  Enumerator(const AraGame& game, std::size_t cap, const Deadline& deadline)
      : game_(game), cap_(cap), deadline_(deadline), x_(game.k(), game.n()) {
    const auto& cons = game.constraints();
    const std::size_t cells = game.cell_count();
    uses_.resize(cells);
    for (std::size_t s = 0; s < cons.size(); ++s) {
      std::vector<std::size_t> flat;
      for (Cell c : cons[s].cells) flat.push_back(game.flat(c));
      std::sort(flat.begin(), flat.end());
      for (std::size_t a = 0; a < flat.size();) {
        std::size_t b = a;
        while (b < flat.size() && flat[b] == flat[a]) ++b;
        uses_[flat[a]].push_back({s, static_cast<std::int64_t>(b - a)});
        a = b;
      }
    }
    bound_.assign(cells, 0);
    for (std::size_t c = 0; c < cells; ++c) {
      if (uses_[c].empty())
        throw InvalidGameError("cannot enumerate: cell (" + std::to_string(c / game.n()) + "," +
                               std::to_string(c % game.n()) + ") is in no constraint");
      std::int64_t b = std::numeric_limits<std::int64_t>::max();
      for (auto [s, m] : uses_[c]) b = std::min(b, cons[s].upper / m);
      bound_[c] = b;
    }
    sum_.assign(cons.size(), 0);
    // Largest amount the cells not yet fixed can still add.
    reach_.assign(cons.size(), 0);
    for (std::size_t c = 0; c < cells; ++c)
      for (auto [s, m] : uses_[c]) reach_[s] += m * bound_[c];
  }

  EnumeratedStrategySet run() {
    dfs(0);
    return std::move(out_);
  }

 private:
  struct Use {
    std::size_t constraint;
    std::int64_t mult;
  };

  bool within_bounds(std::size_t c, bool* over) const {
    const auto& cons = game_.constraints();
    bool ok = true;
    for (auto [s, m] : uses_[c]) {
      (void)m;
      if (sum_[s] > cons[s].upper) *over = true;
      if (sum_[s] > cons[s].upper || sum_[s] + reach_[s] < cons[s].lower) ok = false;
    }
    return ok;
  }

  void dfs(std::size_t c) {
    if (out_.truncated) return;
    if ((++nodes_ & 0xffff) == 0) deadline_.check("pure strategy enumeration");
    if (c == game_.cell_count()) {
      if (out_.strategies.size() >= cap_) {
        out_.truncated = true;
        return;
      }
      out_.strategies.push_back(PureStrategy{x_});
      return;
    }
    auto flat = x_.flat();
    for (auto [s, m] : uses_[c]) reach_[s] -= m * bound_[c];
    std::int64_t placed = 0;
    for (std::int64_t v = 0; v <= bound_[c] && !out_.truncated; ++v) {
      if (v > 0) {
        for (auto [s, m] : uses_[c]) sum_[s] += m;
        placed = v;
      }
      flat[c] = static_cast<std::int32_t>(v);
      bool over = false;
      if (within_bounds(c, &over)) dfs(c + 1);
      if (over) break;  // larger values only overshoot further
    }
    for (auto [s, m] : uses_[c]) {
      sum_[s] -= m * placed;
      reach_[s] += m * bound_[c];
    }
    flat[c] = 0;
  }

  const AraGame& game_;
  std::size_t cap_;
  const Deadline& deadline_;
  Matrix<std::int32_t> x_;
  std::vector<std::vector<Use>> uses_;
  std::vector<std::int64_t> bound_;
  std::vector<std::int64_t> sum_;
  std::vector<std::int64_t> reach_;
  EnumeratedStrategySet out_;
  std::size_t nodes_ = 0;
};

}  // namespace

EnumeratedStrategySet enumerate_pure(const AraGame& game, std::size_t cap, const Deadline& deadline) {
  if (cap == 0) throw Error("enumeration cap must be at least 1");
  return Enumerator(game, cap, deadline).run();
}

ExactSolution exact_maximin(const AraGame& game, const EnumeratedStrategySet& set) {
  if (set.truncated) throw Error("exact maximin needs the full strategy list; enumeration was truncated");
  if (set.strategies.empty()) throw InfeasibleError("game has no pure strategy");
  const MasterSolution m = solve_master(game, set.strategies);
  return ExactSolution{m.value, m.weights};
}

}  // namespace ara
