#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

#include "ara/fams.hpp"

namespace ara {

namespace {

class FlightSet {
 public:
  explicit FlightSet(std::size_t flights = 0) : words_((flights + 63) / 64, 0) {}

  void set(std::size_t f) { words_[f / 64] |= std::uint64_t{1} << (f % 64); }
  bool intersects(const FlightSet& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  void add(const FlightSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
  }
  void remove(const FlightSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Candidate {
  std::size_t schedule;
  double weight;
};

class DbrSearch {
 public:
  DbrSearch(const FamsInstance& inst, const Matrix<double>& d, const DbrOptions& options)
      : inst_(inst), options_(options), k_(inst.marshals), used_(inst.flights.size()) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t f = 0; f < inst.flights.size(); ++f) index.emplace(inst.flights[f].id, f);
    masks_.assign(inst.schedules.size(), FlightSet(inst.flights.size()));
    for (std::size_t s = 0; s < inst.schedules.size(); ++s)
      for (const std::string& f : inst.schedules[s].flights) masks_[s].set(index.at(f));

    std::set<std::pair<std::size_t, std::size_t>> forbidden(inst.forbidden.begin(), inst.forbidden.end());
    cands_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t s = 0; s < inst.schedules.size(); ++s) {
        const double w = d(i, s);
        if (!std::isfinite(w)) throw InvalidGameError("best-response weights must be finite");
        if (w < -1e-9) throw InvalidGameError("best-response weights must be non-negative");
        if (w > 0.0 && !forbidden.count({i, s})) cands_[i].push_back({s, w});
      }
      std::stable_sort(cands_[i].begin(), cands_[i].end(),
                       [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });
    }
    // Marshal i is equivalent to i-1 when both have the same options.
    same_as_prev_.assign(k_, 0);
    for (std::size_t i = 1; i < k_; ++i) {
      bool same = cands_[i].size() == cands_[i - 1].size();
      for (std::size_t c = 0; same && c < cands_[i].size(); ++c)
        same = cands_[i][c].schedule == cands_[i - 1][c].schedule && cands_[i][c].weight == cands_[i - 1][c].weight;
      same_as_prev_[i] = same;
    }
    pick_.assign(k_, kNone);
    schedule_used_.assign(inst.schedules.size(), 0);
  }

  DbrResult run() {
    greedy();
    const auto& bar = options_.improve_over;
    if (!bar || best_ <= *bar) {
      const std::vector<std::size_t> greedy_pick = best_pick_;
      const double greedy_value = best_;
      if (bar && *bar > best_) best_ = *bar;
      dfs(0, 0.0);
      if (bar && best_ == *bar && greedy_value < *bar) {
        best_ = greedy_value;
        best_pick_ = greedy_pick;
      }
    }
    DbrResult out;
    out.strategy.values = Matrix<std::int32_t>(k_, inst_.schedules.size());
    for (std::size_t i = 0; i < k_; ++i)
      if (best_pick_[i] != kNone) out.strategy.values(i, cands_[i][best_pick_[i]].schedule) = 1;
    out.value = best_;
    out.nodes = nodes_;
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool available(std::size_t s) const { return !schedule_used_[s] && !used_.intersects(masks_[s]); }

  void take(std::size_t s) {
    schedule_used_[s] = 1;
    used_.add(masks_[s]);
  }
  void release(std::size_t s) {
    schedule_used_[s] = 0;
    used_.remove(masks_[s]);
  }

  void greedy() {
    std::vector<std::size_t> taken;
    best_pick_.assign(k_, kNone);
    best_ = 0.0;
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t c = 0; c < cands_[i].size(); ++c)
        if (available(cands_[i][c].schedule)) {
          take(cands_[i][c].schedule);
          taken.push_back(cands_[i][c].schedule);
          best_pick_[i] = c;
          best_ += cands_[i][c].weight;
          break;
        }
    for (std::size_t s : taken) release(s);
  }

  // Sum over the remaining marshals of the best weights still available;
  // an equivalence group of r marshals takes its top r candidates. Marshals
  // continuing the group of i-1 only see candidates after its pick.
  double bound_from(std::size_t i) const {
    double total = 0.0;
    bool first = true;
    while (i < k_) {
      std::size_t r = 1;
      while (i + r < k_ && same_as_prev_[i + r]) ++r;
      std::size_t start = 0;
      if (first && same_as_prev_[i]) {
        if (pick_[i - 1] == kNone) {
          i += r;
          first = false;
          continue;
        }
        start = pick_[i - 1] + 1;
      }
      first = false;
      std::size_t got = 0;
      for (std::size_t c = start; c < cands_[i].size() && got < r; ++c) {
        if (!available(cands_[i][c].schedule)) continue;
        total += cands_[i][c].weight;
        ++got;
      }
      i += r;
    }
    return total;
  }

  void dfs(std::size_t i, double value) {
    if (++nodes_ > options_.node_cap)
      throw CapExceededError("best-response search passed " + std::to_string(options_.node_cap) +
                             " nodes; use fewer schedules or marshals for exact column generation");
    if ((nodes_ & 0xfff) == 0) options_.deadline.check("best-response search");
    if (i == k_) {
      if (value > best_ + 1e-12) {
        best_ = value;
        best_pick_ = pick_;
      }
      return;
    }
    if (value + bound_from(i) <= best_ + 1e-12) return;

    std::size_t start = 0;
    bool only_none = false;
    if (same_as_prev_[i]) {
      if (pick_[i - 1] == kNone)
        only_none = true;
      else
        start = pick_[i - 1] + 1;
    }
    if (!only_none) {
      for (std::size_t c = start; c < cands_[i].size(); ++c) {
        const std::size_t s = cands_[i][c].schedule;
        if (!available(s)) continue;
        take(s);
        pick_[i] = c;
        dfs(i + 1, value + cands_[i][c].weight);
        release(s);
      }
    }
    pick_[i] = kNone;
    dfs(i + 1, value);
  }

  const FamsInstance& inst_;
  const DbrOptions& options_;
  std::size_t k_;
  FlightSet used_;
  std::vector<FlightSet> masks_;
  std::vector<std::vector<Candidate>> cands_;
  std::vector<char> same_as_prev_;
  std::vector<char> schedule_used_;
  std::vector<std::size_t> pick_;
  std::vector<std::size_t> best_pick_;
  double best_ = 0.0;
  std::size_t nodes_ = 0;
};

}  // namespace

DbrResult fams_dbr(const FamsInstance& inst, const Matrix<double>& d, const DbrOptions& options) {
  inst.validate();
  if (d.rows() != inst.marshals || d.cols() != inst.schedules.size())
    throw InvalidGameError("best-response weights must be marshals x schedules");
  return DbrSearch(inst, d, options).run();
}

}  // namespace ara
