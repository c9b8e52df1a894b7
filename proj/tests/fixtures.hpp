#pragma once

#include <vector>

#include "ara/fams.hpp"
#include "ara/game.hpp"
#include "ara/tsg.hpp"

namespace fixtures {

// Three marshals, schedules S1 = {F1}, S2 = {F1, F2}, S3 = {F2}.
inline ara::FamsInstance fams_toy() {
  ara::FamsInstance inst;
  inst.marshals = 3;
  inst.flights = {{"F1", -1.0, -5.0}, {"F2", -1.0, -3.0}};
  inst.schedules = {{"S1", {"F1"}}, {"S2", {"F1", "F2"}}, {"S3", {"F2"}}};
  return inst;
}

// Teams T1 = {XRay} (E 0.9) and T2 = {MD} (E 0.5); capacities XRay 7, MD 15;
// categories (R1,F1) N=2, (R2,F1) N=4, (R2,F2) N=15.
inline ara::TsgInstance tsg_toy() {
  ara::TsgInstance inst;
  inst.resources = {{"XRay", 7}, {"MD", 15}};
  inst.teams = {{"T1", {"XRay"}, 0.9}, {"T2", {"MD"}, 0.5}};
  inst.categories = {{"R1F1", "R1", "F1", 2, -1.0, -8.0},
                     {"R2F1", "R2", "F1", 4, -1.0, -5.0},
                     {"R2F2", "R2", "F2", 15, -1.0, -4.0}};
  inst.risks = {{"R1", 0.3}, {"R2", 0.7}};
  return inst;
}

// tsg_toy with a third team that uses both resources, so the XRay and MD
// constraints cross each other as well as every category column.
inline ara::TsgInstance tsg_crossing() {
  ara::TsgInstance inst = tsg_toy();
  inst.teams = {{"T1", {"XRay"}, 0.9}, {"T2", {"XRay", "MD"}, 0.95}, {"T3", {"MD"}, 0.5}};
  return inst;
}

inline ara::Matrix<double> matrix(const std::vector<std::vector<double>>& rows) {
  ara::Matrix<double> m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

inline ara::Matrix<std::int32_t> imatrix(const std::vector<std::vector<std::int32_t>>& rows) {
  ara::Matrix<std::int32_t> m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

// k x n game where every row sums to at most one and each column is a target
// with unit weights and payoffs (-1, u_undef[j]).
inline ara::AraGame row_game(std::size_t k, const std::vector<double>& u_undef) {
  const std::size_t n = u_undef.size();
  std::vector<ara::AssignmentConstraint> cons;
  for (std::uint32_t i = 0; i < k; ++i) {
    ara::AssignmentConstraint c{{}, 0, 1};
    for (std::uint32_t j = 0; j < n; ++j) c.cells.push_back({i, j});
    cons.push_back(c);
  }
  std::vector<ara::Target> targets;
  for (std::uint32_t j = 0; j < n; ++j) {
    ara::AssignmentConstraint col{{}, 0, 1};
    ara::Target t{"t" + std::to_string(j), {}, -1.0, u_undef[j]};
    for (std::uint32_t i = 0; i < k; ++i) {
      col.cells.push_back({i, j});
      t.cells.push_back({{i, j}, 1.0});
    }
    cons.push_back(col);
    targets.push_back(t);
  }
  return ara::AraGame(k, n, cons, targets);
}

}  // namespace fixtures
