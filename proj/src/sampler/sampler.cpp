#include "ara/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ara/simd/kernels.hpp"

namespace ara {

namespace {

std::string cell_str(Cell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

std::vector<Cell> sorted_unique(const std::vector<Cell>& cells) {
  std::vector<Cell> out = cells;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Constraint index whose cells are exactly row i, or npos.
std::size_t find_row_constraint(const AraGame& game, std::size_t row) {
  const auto& cons = game.constraints();
  for (std::size_t s = 0; s < cons.size(); ++s) {
    const auto& c = cons[s];
    if (c.cells.size() != game.n() || c.is_equality()) continue;
    std::vector<Cell> u = sorted_unique(c.cells);
    if (u.size() != game.n()) continue;
    bool whole = true;
    for (std::size_t j = 0; j < u.size() && whole; ++j) whole = u[j].row == row && u[j].col == j;
    if (whole) return s;
  }
  return std::string::npos;
}

}  // namespace

Pe0Form to_pe0(const AraGame& game) {
  const auto& cons = game.constraints();
  std::vector<std::size_t> eq, ineq, other;
  for (std::size_t s = 0; s < cons.size(); ++s) {
    if (cons[s].is_equality() && cons[s].upper > 0)
      eq.push_back(s);
    else if (cons[s].lower == 0)
      ineq.push_back(s);
    else
      other.push_back(s);
  }

  if (!eq.empty()) {
    std::vector<long> cover(game.cell_count(), -1);
    for (std::size_t s : eq) {
      std::vector<Cell> u = sorted_unique(cons[s].cells);
      if (u.size() != cons[s].cells.size())
        throw StructuralError("equality constraint " + std::to_string(s) + " lists a cell more than once");
      for (Cell c : u) {
        long& owner = cover[game.flat(c)];
        if (owner != -1)
          throw StructuralError("equality constraints " + std::to_string(owner) + " and " + std::to_string(s) +
                                " overlap at cell " + cell_str(c));
        owner = static_cast<long>(s);
      }
    }
    for (std::size_t r = 0; r < game.k(); ++r)
      for (std::size_t c = 0; c < game.n(); ++c)
        if (cover[r * game.n() + c] == -1)
          throw StructuralError("cell " + cell_str({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)}) +
                                " is covered by no equality constraint");
    if (!other.empty())
      throw StructuralError("constraint " + std::to_string(other.front()) +
                            " is an inequality with a positive lower bound");
    return Pe0Form{game, game, std::move(eq), std::move(ineq), game.n()};
  }

  // No equalities: turn a full-row constraint per asset into an equality
  // with a slack cell in a new last column.
  const std::size_t n = game.n();
  std::vector<std::size_t> row_con(game.k());
  for (std::size_t r = 0; r < game.k(); ++r) {
    row_con[r] = find_row_constraint(game, r);
    if (row_con[r] == std::string::npos)
      throw StructuralError("cell " + cell_str({static_cast<std::uint32_t>(r), 0}) +
                            " is covered by no equality and row " + std::to_string(r) +
                            " has no row constraint to complete with a slack cell");
  }
  std::vector<int> row_of(cons.size(), -1);
  for (std::size_t r = 0; r < game.k(); ++r) {
    if (row_of[row_con[r]] != -1) throw StructuralError("row constraint shared between rows");
    row_of[row_con[r]] = static_cast<int>(r);
  }

  std::vector<AssignmentConstraint> out;
  std::vector<std::size_t> out_eq, out_ineq;
  std::vector<AssignmentConstraint> slack_caps;
  for (std::size_t s = 0; s < cons.size(); ++s) {
    const auto& c = cons[s];
    if (row_of[s] >= 0) {
      const auto r = static_cast<std::uint32_t>(row_of[s]);
      AssignmentConstraint rowc;
      for (std::uint32_t j = 0; j < n; ++j) rowc.cells.push_back({r, j});
      rowc.cells.push_back({r, static_cast<std::uint32_t>(n)});
      rowc.lower = rowc.upper = c.upper;
      out_eq.push_back(out.size());
      out.push_back(std::move(rowc));
      if (c.lower > 0) slack_caps.push_back({{{r, static_cast<std::uint32_t>(n)}}, 0, c.upper - c.lower});
      continue;
    }
    if (c.lower != 0)
      throw StructuralError("constraint " + std::to_string(s) + " is an inequality with a positive lower bound");
    out_ineq.push_back(out.size());
    out.push_back(c);
  }
  for (auto& cap : slack_caps) {
    out_ineq.push_back(out.size());
    out.push_back(std::move(cap));
  }

  GameOptions opts = game.options();
  // Slack cells belong to no target, so the weight bound carries over.
  opts.check_weights = false;
  AraGame extended(game.k(), n + 1, std::move(out), game.targets(), game.adversary_types(), opts);
  return Pe0Form{game, std::move(extended), std::move(out_eq), std::move(out_ineq), n};
}

Matrix<double> lift_marginal(const Pe0Form& pe0, const Matrix<double>& x_m) {
  check_dimensions(pe0.source, x_m.rows(), x_m.cols());
  if (!pe0.has_slack()) return x_m;
  const std::size_t n = pe0.source_cols;
  Matrix<double> out(x_m.rows(), n + 1);
  for (std::size_t r = 0; r < x_m.rows(); ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = x_m(r, c);
  for (std::size_t e : pe0.equalities) {
    const auto& con = pe0.game.constraints()[e];
    for (const Cell& c : con.cells) {
      if (c.col != n) continue;
      double used = 0.0;
      for (std::size_t j = 0; j < n; ++j) used += x_m(c.row, j);
      out(c.row, n) = std::max(0.0, static_cast<double>(con.upper) - used);
    }
  }
  return out;
}

PureStrategy strip_slack(const Pe0Form& pe0, const IntMatrix& x) {
  check_dimensions(pe0.game, x.rows(), x.cols());
  if (!pe0.has_slack()) return PureStrategy{x};
  PureStrategy p{IntMatrix(x.rows(), pe0.source_cols)};
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < pe0.source_cols; ++c) p.values(r, c) = x(r, c);
  return p;
}

std::vector<std::int32_t> comb_round(std::span<const double> values, double z) {
  constexpr double kIntegralTol = 1e-9;
  const std::size_t n = values.size();
  std::vector<std::int32_t> out(n);
  std::vector<double> frac(n, 0.0);
  double total = 0.0;
  std::size_t last = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < -kIntegralTol) throw NumericalError("comb sampling: negative or non-finite marginal");
    const double fl = std::floor(v + kIntegralTol);
    double f = v - fl;
    if (f < kIntegralTol) f = 0.0;
    out[i] = static_cast<std::int32_t>(fl);
    frac[i] = f;
    total += f;
    if (f > 0.0) last = i;
  }
  const double buckets = std::round(total);
  if (std::abs(total - buckets) > 1e-6) {
    std::ostringstream os;
    os << "comb sampling: fractional parts sum to " << total << ", not an integer";
    throw NumericalError(os.str());
  }
  // Marks sit at z, z+1, ..., z+buckets-1 along the packed fractions.
  auto marks_before = [&](double e) {
    return std::clamp(std::ceil(e - z), 0.0, buckets);
  };
  double pos = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (frac[i] == 0.0) continue;
    const double start = pos;
    const double end = i == last ? buckets : pos + frac[i];
    pos = end;
    const double ups = marks_before(end) - marks_before(start);
    if (ups > 1.0) throw NumericalError("comb sampling: a cell received two marks");
    out[i] += static_cast<std::int32_t>(ups);
  }
  return out;
}

std::vector<std::pair<Cell, std::int32_t>> comb_sample(const Matrix<double>& x_m, const AssignmentConstraint& s,
                                                       Rng& rng) {
  std::vector<Cell> cells = sorted_unique(s.cells);
  std::vector<double> values;
  values.reserve(cells.size());
  for (Cell c : cells) {
    if (c.row >= x_m.rows() || c.col >= x_m.cols()) throw Error("comb sampling: cell outside marginal matrix");
    values.push_back(x_m(c.row, c.col));
  }
  const double z = uniform01(rng);
  std::vector<std::int32_t> rounded = comb_round(values, z);
  std::vector<std::pair<Cell, std::int32_t>> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out.emplace_back(cells[i], rounded[i]);
  return out;
}

PipelineTrace run_pipeline(const Pe0Form& pe0, const IntMatrix& combed, const DomainFixer& fixer, Rng& rng) {
  PipelineTrace trace;
  trace.combed = combed;
  trace.after_inequalities = fixer.fix_inequalities(combed, pe0, rng);
  {
    auto before = combed.flat();
    auto after = trace.after_inequalities.flat();
    if (after.size() != before.size()) throw std::logic_error("inequality fixer changed the matrix shape");
    for (std::size_t i = 0; i < before.size(); ++i)
      if (after[i] > before[i]) throw std::logic_error("inequality fixer increased a cell");
  }
  trace.after_equalities = fixer.fix_equalities(trace.after_inequalities, pe0, rng);
  if (!trace.after_equalities) return trace;
  {
    auto before = trace.after_inequalities.flat();
    auto after = trace.after_equalities->flat();
    if (after.size() != before.size()) throw std::logic_error("equality fixer changed the matrix shape");
    for (std::size_t i = 0; i < before.size(); ++i)
      if (after[i] < before[i]) throw std::logic_error("equality fixer decreased a cell");
  }
  trace.valid = is_valid_pure(pe0.game, PureStrategy{*trace.after_equalities}).valid;
  return trace;
}

PureSampler::PureSampler(const MarginalSolution& ms, const Pe0Form& pe0, const DomainFixer& fixer,
                         std::size_t retry_cap)
    : pe0_(pe0), fixer_(fixer), retry_cap_(retry_cap), lifted_(lift_marginal(pe0, ms.x_m.values)) {
  for (std::size_t e = 0; e < pe0_.equalities.size(); ++e) {
    std::vector<Cell> cells = sorted_unique(pe0_.equality(e).cells);
    std::vector<double> values;
    values.reserve(cells.size());
    for (Cell c : cells) {
      if (c.row >= lifted_.rows() || c.col >= lifted_.cols()) throw Error("comb sampling: cell outside marginal matrix");
      values.push_back(lifted_(c.row, c.col));
    }
    comb_cells_.push_back(std::move(cells));
    comb_values_.push_back(std::move(values));
  }
}

// Same draws as comb_sample on each equality in turn.
IntMatrix PureSampler::comb(Rng& rng) const {
  IntMatrix x(pe0_.game.k(), pe0_.game.n());
  for (std::size_t e = 0; e < comb_cells_.size(); ++e) {
    const std::vector<std::int32_t> rounded = comb_round(comb_values_[e], uniform01(rng));
    for (std::size_t i = 0; i < rounded.size(); ++i) x(comb_cells_[e][i].row, comb_cells_[e][i].col) = rounded[i];
  }
  return x;
}

PureStrategy PureSampler::draw(Rng& rng, std::size_t* failures) const {
  std::size_t rejected = 0;
  for (std::size_t attempt = 0; attempt <= retry_cap_; ++attempt) {
    PipelineTrace trace = run_pipeline(pe0_, comb(rng), fixer_, rng);
    if (trace.valid) return strip_slack(pe0_, *trace.after_equalities);
    ++rejected;
    if (failures) ++*failures;
  }
  throw SamplingFailure("sampling failed " + std::to_string(rejected) + " times in a row (retry cap " +
                            std::to_string(retry_cap_) + ")",
                        rejected);
}

PureStrategy sample_pure(const MarginalSolution& ms, const Pe0Form& pe0, const DomainFixer& fixer, Rng& rng,
                         std::size_t retry_cap, std::size_t* failures) {
  return PureSampler(ms, pe0, fixer, retry_cap).draw(rng, failures);
}

Matrix<double> average(std::span<const PureStrategy> samples) {
  if (samples.empty()) throw Error("average of zero samples");
  const auto& k = simd::kernels();
  Matrix<double> mean(samples.front().values.rows(), samples.front().values.cols());
  auto acc = mean.flat();
  for (const PureStrategy& p : samples) {
    auto v = p.values.flat();
    if (v.size() != acc.size()) throw Error("average: samples differ in shape");
    k.accumulate(acc.data(), v.data(), v.size());
  }
  k.scale(acc.data(), 1.0 / static_cast<double>(samples.size()), acc.size());
  return mean;
}

MixedEstimate estimate_mixed(const MarginalSolution& ms, const Pe0Form& pe0, const DomainFixer& fixer, Rng& rng,
                             std::size_t m, std::size_t retry_cap) {
  if (m == 0) throw Error("estimate_mixed needs at least one sample");
  PureSampler sampler(ms, pe0, fixer, retry_cap);
  MixedEstimate out;
  out.estimate.samples.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.estimate.samples.push_back(sampler.draw(rng, &out.failures));
  out.estimate.mean = average(out.estimate.samples);
  out.value = game_value(pe0.source, out.estimate.mean);
  return out;
}

}  // namespace ara
