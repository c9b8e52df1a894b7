#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ara/errors.hpp"
#include "ara/lp.hpp"
#include "ara/simd/kernels.hpp"

namespace ara::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::infeasible:
      return "infeasible";
    case Status::unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kPivotTol = 1e-7;
constexpr double kZeroClamp = 1e-11;
// Consecutive degenerate pivots before switching to Bland's rule.
constexpr std::size_t kDegenerateStreak = 16;
// A pivot gaining less than this (relative) counts as degenerate.
constexpr double kStallGain = 1e-9;

// x_orig = offset + plus * x'[pos] - x'[neg]
struct VarMap {
  double offset = 0.0;
  double plus = 1.0;
  std::size_t pos = kNone;
  std::size_t neg = kNone;
};

struct StdRow {
  std::vector<Term> terms;  // over standard-form structural columns
  Relation relation;
  double rhs;
  double sign;            // +1, or -1 when negated to make rhs >= 0
  std::size_t original;   // kNone for bound rows
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), stride_(cols + 1), data_((rows + 1) * stride_, 0.0), basis_(rows, kNone) {}

  double* row(std::size_t i) { return data_.data() + i * stride_; }
  const double* row(std::size_t i) const { return data_.data() + i * stride_; }
  double* cost() { return row(m_); }
  double& at(std::size_t i, std::size_t j) { return row(i)[j]; }
  double rhs(std::size_t i) const { return row(i)[n_]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  // New zero column just before the rhs.
  std::size_t add_column() {
    const std::size_t wide = n_ + 2;
    std::vector<double> next((m_ + 1) * wide, 0.0);
    for (std::size_t i = 0; i <= m_; ++i) {
      const double* src = row(i);
      double* dst = next.data() + i * wide;
      std::copy(src, src + n_, dst);
      dst[n_ + 1] = src[n_];
    }
    data_ = std::move(next);
    stride_ = wide;
    return n_++;
  }

  void pivot(std::size_t r, std::size_t q) {
    const auto& k = simd::kernels();
    double* pr = row(r);
    k.scale(pr, 1.0 / pr[q], stride_);
    pr[q] = 1.0;
    // Subtracting a multiple of zero leaves an entry unchanged, so a sparse
    // pivot row only needs its nonzero positions.
    nz_.clear();
    for (std::size_t j = 0; j < stride_; ++j)
      if (pr[j] != 0.0) nz_.push_back(j);
    const bool sparse = nz_.size() * 4 < stride_;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[q];
      if (f == 0.0) continue;
      if (sparse) {
        for (std::size_t j : nz_) ri[j] -= f * pr[j];
      } else {
        k.sub_scaled(ri, pr, f, stride_);
      }
      ri[q] = 0.0;
      if (i < m_ && ri[n_] < 0.0 && ri[n_] > -kZeroClamp) ri[n_] = 0.0;
    }
    basis_[r] = q;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t stride_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
};

void check_well_formed(const LinearProgram& lp) {
  const std::size_t nv = lp.num_vars();
  if (lp.lower.size() != nv || lp.upper.size() != nv)
    throw Error("linear program: bound vectors do not match objective length");
  for (std::size_t j = 0; j < nv; ++j) {
    if (!std::isfinite(lp.objective[j])) throw Error("linear program: non-finite objective coefficient");
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] > lp.upper[j] ||
        lp.lower[j] == kInf || lp.upper[j] == -kInf)
      throw Error("linear program: inconsistent bounds on variable " + std::to_string(j));
  }
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Row& row = lp.rows[i];
    if (!std::isfinite(row.rhs)) throw Error("linear program: non-finite rhs in row " + std::to_string(i));
    for (const Term& t : row.terms) {
      if (t.var >= nv) throw Error("linear program: row " + std::to_string(i) + " references unknown variable");
      if (!std::isfinite(t.coef)) throw Error("linear program: non-finite coefficient in row " + std::to_string(i));
    }
  }
}

class Simplex {
 public:
  Simplex(LinearProgram lp, const SimplexOptions& options) : lp_(std::move(lp)), opt_(options) {}

  LpSolution run() {
    check_well_formed(lp_);
    build_standard_form();
    build_tableau();
    reset_cap();

    LpSolution sol;
    if (has_artificials_) {
      init_phase_one_costs();
      iterate(/*phase_one=*/true);
      std::vector<std::size_t> bad;
      for (std::size_t i = 0; i < tab_.rows(); ++i) {
        std::size_t b = tab_.basis()[i];
        if (is_artificial_[b] && tab_.rhs(i) > opt_.feasibility_tol) bad.push_back(std_rows_[i].original);
      }
      if (!bad.empty()) {
        std::sort(bad.begin(), bad.end());
        bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
        sol.status = Status::infeasible;
        sol.infeasible_rows = std::move(bad);
        sol.iterations = iterations_;
        return sol;
      }
      drive_out_artificials();
    }
    init_phase_two_costs();
    return finish();
  }

  // Appends a variable in [0, inf) to an optimal tableau and re-optimises
  // from the current basis.
  LpSolution add_column(double obj, const std::vector<Term>& column) {
    const std::size_t var = lp_.add_variable(obj);
    for (const Term& t : column) {
      if (t.var >= lp_.rows.size()) throw Error("linear program: column references unknown row");
      if (!std::isfinite(t.coef)) throw Error("linear program: non-finite coefficient in new column");
      lp_.rows[t.var].terms.push_back({var, t.coef});
    }
    if (!std::isfinite(obj)) throw Error("linear program: non-finite objective coefficient");

    const std::size_t q = tab_.add_column();
    vars_.push_back(VarMap{0.0, 1.0, q, kNone});
    is_artificial_.push_back(false);
    phase_two_cost_.push_back(obj);
    // B^-1 a is the same combination of the initial basis columns, and the
    // cost row follows along with c_q added.
    std::vector<double> a(std_rows_.size(), 0.0);
    for (const Term& t : column) a[t.var] += t.coef;
    for (std::size_t s = 0; s < std_rows_.size(); ++s) a[s] *= std_rows_[s].sign;
    for (std::size_t i = 0; i <= tab_.rows(); ++i) {
      const double* r = tab_.row(i);
      double v = i == tab_.rows() ? obj : 0.0;
      for (std::size_t s = 0; s < a.size(); ++s)
        if (a[s] != 0.0) v += a[s] * r[init_col_[s]];
      tab_.at(i, q) = v;
    }
    reset_cap();
    return finish();
  }

 private:
  LpSolution finish() {
    LpSolution sol;
    if (!iterate(/*phase_one=*/false)) {
      sol.status = Status::unbounded;
      sol.iterations = iterations_;
      return sol;
    }
    extract(sol);
    return sol;
  }

  void reset_cap() {
    cap_ = iterations_ + (opt_.iteration_cap ? opt_.iteration_cap : 50 * (tab_.rows() + tab_.cols()));
  }

  void build_standard_form() {
    const std::size_t nv = lp_.num_vars();
    vars_.resize(nv);
    std::size_t ncol = 0;
    std::vector<std::pair<std::size_t, double>> bound_rows;  // (std col, width)
    for (std::size_t j = 0; j < nv; ++j) {
      const double lo = lp_.lower[j];
      const double hi = lp_.upper[j];
      VarMap& vm = vars_[j];
      if (std::isfinite(lo)) {
        vm.offset = lo;
        vm.pos = ncol++;
        if (std::isfinite(hi)) bound_rows.emplace_back(vm.pos, hi - lo);
      } else if (std::isfinite(hi)) {
        vm.offset = hi;
        vm.plus = -1.0;
        vm.pos = ncol++;
      } else {
        vm.pos = ncol++;
        vm.neg = ncol++;
      }
    }
    structural_ = ncol;
    std_cost_.assign(ncol, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
      std_cost_[vars_[j].pos] += vars_[j].plus * lp_.objective[j];
      if (vars_[j].neg != kNone) std_cost_[vars_[j].neg] -= lp_.objective[j];
    }

    std::vector<double> dense(ncol, 0.0);
    std::vector<char> marked(ncol, 0);
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < lp_.rows.size(); ++i) {
      const Row& row = lp_.rows[i];
      double rhs = row.rhs;
      touched.clear();
      auto add = [&](std::size_t col, double v) {
        if (!marked[col]) {
          marked[col] = 1;
          touched.push_back(col);
        }
        dense[col] += v;
      };
      for (const Term& t : row.terms) {
        const VarMap& vm = vars_[t.var];
        rhs -= t.coef * vm.offset;
        add(vm.pos, vm.plus * t.coef);
        if (vm.neg != kNone) add(vm.neg, -t.coef);
      }
      std::sort(touched.begin(), touched.end());
      StdRow sr{{}, row.relation, rhs, 1.0, i};
      for (std::size_t c : touched) {
        const double v = dense[c];
        dense[c] = 0.0;
        marked[c] = 0;
        if (v != 0.0) sr.terms.push_back({c, v});
      }
      std_rows_.push_back(std::move(sr));
    }
    for (auto [col, width] : bound_rows)
      std_rows_.push_back(StdRow{{{col, 1.0}}, Relation::le, width, 1.0, kNone});

    for (StdRow& sr : std_rows_) {
      if (sr.rhs < 0.0) {
        sr.rhs = -sr.rhs;
        sr.sign = -1.0;
        for (Term& t : sr.terms) t.coef = -t.coef;
        if (sr.relation == Relation::le)
          sr.relation = Relation::ge;
        else if (sr.relation == Relation::ge)
          sr.relation = Relation::le;
      }
    }
  }

  void build_tableau() {
    const std::size_t m = std_rows_.size();
    std::size_t n = structural_;
    for (const StdRow& sr : std_rows_) n += sr.relation == Relation::ge ? 2 : 1;
    tab_ = Tableau(m, n);
    is_artificial_.assign(n, false);
    init_col_.assign(m, kNone);
    std::size_t next = structural_;
    for (std::size_t i = 0; i < m; ++i) {
      const StdRow& sr = std_rows_[i];
      double* r = tab_.row(i);
      for (const Term& t : sr.terms) r[t.var] = t.coef;
      r[n] = sr.rhs;
      switch (sr.relation) {
        case Relation::le:
          r[next] = 1.0;
          init_col_[i] = next++;
          break;
        case Relation::ge:
          r[next++] = -1.0;
          r[next] = 1.0;
          is_artificial_[next] = true;
          init_col_[i] = next++;
          has_artificials_ = true;
          break;
        case Relation::eq:
          r[next] = 1.0;
          is_artificial_[next] = true;
          init_col_[i] = next++;
          has_artificials_ = true;
          break;
      }
      tab_.basis()[i] = init_col_[i];
    }
  }

  void load_costs(const std::vector<double>& c) {
    const auto& k = simd::kernels();
    double* d = tab_.cost();
    const std::size_t n = tab_.cols();
    std::fill(d, d + n + 1, 0.0);
    std::copy(c.begin(), c.end(), d);
    for (std::size_t i = 0; i < tab_.rows(); ++i) {
      const double cb = c[tab_.basis()[i]];
      if (cb != 0.0) k.sub_scaled(d, tab_.row(i), cb, n + 1);
    }
    for (std::size_t i = 0; i < tab_.rows(); ++i) d[tab_.basis()[i]] = 0.0;
  }

  void init_phase_one_costs() {
    std::vector<double> c(tab_.cols(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j)
      if (is_artificial_[j]) c[j] = -1.0;
    load_costs(c);
  }

  void init_phase_two_costs() {
    phase_two_cost_.assign(tab_.cols(), 0.0);
    std::copy(std_cost_.begin(), std_cost_.end(), phase_two_cost_.begin());
    load_costs(phase_two_cost_);
  }

  // Returns false when the LP is unbounded in the current phase.
  bool iterate(bool phase_one) {
    const std::size_t n = tab_.cols();
    const std::size_t m = tab_.rows();
    std::size_t degenerate = 0;
    for (;;) {
      const double* d = tab_.cost();
      const bool bland = degenerate >= kDegenerateStreak;
      std::size_t q = kNone;
      double best = opt_.optimality_tol;
      for (std::size_t j = 0; j < n; ++j) {
        if (is_artificial_[j]) continue;
        if (d[j] > best) {
          q = j;
          if (bland) break;
          best = d[j];
        }
      }
      if (q == kNone) return true;

      std::size_t r = kNone;
      double best_ratio = 0.0;
      double best_piv = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double a = tab_.row(i)[q];
        double ratio;
        if (!phase_one && is_artificial_[tab_.basis()[i]] && std::abs(a) > kPivotTol) {
          // An artificial left basic at zero must stay there.
          ratio = 0.0;
        } else {
          if (a <= kPivotTol) continue;
          ratio = tab_.rhs(i) / a;
        }
        a = std::abs(a);
        if (r == kNone || ratio < best_ratio - 1e-12) {
          r = i;
          best_ratio = ratio;
          best_piv = a;
          continue;
        }
        if (ratio <= best_ratio + 1e-12) {
          // In phase one prefer expelling an artificial.
          const bool art_i = is_artificial_[tab_.basis()[i]];
          const bool art_r = is_artificial_[tab_.basis()[r]];
          bool take;
          if (phase_one && art_i != art_r)
            take = art_i;
          else if (bland)
            take = tab_.basis()[i] < tab_.basis()[r];
          else
            take = a > best_piv;
          if (take) {
            r = i;
            best_ratio = std::min(best_ratio, ratio);
            best_piv = a;
          }
        }
      }
      if (r == kNone) {
        // Phase one is bounded, so a column without a pivot only carries
        // rounding noise in its reduced cost.
        if (phase_one) {
          tab_.cost()[q] = 0.0;
          continue;
        }
        return false;
      }
      if (++iterations_ > cap_)
        throw NumericalError("simplex: iteration cap of " + std::to_string(cap_) + " exceeded");
      const double gain = best_ratio * d[q];
      degenerate = gain <= kStallGain * (1.0 + std::abs(tab_.rhs(m))) ? degenerate + 1 : 0;
      tab_.pivot(r, q);
    }
  }

  void drive_out_artificials() {
    const std::size_t n = tab_.cols();
    for (std::size_t i = 0; i < tab_.rows(); ++i) {
      if (!is_artificial_[tab_.basis()[i]]) continue;
      const double* r = tab_.row(i);
      std::size_t q = kNone;
      double best = kPivotTol;
      for (std::size_t j = 0; j < n; ++j) {
        if (is_artificial_[j]) continue;
        if (std::abs(r[j]) > best) {
          best = std::abs(r[j]);
          q = j;
        }
      }
      // No candidate: the row is redundant and its artificial stays at zero.
      if (q == kNone) continue;
      tab_.at(i, n) = 0.0;
      tab_.pivot(i, q);
    }
  }

  void extract(LpSolution& sol) {
    const std::size_t n = tab_.cols();
    std::vector<double> std_x(n, 0.0);
    for (std::size_t i = 0; i < tab_.rows(); ++i) std_x[tab_.basis()[i]] = std::max(0.0, tab_.rhs(i));
    sol.values.resize(vars_.size());
    for (std::size_t j = 0; j < vars_.size(); ++j) {
      const VarMap& vm = vars_[j];
      double v = vm.offset + vm.plus * std_x[vm.pos];
      if (vm.neg != kNone) v -= std_x[vm.neg];
      sol.values[j] = v;
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < vars_.size(); ++j) obj += lp_.objective[j] * sol.values[j];
    sol.objective_value = obj;

    sol.duals.assign(lp_.rows.size(), 0.0);
    for (std::size_t s = 0; s < std_rows_.size(); ++s) {
      if (std_rows_[s].original == kNone) continue;
      double y = 0.0;
      const std::size_t col = init_col_[s];
      for (std::size_t i = 0; i < tab_.rows(); ++i) {
        const double cb = phase_two_cost_[tab_.basis()[i]];
        if (cb != 0.0) y += cb * tab_.row(i)[col];
      }
      sol.duals[std_rows_[s].original] = std_rows_[s].sign * y;
    }
    sol.status = Status::optimal;
    sol.iterations = iterations_;
  }

  LinearProgram lp_;
  SimplexOptions opt_;
  std::vector<VarMap> vars_;
  std::vector<StdRow> std_rows_;
  std::vector<double> std_cost_;
  std::vector<double> phase_two_cost_;
  std::size_t structural_ = 0;
  Tableau tab_{0, 0};
  std::vector<bool> is_artificial_;
  std::vector<std::size_t> init_col_;
  bool has_artificials_ = false;
  std::size_t iterations_ = 0;
  std::size_t cap_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  return Simplex(lp, options).run();
}

struct IncrementalSimplex::Impl {
  Simplex simplex;
  LpSolution last;
  Impl(LinearProgram lp, const SimplexOptions& o) : simplex(std::move(lp), o) {}
};

IncrementalSimplex::IncrementalSimplex(LinearProgram lp, const SimplexOptions& options)
    : impl_(std::make_unique<Impl>(std::move(lp), options)) {
  impl_->last = impl_->simplex.run();
}

IncrementalSimplex::~IncrementalSimplex() = default;
IncrementalSimplex::IncrementalSimplex(IncrementalSimplex&&) noexcept = default;
IncrementalSimplex& IncrementalSimplex::operator=(IncrementalSimplex&&) noexcept = default;

const LpSolution& IncrementalSimplex::solution() const { return impl_->last; }

const LpSolution& IncrementalSimplex::add_column(double objective, const std::vector<Term>& column) {
  if (impl_->last.status != Status::optimal) throw Error("linear program: columns can only extend an optimal program");
  impl_->last = impl_->simplex.add_column(objective, column);
  return impl_->last;
}

}  // namespace ara::lp
