#include "poolmarket/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "poolmarket/common.hpp"

namespace poolmarket::lp {

int LinearProgram::add_variable(double cost, double lower, std::optional<double> upper) {
  if (!std::isfinite(cost) || !std::isfinite(lower) || (upper && !std::isfinite(*upper)))
    throw Error(ErrorCode::NumericalBreakdown, "non-finite variable data");
  costs_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return static_cast<int>(costs_.size()) - 1;
}

int LinearProgram::add_row(Row row) {
  for (const auto& [var, coef] : row.terms) {
    if (var < 0 || var >= num_variables())
      throw Error(ErrorCode::NumericalBreakdown, "row references unknown variable");
    if (!std::isfinite(coef)) throw Error(ErrorCode::NumericalBreakdown, "non-finite coefficient");
  }
  if (!std::isfinite(row.rhs)) throw Error(ErrorCode::NumericalBreakdown, "non-finite rhs");
  rows_.push_back(std::move(row));
  return static_cast<int>(rows_.size()) - 1;
}

namespace {

enum class ColumnKind { Structural, Slack, Surplus, Artificial };

// Dense tableau for: minimize c x, A x = b, x >= 0, b >= 0.
// The last row holds reduced costs and -objective; the last column holds b.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), cells_((rows + 1) * (cols + 1), 0.0), basis_(rows, -1) {}

  double& at(int r, int c) { return cells_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const { return cells_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  double& cost(int c) { return at(m_, c); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= n_; ++c) at(pr, c) /= p;
    for (int r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      double* dst = &at(r, 0);
      const double* src = &at(pr, 0);
      for (int c = 0; c <= n_; ++c) dst[c] -= f * src[c];
      dst[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Rebuilds the reduced-cost row from raw column costs.
  void price_out(const std::vector<double>& raw_cost) {
    for (int c = 0; c < n_; ++c) cost(c) = raw_cost[c];
    at(m_, n_) = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double cb = raw_cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int c = 0; c <= n_; ++c) at(m_, c) -= cb * at(r, c);
    }
  }

  void dump(std::ostream& os, const char* label) const {
    os << "# " << label << "\n";
    for (int r = 0; r <= m_; ++r) {
      for (int c = 0; c <= n_; ++c) os << (c ? "," : "") << at(r, c);
      os << "\n";
    }
  }

 private:
  int m_;
  int n_;
  std::vector<double> cells_;
  std::vector<int> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

PhaseResult run_phase(Tableau& t, const std::vector<bool>& may_enter, const Options& opt,
                      std::size_t& iterations) {
  bool bland = false;
  int streak = 0;
  while (true) {
    if (iterations >= opt.max_iterations)
      throw Error(ErrorCode::IterationCapExceeded, "simplex iteration cap reached");
    int enter = -1;
    double best = -opt.optimality_tol;
    for (int c = 0; c < t.cols(); ++c) {
      if (!may_enter[c]) continue;
      const double d = t.cost(c);
      if (d < best) {
        enter = c;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return PhaseResult::Optimal;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(0.0, t.rhs(r)) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12) {
        leave = r;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 && t.basis()[r] < t.basis()[leave]) {
        leave = r;
      }
    }
    if (leave < 0) return PhaseResult::Unbounded;
    if (std::fabs(t.at(leave, enter)) < opt.pivot_tol)
      throw Error(ErrorCode::NumericalBreakdown, "pivot element below tolerance");

    if (best_ratio <= 1e-12) {
      if (++streak > opt.degenerate_streak) bland = true;
    } else {
      streak = 0;
    }
    t.pivot(leave, enter);
    ++iterations;
  }
}

}  // namespace

Solution solve(const LinearProgram& program, const Options& opt) {
  const int n = program.num_variables();
  const auto& lower = program.lower();
  const auto& upper = program.upper();

  // Internal rows: user rows (shifted by lower bounds), then upper-bound rows.
  struct InternalRow {
    std::vector<std::pair<int, double>> terms;
    Relation rel;
    double rhs;
    int user_row;  // -1 for bound rows
    double sign;   // +1, or -1 when the row was negated to make rhs >= 0
  };
  std::vector<InternalRow> rows;
  rows.reserve(program.num_rows() + n);
  for (int k = 0; k < program.num_rows(); ++k) {
    const Row& row = program.rows()[k];
    double rhs = row.rhs;
    for (const auto& [v, a] : row.terms) rhs -= a * lower[v];
    rows.push_back({row.terms, row.relation, rhs, k, 1.0});
  }
  for (int v = 0; v < n; ++v) {
    if (upper[v]) {
      if (*upper[v] < lower[v] - opt.feasibility_tol) {
        Solution s;
        s.status = Status::Infeasible;
        return s;
      }
      rows.push_back({{{v, 1.0}}, Relation::LessEqual, *upper[v] - lower[v], -1, 1.0});
    }
  }
  for (auto& r : rows) {
    if (r.rhs < 0) {
      r.rhs = -r.rhs;
      r.sign = -1.0;
      for (auto& term : r.terms) term.second = -term.second;
      if (r.rel == Relation::LessEqual) r.rel = Relation::GreaterEqual;
      else if (r.rel == Relation::GreaterEqual) r.rel = Relation::LessEqual;
    }
  }

  const int m = static_cast<int>(rows.size());
  std::vector<ColumnKind> kinds(n, ColumnKind::Structural);
  std::vector<int> identity_col(m, -1);
  int cols = n;
  std::vector<int> surplus_col(m, -1);
  for (int r = 0; r < m; ++r) {
    if (rows[r].rel == Relation::LessEqual) {
      identity_col[r] = cols++;
      kinds.push_back(ColumnKind::Slack);
    } else {
      if (rows[r].rel == Relation::GreaterEqual) {
        surplus_col[r] = cols++;
        kinds.push_back(ColumnKind::Surplus);
      }
      identity_col[r] = cols++;
      kinds.push_back(ColumnKind::Artificial);
    }
  }

  Tableau t(m, cols);
  for (int r = 0; r < m; ++r) {
    for (const auto& [v, a] : rows[r].terms) t.at(r, v) += a;
    if (surplus_col[r] >= 0) t.at(r, surplus_col[r]) = -1.0;
    t.at(r, identity_col[r]) = 1.0;
    t.rhs(r) = rows[r].rhs;
    t.basis()[r] = identity_col[r];
  }

  Solution sol;
  const double flip = program.sense() == Sense::Maximize ? -1.0 : 1.0;

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1_cost(cols, 0.0);
  bool any_artificial = false;
  for (int c = 0; c < cols; ++c) {
    if (kinds[c] == ColumnKind::Artificial) {
      phase1_cost[c] = 1.0;
      any_artificial = true;
    }
  }
  std::vector<bool> may_enter(cols, true);
  if (any_artificial) {
    t.price_out(phase1_cost);
    run_phase(t, may_enter, opt, sol.iterations);
    if (opt.tableau_dump) t.dump(*opt.tableau_dump, "phase1");
    if (-t.at(m, cols) > opt.feasibility_tol * std::max(1.0, static_cast<double>(m))) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (kinds[t.basis()[r]] != ColumnKind::Artificial) continue;
      int best = -1;
      double mag = 1e-9;
      for (int c = 0; c < cols; ++c) {
        if (kinds[c] == ColumnKind::Artificial) continue;
        if (std::fabs(t.at(r, c)) > mag) {
          mag = std::fabs(t.at(r, c));
          best = c;
        }
      }
      if (best >= 0) t.pivot(r, best);
    }
    for (int c = 0; c < cols; ++c)
      if (kinds[c] == ColumnKind::Artificial) may_enter[c] = false;
  }

  std::vector<double> phase2_cost(cols, 0.0);
  for (int v = 0; v < n; ++v) phase2_cost[v] = flip * program.costs()[v];
  t.price_out(phase2_cost);
  if (run_phase(t, may_enter, opt, sol.iterations) == PhaseResult::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }
  if (opt.tableau_dump) t.dump(*opt.tableau_dump, "phase2");

  sol.status = Status::Optimal;
  sol.primal.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    const int b = t.basis()[r];
    if (b < n) sol.primal[b] = t.rhs(r);
  }
  sol.value = 0.0;
  for (int v = 0; v < n; ++v) {
    sol.primal[v] += lower[v];
    sol.value += program.costs()[v] * sol.primal[v];
  }
  sol.dual.assign(program.num_rows(), 0.0);
  for (int r = 0; r < m; ++r) {
    if (rows[r].user_row < 0) continue;
    const double y = -t.cost(identity_col[r]);
    sol.dual[rows[r].user_row] = flip * rows[r].sign * y;
  }
  return sol;
}

CuttingPlaneResult solve_with_rows(LinearProgram program, const RowGenerator& generator,
                                   std::size_t max_rounds, const Options& options) {
  CuttingPlaneResult result;
  while (true) {
    result.solution = solve(program, options);
    ++result.rounds;
    if (!result.solution.optimal()) return result;
    auto cuts = generator(result.solution.primal);
    if (cuts.empty()) return result;
    if (result.rounds >= max_rounds)
      throw Error(ErrorCode::IterationCapExceeded,
                  "cutting-plane loop still finds violated rows after " + std::to_string(max_rounds) +
                      " rounds");
    for (auto& row : cuts) {
      program.add_row(std::move(row));
      ++result.rows_added;
    }
  }
}

}  // namespace poolmarket::lp
