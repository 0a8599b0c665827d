#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace poolmarket::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

struct Row {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// A linear program over continuous variables with finite lower bounds.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Maximize) : sense_(sense) {}

  int add_variable(double cost, double lower = 0.0, std::optional<double> upper = std::nullopt);
  int add_row(Row row);
  int add_row(std::vector<std::pair<int, double>> terms, Relation rel, double rhs) {
    return add_row(Row{std::move(terms), rel, rhs});
  }

  void set_cost(int var, double cost) { costs_.at(var) = cost; }
  void set_sense(Sense s) { sense_ = s; }

  Sense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(costs_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<std::optional<double>>& upper() const { return upper_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  Sense sense_;
  std::vector<double> costs_;
  std::vector<double> lower_;
  std::vector<std::optional<double>> upper_;
  std::vector<Row> rows_;
};

struct Solution {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> primal;
  /// Shadow prices d(value)/d(rhs), one per user row.
  std::vector<double> dual;
  std::size_t iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-12;
  /// Consecutive degenerate pivots tolerated under Dantzig pricing before the
  /// solver switches to Bland's rule for the rest of the phase.
  int degenerate_streak = 50;
  std::size_t max_iterations = 2'000'000;
  /// Optional CSV dump of each phase's final tableau.
  std::ostream* tableau_dump = nullptr;
};

Solution solve(const LinearProgram& program, const Options& options = {});

/// Returns violated rows for a candidate primal point; empty means feasible.
using RowGenerator = std::function<std::vector<Row>(std::span<const double> primal)>;

struct CuttingPlaneResult {
  Solution solution;
  std::size_t rounds = 0;
  std::size_t rows_added = 0;
};

/// Solve-separate loop: solves, asks the generator for violated rows, appends
/// them and re-solves until none are returned. Throws IterationCapExceeded
/// after max_rounds rounds.
CuttingPlaneResult solve_with_rows(LinearProgram program, const RowGenerator& generator,
                                   std::size_t max_rounds = 10'000, const Options& options = {});

}  // namespace poolmarket::lp
