#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace polyrig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
};

/// Dense two-phase simplex for   max c'x  s.t.  Ax = b, x >= 0.
LpSolution solve_lp(const Matrix& A, const Vector& b, const Vector& c);

/// Row-wise general form builder compiled down to standard form.
/// Variables are free unless given bounds; rows are <=, >= or ==.
class LpBuilder {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int addVariable(double lower = -kInf, double upper = kInf, double objCoeff = 0.0);
  void addRow(const std::vector<std::pair<int, double>>& terms, char relation, double rhs);
  void setObjective(int var, double coeff);

  /// Maximizes the objective. Returns values of the original variables.
  LpSolution solve() const;

 private:
  struct Row {
    std::vector<std::pair<int, double>> terms;
    char relation;
    double rhs;
  };
  std::vector<double> lower_, upper_, obj_;
  std::vector<Row> rows_;
};

}  // namespace polyrig
