#include "polyrig/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyrig {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Tableau simplex on  max c'x, Ax = b, x >= 0  with a given starting basis.
// Dantzig rule with a Bland fallback after repeated degenerate pivots.
class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b, const Vector& c, std::vector<int> basis)
      : m_(static_cast<int>(A.rows())),
        n_(static_cast<int>(A.cols())),
        colLimit_(static_cast<int>(A.cols())),
        T_(A.rows() + 1, A.cols() + 1),
        basis_(std::move(basis)) {
    T_.topLeftCorner(m_, n_) = A;
    T_.topRightCorner(m_, 1) = b;
    T_.row(m_).head(n_) = -c.transpose();
    T_(m_, n_) = 0.0;
    for (int r = 0; r < m_; ++r) priceOut(r);
  }

  LpStatus run(int maxIters) {
    int degenerate = 0;
    for (int it = 0; it < maxIters; ++it) {
      const bool bland = degenerate > 2 * (m_ + n_);
      int col = chooseColumn(bland);
      if (col < 0) return LpStatus::Optimal;
      int row = chooseRow(col, bland);
      if (row < 0) return LpStatus::Unbounded;
      if (T_(row, n_) < kPivotTol)
        ++degenerate;
      else
        degenerate = 0;
      pivot(row, col);
    }
    return LpStatus::Optimal;  // iteration cap; current point is feasible
  }

  double objective() const { return T_(m_, n_); }

  Vector solution() const {
    Vector x = Vector::Zero(n_);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = T_(r, n_);
    return x;
  }

  const std::vector<int>& basis() const { return basis_; }

  // Replaces the objective row (used when switching from phase 1 to phase 2).
  void setObjective(const Vector& c) {
    T_.row(m_).head(n_) = -c.transpose();
    T_(m_, n_) = 0.0;
    for (int r = 0; r < m_; ++r) priceOut(r);
  }

  // Drives artificial variables (columns >= firstArtificial) out of the basis
  // where possible and locks them out of later pivots; rows that cannot be
  // repaired are redundant and neutralized.
  void purgeArtificials(int firstArtificial) {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < firstArtificial) continue;
      int col = -1;
      for (int j = 0; j < firstArtificial; ++j)
        if (std::abs(T_(r, j)) > 1e-9) { col = j; break; }
      if (col >= 0)
        pivot(r, col);
      else
        T_.row(r).setZero();  // redundant constraint
    }
    colLimit_ = firstArtificial;
  }

 private:
  void priceOut(int r) {
    const double w = T_(m_, basis_[r]);
    if (w != 0.0) T_.row(m_) -= w * T_.row(r);
  }

  int chooseColumn(bool bland) const {
    int best = -1;
    double bestVal = -kPivotTol;
    for (int j = 0; j < colLimit_; ++j) {
      const double red = T_(m_, j);
      if (red < bestVal) {
        if (bland) return j;
        bestVal = red;
        best = j;
      }
    }
    return best;
  }

  int chooseRow(int col, bool bland) const {
    int best = -1;
    double bestRatio = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double a = T_(r, col);
      if (a <= kPivotTol) continue;
      const double ratio = T_(r, n_) / a;
      if (best < 0 || ratio < bestRatio - kPivotTol ||
          (bland && ratio < bestRatio + kPivotTol && basis_[r] < basis_[best])) {
        best = r;
        bestRatio = ratio;
      }
    }
    return best;
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int r = 0; r <= m_; ++r) {
      if (r == row) continue;
      const double f = T_(r, col);
      if (f != 0.0) T_.row(r) -= f * T_.row(row);
    }
    basis_[row] = col;
  }

  int m_, n_;
  int colLimit_ = 0;
  Matrix T_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const Matrix& A0, const Vector& b0, const Vector& c) {
  const int m = static_cast<int>(A0.rows());
  const int n = static_cast<int>(A0.cols());
  Matrix A = A0;
  Vector b = b0;
  for (int r = 0; r < m; ++r) {
    if (b[r] < 0) {
      A.row(r) *= -1.0;
      b[r] *= -1.0;
    }
  }
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();

  // Phase 1: minimize the sum of artificial variables.
  Matrix A1(m, n + m);
  A1.leftCols(n) = A;
  A1.rightCols(m) = Matrix::Identity(m, m);
  Vector c1 = Vector::Zero(n + m);
  c1.tail(m).setConstant(-1.0);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) basis[r] = n + r;

  Tableau tab(A1, b, c1, basis);
  tab.run(50 * (m + n) + 2000);
  if (tab.objective() < -kFeasTol * scale) return {LpStatus::Infeasible, Vector(), 0.0};
  tab.purgeArtificials(n);

  // Phase 2.
  Vector c2 = Vector::Zero(n + m);
  c2.head(n) = c;
  tab.setObjective(c2);
  const LpStatus status = tab.run(50 * (m + n) + 5000);
  if (status == LpStatus::Unbounded) return {LpStatus::Unbounded, Vector(), 0.0};
  Vector x = tab.solution().head(n);
  return {LpStatus::Optimal, x, c.dot(x)};
}

int LpBuilder::addVariable(double lower, double upper, double objCoeff) {
  lower_.push_back(lower);
  upper_.push_back(upper);
  obj_.push_back(objCoeff);
  return static_cast<int>(lower_.size()) - 1;
}

void LpBuilder::setObjective(int var, double coeff) { obj_[var] = coeff; }

void LpBuilder::addRow(const std::vector<std::pair<int, double>>& terms, char relation, double rhs) {
  rows_.push_back({terms, relation, rhs});
}

LpSolution LpBuilder::solve() const {
  const int nv = static_cast<int>(lower_.size());
  // Column layout per variable: shifted (one col) when lower bounded, split
  // (two cols) when free. Upper bounds become extra rows.
  std::vector<int> colOf(nv), negColOf(nv, -1);
  int ncols = 0;
  std::vector<std::pair<int, double>> upperRows;  // (var, bound width)
  for (int v = 0; v < nv; ++v) {
    colOf[v] = ncols++;
    if (lower_[v] == -kInf) {
      if (upper_[v] != kInf)
        throw std::invalid_argument("LpBuilder: an upper-bounded variable needs a finite lower bound");
      negColOf[v] = ncols++;
    } else if (upper_[v] != kInf) {
      upperRows.push_back({v, upper_[v] - lower_[v]});
    }
  }
  const int nrows = static_cast<int>(rows_.size());
  int slackCount = 0;
  for (const Row& r : rows_)
    if (r.relation != '=') ++slackCount;
  const int totalRows = nrows + static_cast<int>(upperRows.size());
  const int totalCols = ncols + slackCount + static_cast<int>(upperRows.size());

  Matrix A = Matrix::Zero(totalRows, totalCols);
  Vector b = Vector::Zero(totalRows);
  Vector c = Vector::Zero(totalCols);

  auto shift = [&](int v) { return lower_[v] == -kInf ? 0.0 : lower_[v]; };

  for (int v = 0; v < nv; ++v) {
    c[colOf[v]] += obj_[v];
    if (negColOf[v] >= 0) c[negColOf[v]] -= obj_[v];
  }

  int slackCol = ncols;
  for (int r = 0; r < nrows; ++r) {
    double rhs = rows_[r].rhs;
    for (auto [v, coeff] : rows_[r].terms) {
      A(r, colOf[v]) += coeff;
      if (negColOf[v] >= 0) A(r, negColOf[v]) -= coeff;
      rhs -= coeff * shift(v);
    }
    b[r] = rhs;
    if (rows_[r].relation == '<')
      A(r, slackCol++) = 1.0;
    else if (rows_[r].relation == '>')
      A(r, slackCol++) = -1.0;
  }
  for (size_t k = 0; k < upperRows.size(); ++k) {
    const int r = nrows + static_cast<int>(k);
    A(r, colOf[upperRows[k].first]) = 1.0;
    A(r, slackCol++) = 1.0;
    b[r] = upperRows[k].second;
  }

  LpSolution raw = solve_lp(A, b, c);
  if (raw.status != LpStatus::Optimal) return raw;
  Vector x(nv);
  for (int v = 0; v < nv; ++v) {
    double val = raw.x[colOf[v]];
    if (negColOf[v] >= 0) val -= raw.x[negColOf[v]];
    x[v] = val + shift(v);
  }
  double obj = 0.0;
  for (int v = 0; v < nv; ++v) obj += obj_[v] * x[v];
  return {LpStatus::Optimal, x, obj};
}

}  // namespace polyrig
