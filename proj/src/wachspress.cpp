#include "polyrig/wachspress.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polyrig {

namespace {

// Volumes of the dual faces needed for the coordinates and the matrix,
// computed from a single vertex enumeration of H = (P - x)°.
struct DualVolumes {
  Vector facetVol;  // per vertex index of P
  Matrix ridgeVol;  // per edge (i,j); 0 elsewhere
};

DualVolumes dual_face_volumes(const Matrix& shifted, const std::vector<std::pair<int, int>>& edges,
                              double tol) {
  const int n = static_cast<int>(shifted.rows());
  const int d = static_cast<int>(shifted.cols());
  HPolytope H{shifted, Vector::Ones(n)};
  auto verts = enumerate_vertices(H, tol);

  std::vector<std::vector<int>> activeOf(n);
  for (size_t v = 0; v < verts.size(); ++v)
    for (int i = 0; i < n; ++i)
      if (std::abs(shifted.row(i).dot(verts[v]) - 1.0) <= 1e3 * on_tol(tol, verts[v]))
        activeOf[i].push_back(static_cast<int>(v));

  auto gather = [&](const std::vector<int>& ids) {
    Matrix F(static_cast<int>(ids.size()), d);
    for (size_t r = 0; r < ids.size(); ++r) F.row(static_cast<int>(r)) = verts[ids[r]];
    return F;
  };

  DualVolumes out;
  out.facetVol = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(activeOf[i].size()) < d) throw EmptyFace("dual facet missing for vertex");
    out.facetVol[i] = point_set_volume(gather(activeOf[i]), d - 1, tol);
  }
  out.ridgeVol = Matrix::Zero(n, n);
  for (auto [i, j] : edges) {
    std::vector<int> common;
    std::set_intersection(activeOf[i].begin(), activeOf[i].end(), activeOf[j].begin(), activeOf[j].end(),
                          std::back_inserter(common));
    if (common.empty()) throw EmptyFace("dual ridge missing for edge");
    const double vol = (d >= 2) ? point_set_volume(gather(common), d - 2, tol) : 0.0;
    out.ridgeVol(i, j) = out.ridgeVol(j, i) = vol;
  }
  return out;
}

}  // namespace

WachspressData wachspress(const Polytope& P, const Vector& x, double tol) {
  if (x.size() != P.dimension) throw DimensionMismatch("point dimension != polytope dimension");
  if (!P.containsInterior(x, tol)) throw PointNotInterior("wachspress point must be strictly interior");

  Matrix shifted = P.vertices.rowwise() - x.transpose();
  DualVolumes vols = dual_face_volumes(shifted, {}, tol);

  WachspressData data;
  data.point = x;
  data.alphaTilde = Vector(P.n());
  for (int i = 0; i < P.n(); ++i) data.alphaTilde[i] = vols.facetVol[i] / shifted.row(i).norm();
  data.alpha = data.alphaTilde / data.alphaTilde.sum();
  return data;
}

IzmestievData izmestiev(const Polytope& P, double tol) {
  const int n = P.n();
  Vector zero = Vector::Zero(P.dimension);
  if (!P.containsInterior(zero, tol)) throw OriginNotInterior("izmestiev matrix needs 0 in int(P)");

  DualVolumes vols = dual_face_volumes(P.vertices, P.edges, tol);

  Matrix Mt = Matrix::Zero(n, n);
  for (auto [i, j] : P.edges) {
    const double ni = P.vertices.row(i).norm();
    const double nj = P.vertices.row(j).norm();
    const double cosA = P.vertices.row(i).dot(P.vertices.row(j)) / (ni * nj);
    const double sinA = std::sqrt(std::max(0.0, 1.0 - cosA * cosA));
    // an interior origin cannot lie on the affine hull of an edge
    if (sinA < 1e-12) throw InconsistentDiagonal("degenerate angle between adjacent vertices");
    Mt(i, j) = Mt(j, i) = vols.ridgeVol(i, j) / (ni * nj * sinA);
  }
  const double scale = Mt.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    Vector rowSum = Vector::Zero(P.dimension);
    for (int j = 0; j < n; ++j)
      if (j != i) rowSum += Mt(i, j) * P.vertices.row(j).transpose();
    const double ni2 = P.vertices.row(i).squaredNorm();
    Mt(i, i) = -P.vertices.row(i).dot(rowSum) / ni2;
    const Vector residual = rowSum + Mt(i, i) * P.vertices.row(i).transpose();
    if (residual.norm() > 1e-6 * (1.0 + scale))
      throw InconsistentDiagonal("kernel condition cannot be met on row " + std::to_string(i));
  }

  IzmestievData data;
  data.Mtilde = Mt;
  data.sumTilde = Mt.sum();
  data.M = Mt / data.sumTilde;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(data.M);
  Vector ev = eig.eigenvalues().reverse();
  data.eigenvalues = ev;
  const double zeroCut = n * data.M.operatorNorm() * 1e-12;
  data.kernelDim = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(ev[i]) <= zeroCut) ++data.kernelDim;

  Vector z = eig.eigenvectors().col(n - 1);  // top eigenvalue
  if (z.sum() < 0) z = -z;
  data.perron = z / z.sum();
  return data;
}

static Matrix izmestiev_fd_impl(const Polytope& P, double step, double tol, bool parallel) {
  const int n = P.n();
  Vector zero = Vector::Zero(P.dimension);
  if (!P.containsInterior(zero, tol)) throw OriginNotInterior("finite differences need 0 in int(P)");
  if (!(step > 0.0 && step <= 0.01)) throw Error("step must be in (0, 0.01]");

  auto vol = [&](const Vector& c) { return volume_serial(generalized_polar(P, c), tol); };
  const double f0 = vol(Vector::Ones(n));

  struct Entry {
    int i, j;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) entries.push_back({i, j});

  Matrix H = Matrix::Zero(n, n);
  const int total = static_cast<int>(entries.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int k = 0; k < total; ++k) {
    const auto [i, j] = entries[k];
    Vector c = Vector::Ones(n);
    double value;
    if (i == j) {
      c[i] = 1.0 + step;
      const double fp = vol(c);
      c[i] = 1.0 - step;
      const double fm = vol(c);
      value = (fp - 2.0 * f0 + fm) / (step * step);
    } else {
      double acc = 0.0;
      for (int si = -1; si <= 1; si += 2) {
        for (int sj = -1; sj <= 1; sj += 2) {
          c.setOnes();
          c[i] = 1.0 + si * step;
          c[j] = 1.0 + sj * step;
          acc += si * sj * vol(c);
        }
      }
      value = acc / (4.0 * step * step);
    }
    H(i, j) = value;
    H(j, i) = value;
  }
  return H;
}

Matrix izmestiev_fd(const Polytope& P, double step, double tol) { return izmestiev_fd_impl(P, step, tol, true); }
Matrix izmestiev_fd_serial(const Polytope& P, double step, double tol) {
  return izmestiev_fd_impl(P, step, tol, false);
}

bool PropertyReport::allPass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

const PropertyCheck* PropertyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

PropertyReport verify_izmestiev(const Polytope& P, const IzmestievData& data, double tol) {
  const int n = P.n();
  const Matrix& M = data.M;
  PropertyReport report;
  auto add = [&](const std::string& name, double residual, double tolerance) {
    report.checks.push_back({name, residual <= tolerance, residual, tolerance});
  };

  std::vector<std::vector<bool>> isEdge(n, std::vector<bool>(n, false));
  for (auto [i, j] : P.edges) isEdge[i][j] = isEdge[j][i] = true;

  double minEdgeEntry = std::numeric_limits<double>::infinity();
  for (auto [i, j] : P.edges) minEdgeEntry = std::min(minEdgeEntry, M(i, j));
  report.checks.push_back({"edge_positivity", minEdgeEntry > tol, -minEdgeEntry, -tol});

  double nonEdgeMax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!isEdge[i][j]) nonEdgeMax = std::max(nonEdgeMax, std::abs(M(i, j)));
  add("non_edge_zeros", nonEdgeMax, tol);

  add("kernel_dimension", std::abs(data.kernelDim - P.dimension), 0.5);

  const double kerRes = (M * P.vertices).cwiseAbs().maxCoeff();
  add("kernel_contains_coordinates", kerRes, tol);

  // spectral signature: one positive eigenvalue of multiplicity one, d zeros,
  // the rest negative
  const Vector& ev = data.eigenvalues;
  const double zeroCut = n * M.operatorNorm() * 1e-12;
  int positives = 0, zeros = 0, negatives = 0;
  for (int i = 0; i < n; ++i) {
    if (ev[i] > zeroCut)
      ++positives;
    else if (ev[i] < -zeroCut)
      ++negatives;
    else
      ++zeros;
  }
  const bool signatureOk = positives == 1 && zeros == P.dimension && negatives == n - 1 - P.dimension;
  report.checks.push_back({"spectral_signature", signatureOk,
                           static_cast<double>(std::abs(positives - 1) + std::abs(zeros - P.dimension)),
                           0.0});

  const double perronMin = data.perron.minCoeff();
  report.checks.push_back({"perron_positivity", perronMin > 0.0, -std::min(0.0, perronMin), 0.0});

  Vector alpha = wachspress(P, Vector::Zero(P.dimension)).alpha;
  const double rowSumRes = (M.rowwise().sum() - alpha).cwiseAbs().maxCoeff();
  add("row_sum_identity", rowSumRes, tol);

  return report;
}

}  // namespace polyrig
