#include "polyrig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polyrig/linprog.hpp"

namespace polyrig {

namespace detail {

int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<int> unrank_combination(int64_t rank, int n, int k) {
  std::vector<int> out(k);
  int elem = 0;
  for (int pos = 0; pos < k; ++pos) {
    while (true) {
      const int64_t block = binomial(n - elem - 1, k - pos - 1);
      if (rank < block) break;
      rank -= block;
      ++elem;
    }
    out[pos] = elem++;
  }
  return out;
}

}  // namespace detail

namespace {

// Unit normal of the hyperplane through the given points, or nullopt when
// they are affinely dependent.
std::optional<Vector> hyperplane_normal(const Matrix& pts, const std::vector<int>& idx, double tol) {
  const int d = static_cast<int>(pts.cols());
  Matrix D(static_cast<int>(idx.size()) - 1, d);
  for (size_t r = 1; r < idx.size(); ++r) D.row(static_cast<int>(r) - 1) = pts.row(idx[r]) - pts.row(idx[0]);
  Eigen::JacobiSVD<Matrix> svd(D, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (idx.size() > 1 && sv.size() >= d - 1 && sv[d - 2] <= tol * (1.0 + sv[0])) return std::nullopt;
  Vector nu = svd.matrixV().col(d - 1);
  return nu;
}

std::vector<std::vector<int>> scan_facets(const Matrix& pts, double tol, Matrix* normalsOut,
                                          Vector* offsetsOut) {
  const int n = static_cast<int>(pts.rows());
  const int d = static_cast<int>(pts.cols());
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> facets;
  std::vector<Vector> normals;
  std::vector<double> offsets;

  const int64_t total = detail::binomial(n, d);
  for (int64_t rank = 0; rank < total; ++rank) {
    const std::vector<int> sub = detail::unrank_combination(rank, n, d);
    auto nuOpt = hyperplane_normal(pts, sub, tol);
    if (!nuOpt) continue;
    Vector nu = *nuOpt;
    double b = nu.dot(pts.row(sub[0]));
    bool above = false, below = false;
    std::vector<int> on;
    for (int k = 0; k < n; ++k) {
      const double dist = nu.dot(pts.row(k)) - b;
      const double otol = tol * (1.0 + pts.row(k).norm());
      if (dist > otol)
        above = true;
      else if (dist < -otol)
        below = true;
      else
        on.push_back(k);
      if (above && below) break;
    }
    if (above && below) continue;
    if (above) {
      nu = -nu;
      b = -b;
    }
    if (seen.insert(on).second) {
      facets.push_back(on);
      normals.push_back(nu);
      offsets.push_back(b);
    }
  }
  if (normalsOut) {
    normalsOut->resize(static_cast<int>(facets.size()), d);
    offsetsOut->resize(static_cast<int>(facets.size()));
    for (size_t f = 0; f < facets.size(); ++f) {
      normalsOut->row(static_cast<int>(f)) = normals[f];
      (*offsetsOut)[static_cast<int>(f)] = offsets[f];
    }
  }
  return facets;
}

// Is pts.row(k) a convex combination of the other rows?
bool in_hull_of_others(const Matrix& pts, int k, double tol) {
  const int n = static_cast<int>(pts.rows());
  const int d = static_cast<int>(pts.cols());
  LpBuilder lp;
  std::vector<int> vars;
  for (int j = 0; j < n; ++j)
    if (j != k) vars.push_back(lp.addVariable(0.0));
  for (int c = 0; c < d; ++c) {
    std::vector<std::pair<int, double>> terms;
    int vi = 0;
    for (int j = 0; j < n; ++j)
      if (j != k) terms.push_back({vars[vi++], pts(j, c)});
    lp.addRow(terms, '=', pts(k, c));
  }
  std::vector<std::pair<int, double>> ones;
  for (int v : vars) ones.push_back({v, 1.0});
  lp.addRow(ones, '=', 1.0);
  (void)tol;
  return lp.solve().status == LpStatus::Optimal;
}

int affine_rank(const Matrix& pts, double tol) {
  if (pts.rows() <= 1) return 0;
  Matrix C = pts.rowwise() - pts.colwise().mean();
  Eigen::JacobiSVD<Matrix> svd(C);
  const auto& sv = svd.singularValues();
  int r = 0;
  const double cut = tol * static_cast<double>(pts.rows()) * (1.0 + sv[0]);
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++r;
  return r;
}

Matrix rows_of(const Matrix& pts, const std::vector<int>& idx) {
  Matrix out(static_cast<int>(idx.size()), pts.cols());
  for (size_t r = 0; r < idx.size(); ++r) out.row(static_cast<int>(r)) = pts.row(idx[r]);
  return out;
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<std::vector<int>> Polytope::adjacency() const {
  std::vector<std::vector<int>> adj(n());
  for (auto [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  return adj;
}

double Polytope::interiorMargin(const Vector& x) const {
  double m = std::numeric_limits<double>::infinity();
  for (int f = 0; f < facetNormals.rows(); ++f)
    m = std::min(m, facetOffsets[f] - facetNormals.row(f).dot(x));
  return m;
}

bool Polytope::containsInterior(const Vector& x, double tol) const {
  return interiorMargin(x) > on_tol(tol, x);
}

static Polytope assemble_polytope(const Matrix& points, std::vector<std::vector<int>> facets,
                                  Matrix facetNormals, Vector facetOffsets, double tol) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  Polytope P;
  P.dimension = d;
  P.vertices = points;
  P.facets = std::move(facets);
  P.facetNormals = std::move(facetNormals);
  P.facetOffsets = std::move(facetOffsets);

  // Face lattice as the closure of facet vertex sets under intersection.
  std::set<std::vector<int>> closure(P.facets.begin(), P.facets.end());
  std::vector<std::vector<int>> work(P.facets);
  while (!work.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& f : work) {
      for (const auto& g : P.facets) {
        auto h = intersect_sorted(f, g);
        if (h.empty() || h == f) continue;
        if (closure.insert(h).second) next.push_back(h);
      }
    }
    work = std::move(next);
  }
  P.faceLattice.assign(d, {});
  for (const auto& face : closure) {
    const int k = affine_rank(rows_of(points, face), tol);
    if (k <= d - 1) P.faceLattice[k].push_back(face);
  }
  for (auto& level : P.faceLattice) std::sort(level.begin(), level.end());

  // Edge rule: {i,j} is an edge iff the facets containing both intersect in {i,j}.
  std::vector<std::vector<int>> facetsOf(n);
  for (int f = 0; f < static_cast<int>(P.facets.size()); ++f)
    for (int v : P.facets[f]) facetsOf[v].push_back(f);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> common = intersect_sorted(facetsOf[i], facetsOf[j]);
      if (common.empty()) continue;
      std::vector<int> meet = P.facets[common[0]];
      for (size_t k = 1; k < common.size() && meet.size() > 2; ++k)
        meet = intersect_sorted(meet, P.facets[common[k]]);
      if (meet == std::vector<int>{i, j}) P.edges.push_back({i, j});
    }
  }

  // Edge graph must be connected.
  std::vector<int> comp(n, -1);
  std::vector<int> stack{0};
  comp[0] = 0;
  auto adj = P.adjacency();
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (comp[w] < 0) {
        comp[w] = 0;
        stack.push_back(w);
      }
  }
  if (std::any_of(comp.begin(), comp.end(), [](int c) { return c < 0; }))
    throw DisconnectedGraph("edge graph of the computed lattice is not connected");
  return P;
}

Polytope build_polytope(const Matrix& points, double tol) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (n <= d) throw DegenerateInput("need at least d+1 points, got " + std::to_string(n));
  if (affine_rank(points, tol) < d)
    throw NotFullDimensional("points span less than " + std::to_string(d) + " dimensions");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((points.row(i) - points.row(j)).norm() <= on_tol(tol, Vector(points.row(i))))
        throw RedundantVertex("points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  for (int k = 0; k < n; ++k)
    if (in_hull_of_others(points, k, tol))
      throw RedundantVertex("point " + std::to_string(k) + " is not an extreme point");

  Matrix normals;
  Vector offsets;
  auto facets = scan_facets(points, tol, &normals, &offsets);
  return assemble_polytope(points, std::move(facets), std::move(normals), std::move(offsets), tol);
}

Polytope build_polytope_with_facets(const Matrix& points, const std::vector<std::vector<int>>& facets,
                                    double tol) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (n <= d) throw DegenerateInput("need at least d+1 points");
  if (affine_rank(points, tol) < d) throw NotFullDimensional("points span less than d dimensions");

  Matrix normals(static_cast<int>(facets.size()), d);
  Vector offsets(static_cast<int>(facets.size()));
  std::vector<std::vector<int>> sorted = facets;
  for (size_t f = 0; f < sorted.size(); ++f) {
    auto& face = sorted[f];
    std::sort(face.begin(), face.end());
    if (static_cast<int>(face.size()) < d) throw ParseError("facet with fewer than d vertices");
    auto nuOpt = hyperplane_normal(points, face, tol);
    if (!nuOpt) throw ParseError("facet vertices are affinely dependent");
    Vector nu = *nuOpt;
    double b = nu.dot(points.row(face[0]));
    for (int v : face)
      if (std::abs(nu.dot(points.row(v)) - b) > on_tol(tol, Vector(points.row(v))))
        throw ParseError("facet vertices are not coplanar");
    bool above = false, below = false;
    for (int k = 0; k < n; ++k) {
      if (std::binary_search(face.begin(), face.end(), k)) continue;
      const double dist = nu.dot(points.row(k)) - b;
      if (dist > on_tol(tol, Vector(points.row(k))))
        above = true;
      else if (dist < -on_tol(tol, Vector(points.row(k))))
        below = true;
      else
        throw ParseError("vertex " + std::to_string(k) + " lies on a facet that omits it");
    }
    if (above && below) throw ParseError("stated facet does not support the polytope");
    if (above) {
      nu = -nu;
      b = -b;
    }
    normals.row(static_cast<int>(f)) = nu;
    offsets[static_cast<int>(f)] = b;
  }
  return assemble_polytope(points, std::move(sorted), std::move(normals), std::move(offsets), tol);
}

HPolytope generalized_polar(const Polytope& P, const Vector& c) {
  Vector zero = Vector::Zero(P.dimension);
  if (!P.containsInterior(zero)) throw OriginNotInterior("generalized polar needs 0 in int(P)");
  if (c.size() != P.n()) throw DimensionMismatch("offset vector length != vertex count");
  if ((c.array() <= 0.0).any()) throw NonpositiveOffset("all offsets must be positive");
  return HPolytope{P.vertices, c};
}

HPolytope polar_dual(const Polytope& P) { return generalized_polar(P, Vector::Ones(P.n())); }

namespace {

struct Candidate {
  int64_t rank;
  Vector x;
};

void scan_range(const HPolytope& H, double tol, int64_t lo, int64_t hi, std::vector<Candidate>& out) {
  const int m = H.size();
  const int d = H.dim();
  Matrix A(d, d);
  Vector b(d);
  for (int64_t rank = lo; rank < hi; ++rank) {
    const std::vector<int> sub = detail::unrank_combination(rank, m, d);
    for (int r = 0; r < d; ++r) {
      A.row(r) = H.normals.row(sub[r]);
      b[r] = H.offsets[sub[r]];
    }
    Eigen::PartialPivLU<Matrix> lu(A);
    // rcond-style guard against near-singular systems
    const double minDiag = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (minDiag <= 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) continue;
    Vector x = lu.solve(b);
    if ((A * x - b).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + b.cwiseAbs().maxCoeff())) continue;
    bool feasible = true;
    for (int k = 0; k < m; ++k) {
      if (H.normals.row(k).dot(x) - H.offsets[k] > on_tol(std::max(tol, 1e-9), x)) {
        feasible = false;
        break;
      }
    }
    if (feasible) out.push_back({rank, x});
  }
}

std::vector<Vector> dedup_candidates(std::vector<Candidate>& cands, double tol) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.rank < b.rank; });
  std::vector<Vector> verts;
  for (const auto& c : cands) {
    bool fresh = true;
    for (const auto& v : verts) {
      if ((c.x - v).norm() <= 1e3 * on_tol(tol, v)) {
        fresh = false;
        break;
      }
    }
    if (fresh) verts.push_back(c.x);
  }
  return verts;
}

}  // namespace

std::vector<Vector> enumerate_vertices_serial(const HPolytope& H, double tol) {
  const int64_t total = detail::binomial(H.size(), H.dim());
  std::vector<Candidate> cands;
  scan_range(H, tol, 0, total, cands);
  return dedup_candidates(cands, tol);
}

std::vector<Vector> enumerate_vertices(const HPolytope& H, double tol) {
  const int64_t total = detail::binomial(H.size(), H.dim());
#ifdef _OPENMP
  if (total >= 512 && !omp_in_parallel()) {
    const int nt = omp_get_max_threads();
    std::vector<std::vector<Candidate>> parts(nt);
#pragma omp parallel num_threads(nt)
    {
      const int t = omp_get_thread_num();
      const int64_t lo = total * t / nt;
      const int64_t hi = total * (t + 1) / nt;
      scan_range(H, tol, lo, hi, parts[t]);
    }
    std::vector<Candidate> cands;
    for (auto& p : parts) cands.insert(cands.end(), p.begin(), p.end());
    return dedup_candidates(cands, tol);
  }
#endif
  return enumerate_vertices_serial(H, tol);
}

double cone_interior_margin(const Matrix& generators, const Vector& target) {
  const int d = static_cast<int>(generators.cols());
  const int m = static_cast<int>(generators.rows());
  Matrix U = generators;
  for (int r = 0; r < m; ++r) {
    const double nrm = U.row(r).norm();
    if (nrm > 0) U.row(r) /= nrm;
  }
  LpBuilder lp;
  const int rvar = lp.addVariable(0.0, 1.0, 1.0);
  // one multiplier bundle per probe direction +-e_j
  for (int j = 0; j < 2 * d; ++j) {
    std::vector<int> lambda(m);
    for (int k = 0; k < m; ++k) lambda[k] = lp.addVariable(0.0);
    const int axis = j / 2;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    for (int c = 0; c < d; ++c) {
      std::vector<std::pair<int, double>> terms;
      for (int k = 0; k < m; ++k) terms.push_back({lambda[k], U(k, c)});
      if (c == axis) terms.push_back({rvar, -sign});
      lp.addRow(terms, '=', target[c]);
    }
  }
  LpSolution sol = lp.solve();
  if (sol.status != LpStatus::Optimal) return -1.0;
  return sol.objective;
}

bool is_bounded(const HPolytope& H, double tol) {
  // bounded iff the constraint normals positively span the space
  return cone_interior_margin(H.normals, Vector::Zero(H.dim())) > tol;
}

Vector chebyshev_center(const HPolytope& H, double* radius) {
  const int d = H.dim();
  LpBuilder lp;
  const int rvar = lp.addVariable(0.0, LpBuilder::kInf, 1.0);
  std::vector<int> y(d);
  for (int c = 0; c < d; ++c) y[c] = lp.addVariable();
  for (int i = 0; i < H.size(); ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int c = 0; c < d; ++c) terms.push_back({y[c], H.normals(i, c)});
    terms.push_back({rvar, H.normals.row(i).norm()});
    lp.addRow(terms, '<', H.offsets[i]);
  }
  LpSolution sol = lp.solve();
  if (sol.status != LpStatus::Optimal) {
    if (radius) *radius = -1.0;
    return Vector::Zero(d);
  }
  if (radius) *radius = sol.x[0];
  Vector center(d);
  for (int c = 0; c < d; ++c) center[c] = sol.x[1 + c];
  return center;
}

namespace detail {

std::vector<DualFacet> dual_facets(const HPolytope& H, const std::vector<Vector>& verts, double tol) {
  std::vector<DualFacet> out;
  std::set<std::vector<int>> seen;
  for (int i = 0; i < H.size(); ++i) {
    std::vector<int> on;
    for (size_t v = 0; v < verts.size(); ++v)
      if (std::abs(H.normals.row(i).dot(verts[v]) - H.offsets[i]) <= 1e3 * on_tol(tol, verts[v]))
        on.push_back(static_cast<int>(v));
    if (static_cast<int>(on.size()) < H.dim()) continue;
    if (!seen.insert(on).second) continue;
    out.push_back({i, std::move(on)});
  }
  return out;
}

}  // namespace detail

double point_set_volume(const Matrix& points, int dim, double tol) {
  if (dim == 0) return 1.0;
  const int k = static_cast<int>(points.rows());
  if (k <= dim) return 0.0;

  // local orthonormal coordinates of the affine hull
  Eigen::RowVectorXd mean = points.colwise().mean();
  Matrix C = points.rowwise() - mean;
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() < dim || sv[dim - 1] <= tol * static_cast<double>(k) * (1.0 + sv[0])) return 0.0;
  Matrix coords = C * svd.matrixV().leftCols(dim);

  if (dim == 1) {
    return coords.col(0).maxCoeff() - coords.col(0).minCoeff();
  }
  if (dim == 2) {
    // vertices of a 2-face are in convex position: shoelace after angular sort
    Eigen::RowVector2d cen = coords.colwise().mean();
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> ang(k);
    for (int i = 0; i < k; ++i) ang[i] = std::atan2(coords(i, 1) - cen[1], coords(i, 0) - cen[0]);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto& a = coords.row(order[i]);
      const auto& b = coords.row(order[(i + 1) % k]);
      s += a[0] * b[1] - b[0] * a[1];
    }
    return std::abs(s) / 2.0;
  }

  // dim >= 3: cone decomposition over the facets of conv(coords)
  Matrix normals;
  Vector offsets;
  auto facets = scan_facets(coords, tol, &normals, &offsets);
  Eigen::RowVectorXd centroid = coords.colwise().mean();
  double total = 0.0;
  for (size_t f = 0; f < facets.size(); ++f) {
    const double fvol = point_set_volume(rows_of(coords, facets[f]), dim - 1, tol);
    const double h = std::abs(offsets[static_cast<int>(f)] - normals.row(static_cast<int>(f)).dot(centroid));
    total += fvol * h / static_cast<double>(dim);
  }
  return total;
}

static double volume_impl(const HPolytope& H, double tol, bool parallel) {
  const int d = H.dim();
  if (!is_bounded(H, tol)) throw Unbounded("halfspace intersection is unbounded");
  double inradius = 0.0;
  Vector center = chebyshev_center(H, &inradius);
  if (inradius <= on_tol(tol, center)) throw EmptyInterior("halfspace intersection has empty interior");

  auto verts = parallel ? enumerate_vertices(H, tol) : enumerate_vertices_serial(H, tol);
  Matrix V(static_cast<int>(verts.size()), d);
  for (size_t i = 0; i < verts.size(); ++i) V.row(static_cast<int>(i)) = verts[i];

  auto facets = detail::dual_facets(H, verts, tol);
  const int nf = static_cast<int>(facets.size());
  std::vector<double> cones(nf);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel && !omp_in_parallel())
#endif
  for (int f = 0; f < nf; ++f) {
    Matrix F = rows_of(V, facets[f].vertexIds);
    const double fvol = point_set_volume(F, d - 1, tol);
    const Vector nu = H.normals.row(facets[f].constraint);
    const double h = (H.offsets[facets[f].constraint] - nu.dot(center)) / nu.norm();
    cones[f] = fvol * h / static_cast<double>(d);
  }
  // fixed summation order keeps the result identical across thread counts
  double total = 0.0;
  for (int f = 0; f < nf; ++f) total += cones[f];
  return total;
}

double volume(const HPolytope& H, double tol) { return volume_impl(H, tol, true); }
double volume_serial(const HPolytope& H, double tol) { return volume_impl(H, tol, false); }

double relative_face_volume(const HPolytope& H, const std::vector<int>& activeSet, double tol) {
  const int d = H.dim();
  const int k = static_cast<int>(activeSet.size());
  auto verts = enumerate_vertices(H, tol);
  std::vector<Vector> face;
  for (const auto& v : verts) {
    bool active = true;
    for (int i : activeSet) {
      if (std::abs(H.normals.row(i).dot(v) - H.offsets[i]) > 1e3 * on_tol(tol, v)) {
        active = false;
        break;
      }
    }
    if (active) face.push_back(v);
  }
  if (face.empty()) throw EmptyFace("no vertex of H satisfies the active set with equality");
  if (k >= d) return 1.0;  // 0-dimensional face
  Matrix F(static_cast<int>(face.size()), d);
  for (size_t i = 0; i < face.size(); ++i) F.row(static_cast<int>(i)) = face[i];
  return point_set_volume(F, d - k, tol);
}

}  // namespace polyrig
