#include "polyrig/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace polyrig {

std::vector<std::vector<int>> EdgeGraph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (auto [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  return adj;
}

bool EdgeGraph::connected() const {
  if (n == 0) return true;
  auto adj = adjacency();
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

EdgeGraph edge_graph(const Polytope& P) { return EdgeGraph{P.n(), P.edges}; }

GraphEmbedding skeleton(const Polytope& P) {
  return GraphEmbedding{edge_graph(P), P.vertices, P.dimension};
}

double alpha_expansion(const Matrix& points, const Vector& alpha) {
  if (alpha.size() != points.rows()) throw DimensionMismatch("alpha length != point count");
  // 1/2 sum alpha_i alpha_j |x_i-x_j|^2 = sum alpha_i |x_i|^2 - |sum alpha_i x_i|^2
  const Vector mean = points.transpose() * alpha;
  double s = 0.0;
  for (int i = 0; i < points.rows(); ++i) s += alpha[i] * points.row(i).squaredNorm();
  return std::sqrt(std::max(0.0, s - mean.squaredNorm()));
}

AffineFit affine_fit(const Matrix& A, const Matrix& B) {
  const Eigen::RowVectorXd meanA = A.colwise().mean();
  const Eigen::RowVectorXd meanB = B.colwise().mean();
  const Matrix Ac = A.rowwise() - meanA;
  const Matrix Bc = B.rowwise() - meanB;
  // minimize |Ac T' - Bc|_F
  const Matrix Tt = Ac.completeOrthogonalDecomposition().solve(Bc);
  AffineFit fit;
  fit.map = Tt.transpose();
  fit.shift = meanB.transpose() - fit.map * meanA.transpose();
  fit.residual = (Ac * Tt - Bc).norm();
  return fit;
}

namespace {

void require_same_graph(const Polytope& P, const GraphEmbedding& q) {
  if (q.graph.n != P.n()) throw GraphMismatch("embedding vertex count differs from P");
  std::vector<std::pair<int, int>> a = P.edges, b = q.graph.edges;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw GraphMismatch("embedding edge set differs from the edge graph of P");
}

SideTerms side_terms(const Matrix& pts, const Matrix& M, const Vector& alpha,
                     const std::vector<std::pair<int, int>>& edges) {
  SideTerms t;
  t.edgeTerm = 0.0;
  for (auto [i, j] : edges) t.edgeTerm += M(i, j) * (pts.row(i) - pts.row(j)).squaredNorm();
  t.centerTerm = (pts.transpose() * alpha).squaredNorm();
  t.traceTerm = (M * pts * pts.transpose()).trace();
  const double e = alpha_expansion(pts, alpha);
  t.expansionSq = e * e;
  return t;
}

}  // namespace

ComparisonReport expansion_compare(const Polytope& P, const Vector& x, const GraphEmbedding& q,
                                   double tol) {
  require_same_graph(P, q);
  WachspressData wd = wachspress(P, x, tol);

  Matrix pPts = P.vertices.rowwise() - x.transpose();
  Polytope shifted = P;
  shifted.vertices = pPts;
  shifted.facetOffsets = P.facetOffsets - P.facetNormals * x;
  IzmestievData iz = izmestiev(shifted, tol);

  // translate q against the Perron vector: sum_i z_i q_i = 0
  const Vector zShift = q.points.transpose() * iz.perron;
  Matrix qPts = q.points.rowwise() - zShift.transpose();

  ComparisonReport rep;
  rep.alpha = wd.alpha;
  rep.pSide = side_terms(pPts, iz.M, wd.alpha, P.edges);
  rep.qSide = side_terms(qPts, iz.M, wd.alpha, P.edges);

  rep.maxEdgeExcess = -std::numeric_limits<double>::infinity();
  for (auto [i, j] : P.edges) {
    const double lp = (pPts.row(i) - pPts.row(j)).norm();
    const double lq = (qPts.row(i) - qPts.row(j)).norm();
    rep.maxEdgeExcess = std::max(rep.maxEdgeExcess, lq - lp);
  }
  const double scale = 1.0 + std::sqrt(rep.pSide.expansionSq);
  rep.edgesDominated = rep.maxEdgeExcess <= 1e3 * tol * scale;
  rep.inequalityHolds =
      std::sqrt(rep.pSide.expansionSq) >= std::sqrt(rep.qSide.expansionSq) - 1e3 * tol * scale;

  // equality case: all edge lengths agree and q is an affine image of skel(P)
  const double eqTol = 1e-7;
  bool lengthsEqual = true;
  for (auto [i, j] : P.edges) {
    const double lp = (pPts.row(i) - pPts.row(j)).norm();
    const double lq = (qPts.row(i) - qPts.row(j)).norm();
    if (std::abs(lp - lq) > eqTol * (1.0 + lp)) lengthsEqual = false;
  }
  AffineFit fit = affine_fit(pPts, qPts);
  rep.equalityDetected = lengthsEqual && fit.residual <= eqTol * scale;
  if (rep.equalityDetected) rep.affineWitness = fit;
  return rep;
}

Vector wachspress_map(const Polytope& P, const GraphEmbedding& target, const Vector& x, double tol) {
  if (target.graph.n != P.n()) throw GraphMismatch("target indexed differently from G_P");
  WachspressData wd = wachspress(P, x, tol);
  return target.points.transpose() * wd.alpha;
}

namespace {

// Nelder-Mead restricted to the interior of P, minimizing f.
Vector nelder_mead_interior(const Polytope& P, const std::function<double(const Vector&)>& f,
                            const Vector& start, double step, int iters) {
  const int d = P.dimension;
  std::vector<Vector> simplex{start};
  for (int k = 0; k < d; ++k) {
    Vector v = start + step * Vector::Unit(d, k);
    if (!P.containsInterior(v)) v = start - step * Vector::Unit(d, k);
    if (!P.containsInterior(v)) v = start;
    simplex.push_back(v);
  }
  std::vector<double> val(simplex.size());
  const double big = 1e100;
  auto eval = [&](const Vector& v) { return P.containsInterior(v) ? f(v) : big; };
  for (size_t i = 0; i < simplex.size(); ++i) val[i] = eval(simplex[i]);

  for (int it = 0; it < iters; ++it) {
    std::vector<int> order(simplex.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    std::vector<Vector> s2;
    std::vector<double> v2;
    for (int o : order) {
      s2.push_back(simplex[o]);
      v2.push_back(val[o]);
    }
    simplex = s2;
    val = v2;
    Vector centroid = Vector::Zero(d);
    for (size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i];
    centroid /= static_cast<double>(simplex.size() - 1);

    const Vector worst = simplex.back();
    Vector refl = centroid + (centroid - worst);
    double fr = eval(refl);
    if (fr < val.front()) {
      Vector exp = centroid + 2.0 * (centroid - worst);
      double fe = eval(exp);
      if (fe < fr) {
        simplex.back() = exp;
        val.back() = fe;
      } else {
        simplex.back() = refl;
        val.back() = fr;
      }
    } else if (fr < val[val.size() - 2]) {
      simplex.back() = refl;
      val.back() = fr;
    } else {
      Vector con = centroid + 0.5 * (worst - centroid);
      double fc = eval(con);
      if (fc < val.back()) {
        simplex.back() = con;
        val.back() = fc;
      } else {
        for (size_t i = 1; i < simplex.size(); ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          val[i] = eval(simplex[i]);
        }
      }
    }
    if ((simplex.front() - simplex.back()).norm() < 1e-12) break;
  }
  int best = 0;
  for (size_t i = 1; i < val.size(); ++i)
    if (val[i] < val[best]) best = static_cast<int>(i);
  return simplex[best];
}

}  // namespace

CertificateResult congruence_certificate(const Polytope& P, const GraphEmbedding& q, double tol) {
  require_same_graph(P, q);
  std::string offenders;
  for (auto [i, j] : P.edges) {
    const double lp = (P.vertices.row(i) - P.vertices.row(j)).norm();
    const double lq = (q.points.row(i) - q.points.row(j)).norm();
    if (lq > lp + 1e3 * tol * (1.0 + lp))
      offenders += " edge(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  for (int i = 0; i < P.n(); ++i) {
    if (q.points.row(i).norm() < P.vertices.row(i).norm() - 1e3 * tol * (1.0 + P.vertices.row(i).norm()))
      offenders += " vertex(" + std::to_string(i) + ")";
  }
  if (!offenders.empty()) throw PreconditionViolated("metric preconditions fail at:" + offenders);

  const double scale = 1.0 + P.vertices.cwiseAbs().maxCoeff();
  auto gap = [&](const Vector& x) {
    if (P.interiorMargin(x) < 1e-6 * scale) return 1e100;  // keep the search off the boundary
    return wachspress_map(P, q, x, tol).norm() - x.norm();
  };

  // canonical candidate first (the origin maps to itself under symmetric or
  // congruent targets), then a coarse interior grid with local refinement
  const int d = P.dimension;
  const int g = std::max(2, static_cast<int>(std::floor(std::pow(1e4, 1.0 / d))));
  Vector lo = P.vertices.colwise().minCoeff();
  Vector hi = P.vertices.colwise().maxCoeff();
  std::vector<std::pair<double, Vector>> cells;
  const Vector origin = Vector::Zero(d);
  if (P.containsInterior(origin, tol)) cells.push_back({gap(origin) - 1e-12, origin});
  std::vector<int> counter(d, 0);
  while (true) {
    Vector x(d);
    for (int k = 0; k < d; ++k) x[k] = lo[k] + (hi[k] - lo[k]) * (counter[k] + 0.5) / g;
    if (P.containsInterior(x, tol) && P.interiorMargin(x) > 1e-7 * scale) cells.push_back({gap(x), x});
    int k = 0;
    while (k < d && ++counter[k] == g) counter[k++] = 0;
    if (k == d) break;
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const double accept = 1e-7 * scale;
  Vector witness;
  double best = std::numeric_limits<double>::infinity();
  const int starts = std::min<int>(5, static_cast<int>(cells.size()));
  for (int s = 0; s < starts; ++s) {
    Vector x = cells[s].second;
    if (cells[s].first > accept) {
      const double step = 0.25 * (hi - lo).norm() / g;
      x = nelder_mead_interior(P, gap, x, step, 400);
    }
    const double v = gap(x);
    if (v < best) {
      best = v;
      witness = x;
    }
    if (best <= accept) break;
  }

  CertificateResult result;
  if (best > accept) {
    result.status = CertificateStatus::NoWitnessFound;
    result.witnessGap = best;
    result.gramDeviation = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  result.witness = witness;
  result.witnessGap = best;
  const Matrix gramP = P.vertices * P.vertices.transpose();
  const Matrix gramQ = q.points * q.points.transpose();
  result.gramDeviation = (gramP - gramQ).cwiseAbs().maxCoeff();
  if (result.gramDeviation <= 1e-6 * scale * scale) {
    result.status = CertificateStatus::Certified;
  } else if (best < -1e3 * accept) {
    // the witness is robustly below zero: a genuine failure of the conclusion
    result.status = CertificateStatus::ConclusionViolated;
  } else {
    // a tolerance-level witness that does not certify is no refutation
    result.status = CertificateStatus::NoWitnessFound;
  }
  return result;
}

OrderingReport inscribed_compare(const Polytope& P, const Polytope& Q, double tol) {
  if (P.faceLattice != Q.faceLattice) throw NotCombEquivalent("labeled face lattices differ");

  auto circumcenter = [&](const Polytope& X) -> std::pair<Vector, double> {
    // least squares center equidistant from all vertices:
    // 2<p_i - p_0, c> = |p_i|^2 - |p_0|^2
    const int n = X.n();
    Matrix A(n - 1, X.dimension);
    Vector b(n - 1);
    for (int i = 1; i < n; ++i) {
      A.row(i - 1) = 2.0 * (X.vertices.row(i) - X.vertices.row(0));
      b[i - 1] = X.vertices.row(i).squaredNorm() - X.vertices.row(0).squaredNorm();
    }
    Vector c = A.completeOrthogonalDecomposition().solve(b);
    Vector radii(n);
    for (int i = 0; i < n; ++i) radii[i] = (X.vertices.row(i).transpose() - c).norm();
    const double r = radii.mean();
    if ((radii.array() - r).abs().maxCoeff() > 1e3 * tol * (1.0 + r))
      throw NotInscribed("vertices are not equidistant from any center");
    return {c, r};
  };

  auto [cP, rP] = circumcenter(P);
  auto [cQ, rQ] = circumcenter(Q);
  Matrix pPts = P.vertices.rowwise() - cP.transpose();
  Matrix qPts = Q.vertices.rowwise() - cQ.transpose();
  Polytope Qc = Q;
  Qc.vertices = qPts;
  Qc.facetOffsets = Q.facetOffsets - Q.facetNormals * cQ;
  if (!Qc.containsInterior(Vector::Zero(Q.dimension), tol))
    throw OriginNotInterior("Q must contain its circumcenter in the interior");

  OrderingReport rep;
  rep.radiusP = rP;
  rep.radiusQ = rQ;
  rep.edgesDominated = true;
  for (auto [i, j] : P.edges) {
    const double lp = (pPts.row(i) - pPts.row(j)).norm();
    const double lq = (qPts.row(i) - qPts.row(j)).norm();
    if (lq > lp + 1e3 * tol * (1.0 + lp)) rep.edgesDominated = false;
  }
  rep.radiusOrdered = rP >= rQ - 1e3 * tol * (1.0 + rP);
  rep.equalityDetected = std::abs(rP - rQ) <= 1e-7 * (1.0 + rP);
  const Matrix gramDiff = pPts * pPts.transpose() - qPts * qPts.transpose();
  rep.congruent = gramDiff.cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + rP * rP);
  return rep;
}

GraphEmbedding shrink_edges_randomly(const GraphEmbedding& base, std::mt19937_64& rng, double maxJiggle) {
  const int n = base.graph.n;
  const int e = base.ambient;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // contraction toward a random interior-ish center plus a backtracked jiggle
  Vector center = Vector::Zero(e);
  for (int k = 0; k < e; ++k) center[k] = gauss(rng) * 0.1;
  const double s = 0.05 + 0.45 * unit(rng);
  Matrix contracted(n, e);
  for (int i = 0; i < n; ++i) contracted.row(i) = (1.0 - s) * base.points.row(i) + s * center.transpose();

  Matrix jiggle(n, e);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < e; ++k) jiggle(i, k) = gauss(rng);
  double minEdge = std::numeric_limits<double>::infinity();
  for (auto [i, j] : base.graph.edges)
    minEdge = std::min(minEdge, (base.points.row(i) - base.points.row(j)).norm());
  jiggle *= maxJiggle * minEdge * s / (1.0 + jiggle.cwiseAbs().maxCoeff());

  double t = 1.0;
  for (int attempt = 0; attempt < 60; ++attempt, t *= 0.5) {
    Matrix q = contracted + t * jiggle;
    bool ok = true;
    for (auto [i, j] : base.graph.edges) {
      const double lq = (q.row(i) - q.row(j)).norm();
      const double lp = (base.points.row(i) - base.points.row(j)).norm();
      if (lq > lp) {
        ok = false;
        break;
      }
    }
    if (ok) return GraphEmbedding{base.graph, q, e};
  }
  return GraphEmbedding{base.graph, contracted, e};
}

}  // namespace polyrig
