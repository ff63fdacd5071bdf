#include "polyrig/sdp.hpp"

#include <algorithm>
#include <cmath>

namespace polyrig {

SdpProblem build_sdp(const EdgeGraph& graph, const Vector& lengths, const Vector& alpha) {
  if (!graph.connected()) throw DisconnectedGraph("reconstruction needs a connected edge graph");
  if (alpha.size() != graph.n || (alpha.array() <= 0.0).any())
    throw InvalidWeights("alpha must be strictly positive over all vertices");
  if (lengths.size() != static_cast<int>(graph.edges.size()) || (lengths.array() < 0.0).any())
    throw InvalidWeights("need one nonnegative length per edge");
  SdpProblem prob;
  prob.n = graph.n;
  prob.edges = graph.edges;
  prob.squaredLengths = lengths.array().square();
  prob.alpha = alpha / alpha.sum();
  return prob;
}

namespace {

// Dykstra projection onto the polyhedron of edge and centering constraints.
Matrix project_constraints(const SdpProblem& prob, Matrix Y, int sweeps, double tol) {
  const int n = prob.n;
  const int m = static_cast<int>(prob.edges.size());
  const Matrix A0 = prob.alpha * prob.alpha.transpose();
  const double a0n = A0.squaredNorm();
  std::vector<double> corr(m, 0.0);  // Dykstra corrections; halfspaces touch 4 entries
  Matrix corr0 = Matrix::Zero(n, n);

  for (int s = 0; s < sweeps; ++s) {
    double moved = 0.0;
    for (int k = 0; k < m; ++k) {
      auto [i, j] = prob.edges[k];
      // add back correction, then project onto <E_k, Y> <= b_k with |E_k|^2 = 4
      const double val = (Y(i, i) - 2.0 * Y(i, j) + Y(j, j)) + 4.0 * corr[k] - prob.squaredLengths[k];
      const double t = std::max(0.0, val / 4.0);
      const double delta = t - corr[k];
      if (delta != 0.0) {
        Y(i, i) -= delta;
        Y(j, j) -= delta;
        Y(i, j) += delta;
        Y(j, i) += delta;
        moved = std::max(moved, std::abs(delta));
      }
      corr[k] = t;
    }
    // centering as the tolerant slab |<aa', Y>| <= eps
    Y += corr0;
    const double eps = 1e-12;
    const double val = (A0.array() * Y.array()).sum();
    const double v = (val > eps) ? (val - eps) / a0n : (val < -eps ? (val + eps) / a0n : 0.0);
    corr0 = v * A0;
    Y -= corr0;
    moved = std::max(moved, std::abs(v) * std::sqrt(a0n));
    if (moved <= tol) break;
  }
  return Y;
}

Matrix project_psd(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (X + X.transpose()));
  Vector ev = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

GramSolution solve_sdp(const SdpProblem& prob, const SolveOptions& opts) {
  const int n = prob.n;
  const double scale = 1.0 + prob.squaredLengths.maxCoeff();
  const Matrix C = prob.alpha.asDiagonal();  // maximize <C, G>

  Matrix Z = Matrix::Zero(n, n);
  Matrix U = Matrix::Zero(n, n);
  Matrix G = Matrix::Zero(n, n);

  GramSolution out;
  int it = 0;
  for (; it < opts.maxIters; ++it) {
    G = project_psd(Z - U + C / opts.rho);
    const Matrix Ghat = opts.overRelax * G + (1.0 - opts.overRelax) * Z;
    const Matrix Zprev = Z;
    Z = project_constraints(prob, Ghat + U, 300, 1e-14 * scale);
    U += Ghat - Z;
    out.splitResidual = (G - Z).norm();
    out.dualResidual = opts.rho * (Z - Zprev).norm();
    if (std::max(out.splitResidual, out.dualResidual) <= opts.tol * (1.0 + G.norm())) {
      ++it;
      out.converged = true;
      break;
    }
  }
  out.iterations = it;
  out.G = project_psd(0.5 * (G + Z));
  out.objective = prob.alpha.dot(out.G.diagonal());

  out.maxEdgeViolation = 0.0;
  for (int k = 0; k < static_cast<int>(prob.edges.size()); ++k) {
    auto [i, j] = prob.edges[k];
    out.maxEdgeViolation = std::max(
        out.maxEdgeViolation, out.G(i, i) - 2.0 * out.G(i, j) + out.G(j, j) - prob.squaredLengths[k]);
  }
  out.centeringResidual = std::abs(prob.alpha.dot(out.G * prob.alpha));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(out.G);
  out.minEigenvalue = eig.eigenvalues().minCoeff();
  if (eig.eigenvalues().maxCoeff() <= 10.0 * opts.tol * scale) {
    out.G.setZero();  // numerically zero Gram: coincident points
    out.embedding = Matrix::Zero(n, 0);
    out.rank = 0;
    out.objective = 0.0;
  } else {
    out.embedding = factor_gram(out.G, 1e-7, &out.rank);
  }
  return out;
}

CertificateReport dual_certificate(const Polytope& P, double tol) {
  Vector zero = Vector::Zero(P.dimension);
  if (!P.containsInterior(zero)) throw OriginNotInterior("certificate needs 0 in int(P)");
  IzmestievData iz = izmestiev(P);
  Vector alpha = wachspress(P, zero).alpha;

  CertificateReport rep;
  for (int i = 0; i < P.n(); ++i) rep.primalValue += alpha[i] * P.vertices.row(i).squaredNorm();
  for (auto [i, j] : P.edges)
    rep.dualValue += iz.M(i, j) * (P.vertices.row(i) - P.vertices.row(j)).squaredNorm();
  rep.gap = std::abs(rep.primalValue - rep.dualValue);

  // graph Laplacian with the edge weights of M
  const int n = P.n();
  Matrix L = Matrix::Zero(n, n);
  for (auto [i, j] : P.edges) {
    L(i, j) -= iz.M(i, j);
    L(j, i) -= iz.M(i, j);
    L(i, i) += iz.M(i, j);
    L(j, j) += iz.M(i, j);
  }
  const Matrix base = L - Matrix(alpha.asDiagonal());
  const Matrix shift = alpha * alpha.transpose();
  double mu = 1.0;
  for (int k = 0; k <= 60; ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(base + mu * shift);
    rep.psdMargin = eig.eigenvalues().minCoeff();
    if (rep.psdMargin >= -tol) {
      rep.mu = mu;
      rep.certified = rep.gap <= tol * (1.0 + std::abs(rep.primalValue));
      return rep;
    }
    mu *= 2.0;
  }
  rep.mu = mu;
  rep.certified = false;
  return rep;
}

Matrix factor_gram(const Matrix& G, double tol, int* rank) {
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + G.cwiseAbs().maxCoeff()))
    throw NotPSD("matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G);
  const Vector ev = eig.eigenvalues();
  const double top = std::max(0.0, ev.maxCoeff());
  if (ev.minCoeff() < -tol * (1.0 + top))
    throw NotPSD("matrix has a significantly negative eigenvalue");
  std::vector<int> keep;
  for (int i = ev.size() - 1; i >= 0; --i)
    if (ev[i] > tol * top) keep.push_back(i);
  Matrix pts(G.rows(), static_cast<int>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c)
    pts.col(static_cast<int>(c)) = eig.eigenvectors().col(keep[c]) * std::sqrt(ev[keep[c]]);
  if (rank) *rank = static_cast<int>(keep.size());
  return pts;
}

ReconstructionReport reconstruct(const EdgeGraph& graph, const Vector& lengths, const Vector& alpha,
                                 const Polytope* reference, const SolveOptions& opts) {
  SdpProblem prob = build_sdp(graph, lengths, alpha);
  ReconstructionReport rep;
  rep.solution = solve_sdp(prob, opts);
  rep.dimensionFound = rep.solution.rank;
  if (!reference) return rep;

  rep.hasReference = true;
  const Matrix& Q = rep.solution.embedding;
  const Matrix& Pv = reference->vertices;
  const double scale = 1.0 + Pv.cwiseAbs().maxCoeff();
  AffineFit fwd = affine_fit(Pv, Q);
  AffineFit bwd = affine_fit(Q, Pv);
  rep.forwardResidual = fwd.residual;
  rep.backwardResidual = bwd.residual;
  rep.affineEquivalent = fwd.residual <= 1e-5 * scale && bwd.residual <= 1e-5 * scale;
  rep.edgeLengthsMatch = true;
  for (size_t k = 0; k < graph.edges.size(); ++k) {
    auto [i, j] = graph.edges[k];
    const double lq = (Q.row(i) - Q.row(j)).norm();
    if (std::abs(lq - lengths[static_cast<int>(k)]) > 1e-4 * (1.0 + lengths[static_cast<int>(k)]))
      rep.edgeLengthsMatch = false;
  }
  return rep;
}

}  // namespace polyrig
