#pragma once

#include "polyrig/expansion.hpp"
#include "polyrig/geometry.hpp"

namespace polyrig {

/// max sum_i alpha_i G_ii  over PSD G with the edge constraints
/// G_ii - 2 G_ij + G_jj <= l_ij^2 and the centering alpha' G alpha = 0.
struct SdpProblem {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  Vector squaredLengths;  // aligned with edges
  Vector alpha;
};

SdpProblem build_sdp(const EdgeGraph& graph, const Vector& lengths, const Vector& alpha);

struct SolveOptions {
  int maxIters = 40000;
  double tol = 1e-8;
  double rho = 1.0;        // splitting penalty
  double overRelax = 1.6;  // over-relaxation of the dual update
};

struct GramSolution {
  Matrix G;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  double splitResidual = 0.0;     // |G - Z| at termination
  double dualResidual = 0.0;      // rho |Z - Z_prev|
  double maxEdgeViolation = 0.0;  // of G against the length constraints
  double centeringResidual = 0.0; // |alpha' G alpha|
  double minEigenvalue = 0.0;
  Matrix embedding;  // factored points, n x rank
  int rank = 0;
};

/// Operator splitting: PSD projection by eigenvalue clipping against cyclic
/// projection onto the affine/inequality constraints, with over-relaxed dual
/// updates. Deterministic for identical inputs.
GramSolution solve_sdp(const SdpProblem& prob, const SolveOptions& opts = {});

struct CertificateReport {
  double primalValue = 0.0;  // e(p), the weighted squared vertex norms
  double dualValue = 0.0;    // d(M), the weighted squared edge lengths
  double gap = 0.0;
  double mu = 0.0;
  double psdMargin = 0.0;  // min eigenvalue of the certificate matrix
  bool certified = false;
};

/// Checks the zero-gap certificate pair (w = M, mu found by doubling) on P.
CertificateReport dual_certificate(const Polytope& P, double tol = 1e-8);

/// Eigenvalue factorization keeping components above tol * theta_max.
Matrix factor_gram(const Matrix& G, double tol = 1e-7, int* rank = nullptr);

struct ReconstructionReport {
  GramSolution solution;
  int dimensionFound = 0;
  bool hasReference = false;
  double forwardResidual = 0.0;   // reference -> recovered
  double backwardResidual = 0.0;  // recovered -> reference
  bool affineEquivalent = false;
  bool edgeLengthsMatch = false;
};

/// build_sdp -> solve_sdp -> factor_gram; with a reference polytope the
/// result is checked for affine equivalence in both directions.
ReconstructionReport reconstruct(const EdgeGraph& graph, const Vector& lengths, const Vector& alpha,
                                 const Polytope* reference = nullptr, const SolveOptions& opts = {});

}  // namespace polyrig
