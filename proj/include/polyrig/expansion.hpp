#pragma once

#include <optional>
#include <random>

#include "polyrig/geometry.hpp"
#include "polyrig/wachspress.hpp"

namespace polyrig {

struct EdgeGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j

  std::vector<std::vector<int>> adjacency() const;
  bool connected() const;
};

/// Points assigned to the vertices of a graph; not necessarily a skeleton.
struct GraphEmbedding {
  EdgeGraph graph;
  Matrix points;  // n x ambient
  int ambient = 0;
};

GraphEmbedding skeleton(const Polytope& P);
EdgeGraph edge_graph(const Polytope& P);

/// sqrt(1/2 sum_ij alpha_i alpha_j |x_i - x_j|^2); translation invariant.
double alpha_expansion(const Matrix& points, const Vector& alpha);

struct AffineFit {
  Matrix map;    // e x d
  Vector shift;  // e
  double residual;
};

/// Least-squares affine map A -> B; residual 0 iff the centered span of B is
/// contained in the image of the centered span of A.
AffineFit affine_fit(const Matrix& A, const Matrix& B);

struct SideTerms {
  double edgeTerm;      // sum over edges of M_ij |x_i - x_j|^2
  double centerTerm;    // |sum_i alpha_i x_i|^2
  double traceTerm;     // tr(M X X^T)
  double expansionSq;   // squared alpha-expansion
};

struct ComparisonReport {
  SideTerms pSide, qSide;
  Vector alpha;
  bool edgesDominated;   // every q edge at most as long as in P
  bool inequalityHolds;  // expansion of P >= expansion of q
  bool equalityDetected;
  std::optional<AffineFit> affineWitness;
  double maxEdgeExcess;  // largest q-edge-length minus P-edge-length
};

/// Evaluates the three-term decomposition on both sides after the canonical
/// translations (P so that x = 0, q against the Perron vector).
ComparisonReport expansion_compare(const Polytope& P, const Vector& x, const GraphEmbedding& q,
                                   double tol = kDefaultTol);

/// Image of x under the map induced by the Wachspress coordinates.
Vector wachspress_map(const Polytope& P, const GraphEmbedding& target, const Vector& x,
                      double tol = kDefaultTol);

enum class CertificateStatus { Certified, NoWitnessFound, ConclusionViolated };

struct CertificateResult {
  CertificateStatus status;
  Vector witness;        // point x with |phi(x)| <= |x|
  double witnessGap;     // |phi(x)| - |x| at the witness
  double gramDeviation;  // max |<p_i,p_j> - <q_i,q_j>|
};

/// Searches int(P) for a witness of |phi(x)| <= |x| and, if found, verifies
/// the congruence conclusion by Gram comparison. Preconditions (q edges not
/// longer, q vertex norms not smaller) are checked and throw on violation.
CertificateResult congruence_certificate(const Polytope& P, const GraphEmbedding& q,
                                         double tol = kDefaultTol);

struct OrderingReport {
  double radiusP, radiusQ;
  bool edgesDominated;
  bool radiusOrdered;  // radiusP >= radiusQ
  bool equalityDetected;
  bool congruent;
};

/// Compares two inscribed, combinatorially equivalent polytopes after
/// centering both at their circumcenters.
OrderingReport inscribed_compare(const Polytope& P, const Polytope& Q, double tol = kDefaultTol);

/// Randomly shrinks every edge of the skeleton (contraction toward a random
/// center plus a jiggle accepted only when all edges are non-increasing).
GraphEmbedding shrink_edges_randomly(const GraphEmbedding& base, std::mt19937_64& rng,
                                     double maxJiggle = 0.2);

}  // namespace polyrig
