#pragma once

#include <optional>
#include <random>

#include "polyrig/expansion.hpp"
#include "polyrig/geometry.hpp"

namespace polyrig {

enum class MemberKind { Cable, Strut, Bar };

struct Member {
  int i, j;  // node indices; the pinned origin is the last node
  MemberKind kind;
  double restLength;
};

/// Framework of the polytope: vertex nodes plus one pinned node at the
/// origin; edges and central members carry the tensegrity kinds.
struct Tensegrity {
  Matrix nodes;  // (n+1) x d, last row is the pinned origin
  std::vector<Member> members;
  int pinnedNode;

  int freeNodes() const { return static_cast<int>(nodes.rows()) - 1; }
  int dim() const { return static_cast<int>(nodes.cols()); }
};

/// Default: edges are cables, vertex-origin members struts; swapped reverses.
Tensegrity build_tensegrity(const Polytope& P, bool swapped = false);

enum class FlexClass { TrivialOnly, NontrivialFlex };

struct FlexResult {
  FlexClass classification;
  Matrix flexVector;   // velocity per free node (the pinned origin is fixed)
  Vector memberRates;  // signed length rates, aligned with members
  double slack;        // total LP slack of the strictly-signed program
};

/// Sign-constrained first-order analysis: slack-maximizing LP for strictly
/// signed flexes, followed by a kernel probe of the bar framework (both
/// orthogonal to the trivial rotations).
FlexResult first_order_flex(const Tensegrity& T, double tol = 1e-9);

/// Rates of a given velocity field, aligned with T.members.
Vector member_rates(const Tensegrity& T, const Matrix& velocity);

/// Is the field a rigid rotation about the pinned origin (within tol)?
bool is_trivial_flex(const Tensegrity& T, const Matrix& velocity, double tol = 1e-8);

/// Stress matrix of the framework: edge stresses from the normalized matrix,
/// central strut stresses from the Wachspress coordinates, origin as the
/// last node. Annihilates the placement coordinates.
Matrix stress_matrix(const Polytope& P, double* equilibriumResidual = nullptr,
                     double tol = kDefaultTol);

/// Vertex pairing i -> j with p_j = -p_i, when it exists.
std::optional<std::vector<int>> central_involution(const Polytope& P, double tol = kDefaultTol);

struct ConeReport {
  std::vector<bool> interior;
  std::vector<double> margins;
  bool allInterior() const;
};

/// Per vertex: does the cone spanned at q_i by its neighbors contain the
/// origin strictly inside?
ConeReport cone_condition(const GraphEmbedding& q, double tol = kDefaultTol);

struct ProbeReport {
  int trials = 0;
  unsigned long long seed = 0;
  double radius = 0.0;
  int converged = 0;
  int violations = 0;  // feasible but non-congruent embeddings found
  double maxGramDeviation = 0.0;
  std::vector<int> violationTrials;
};

/// Falsification harness around a reference embedding with distances to the
/// origin as central constraints: perturb, project toward the feasible set
/// {edges non-longer, vertex norms non-smaller}, test congruence.
ProbeReport probe_embedding(const GraphEmbedding& reference, int trials, double radius,
                            unsigned long long seed, double tol = kDefaultTol);
ProbeReport probe_embedding_serial(const GraphEmbedding& reference, int trials, double radius,
                                   unsigned long long seed, double tol = kDefaultTol);

ProbeReport local_probe(const Polytope& P, int trials, double radius, unsigned long long seed,
                        double tol = kDefaultTol);

}  // namespace polyrig
