#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "polyrig/errors.hpp"

namespace polyrig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default scale-aware tolerance: a point is "on" a hyperplane when its
/// signed distance is at most tol*(1+|x|).
inline constexpr double kDefaultTol = 1e-9;

inline double on_tol(double tol, const Vector& x) { return tol * (1.0 + x.norm()); }

/// Intersection of halfspaces {x : <x, normals.row(i)> <= offsets[i]}.
struct HPolytope {
  Matrix normals;  // m x d
  Vector offsets;  // m

  int dim() const { return static_cast<int>(normals.cols()); }
  int size() const { return static_cast<int>(normals.rows()); }
};

/// Convex polytope given by its vertices, with the derived face lattice.
/// Immutable after construction; safe to share between threads.
struct Polytope {
  int dimension = 0;
  Matrix vertices;  // n x d, every row an extreme point
  std::vector<std::vector<int>> facets;                    // sorted vertex index sets
  std::vector<std::vector<std::vector<int>>> faceLattice;  // [k] -> k-faces, k = 0..d-1
  std::vector<std::pair<int, int>> edges;                  // i < j, sorted
  Matrix facetNormals;  // outward unit normals, row per facet
  Vector facetOffsets;  // <nu, x> = b on the facet, interior has <nu, x> < b

  int n() const { return static_cast<int>(vertices.rows()); }
  std::vector<std::vector<int>> adjacency() const;

  /// min over facets of (b_f - <nu_f, x>); positive strictly inside.
  double interiorMargin(const Vector& x) const;
  bool containsInterior(const Vector& x, double tol = kDefaultTol) const;
};

/// Builds the polytope from points by exhaustive d-subset hyperplane scan.
/// Throws DegenerateInput, NotFullDimensional or RedundantVertex.
Polytope build_polytope(const Matrix& points, double tol = kDefaultTol);

/// Variant that trusts a given facet list (validated, not recomputed).
Polytope build_polytope_with_facets(const Matrix& points, const std::vector<std::vector<int>>& facets,
                                    double tol = kDefaultTol);

/// {x : <x, p_i> <= c_i} over the vertices of P. Requires 0 in int(P), c > 0.
HPolytope generalized_polar(const Polytope& P, const Vector& c);
HPolytope polar_dual(const Polytope& P);

/// All vertices of H by brute force over d-subsets of constraints.
/// The parallel version is the default; the serial one is the reference
/// implementation and produces bitwise identical output.
std::vector<Vector> enumerate_vertices(const HPolytope& H, double tol = kDefaultTol);
std::vector<Vector> enumerate_vertices_serial(const HPolytope& H, double tol = kDefaultTol);

bool is_bounded(const HPolytope& H, double tol = kDefaultTol);

/// Chebyshev center; radius receives the inradius when non-null.
Vector chebyshev_center(const HPolytope& H, double* radius = nullptr);

double volume(const HPolytope& H, double tol = kDefaultTol);
double volume_serial(const HPolytope& H, double tol = kDefaultTol);

/// (d-k)-dimensional volume of the face {x in H : <x,p_i> = c_i, i in activeSet},
/// measured inside its affine hull. 0-dimensional faces have volume 1.
double relative_face_volume(const HPolytope& H, const std::vector<int>& activeSet, double tol = kDefaultTol);

/// Volume of conv(points) inside its affine hull of dimension dim.
/// Returns 0 when the points do not span dim dimensions.
double point_set_volume(const Matrix& points, int dim, double tol = kDefaultTol);

/// Largest r such that the l1-ball of radius r around target fits in
/// cone(generators); negative when target is not even in the cone.
double cone_interior_margin(const Matrix& generators, const Vector& target);

namespace detail {
int64_t binomial(int n, int k);
std::vector<int> unrank_combination(int64_t rank, int n, int k);
// Facet structure of H: per constraint, sorted indices into the vertex list
// (deduplicated by vertex set), or empty when the constraint is not a facet.
struct DualFacet {
  int constraint;
  std::vector<int> vertexIds;
};
std::vector<DualFacet> dual_facets(const HPolytope& H, const std::vector<Vector>& verts, double tol);
}  // namespace detail

}  // namespace polyrig
