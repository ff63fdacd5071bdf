#pragma once

#include <random>
#include <string>

#include "polyrig/expansion.hpp"
#include "polyrig/geometry.hpp"

namespace polyrig {

// Canonical shapes -----------------------------------------------------------

/// [-1,1]^d; vertex k has coordinate i equal to +1 iff bit i of k is set.
Polytope hypercube(int d);

/// Regular n-gon with circumradius r, vertex k at angle 2*pi*k/n + phase.
Polytope regular_polygon(int n, double r = 1.0, double phase = 0.0);

/// Regular d-simplex centered at the origin with circumradius 1.
Polytope regular_simplex(int d);

/// d-dimensional cross polytope conv{+-e_i}.
Polytope cross_polytope(int d);

// Randomized generators -------------------------------------------------------

/// Random polytope with n vertices on a sphere of varying radius, resampled
/// until the origin is well inside and the input is numerically generic.
Polytope random_polytope(int d, int n, std::mt19937_64& rng);

/// Random centrally symmetric polytope on `pairs` antipodal vertex pairs.
Polytope random_centrally_symmetric(int d, int pairs, std::mt19937_64& rng);

// Named fixtures --------------------------------------------------------------

struct CubePathFixture {
  Polytope cube;
  GraphEmbedding path;  // planar embedding on the circle of radius sqrt(3)
  double arcStepDegrees;
  std::vector<int> levels;  // per-vertex multiple of the arc step
};
CubePathFixture cube_path_fixture();

struct OctagonFixture {
  Polytope octagon;
  GraphEmbedding star;  // longer edges, equal vertex norms, same involution
};
OctagonFixture octagon_fixture();

struct PentagonFixture {
  GraphEmbedding first;   // convex pentagon, origin outside
  GraphEmbedding second;  // non-congruent realization with identical data
  Vector radii;
  Vector lengths;
};
PentagonFixture pentagon_exterior_fixture();

struct TwistFixture {
  Polytope polytope;
  Matrix field;  // velocity per vertex; all member rates vanish
};
TwistFixture cube_twist_fixture();
TwistFixture fourcube_twist_fixture();

struct PyramidFixture {
  Polytope first;   // apex at the origin, base pentagon in the z=1 plane
  Polytope second;  // same edge graph, lengths and vertex-origin distances
};
PyramidFixture pyramid_codim3_fixture();

// File-producing front end -----------------------------------------------------

struct FixtureSet {
  std::string name;
  std::vector<std::string> files;  // paths written, manifest last
};

/// Writes fixture files plus manifest.json with expected values into outDir.
/// Names: cube-path, octagon, pentagon-exterior, cube-twist, fourcube-twist,
/// pyramid-codim3, random-corpus.
FixtureSet generate_fixtures(const std::string& name, const std::string& outDir);

}  // namespace polyrig
