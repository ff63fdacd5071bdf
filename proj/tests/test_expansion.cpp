#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polyrig/expansion.hpp"
#include "polyrig/fixtures.hpp"

using namespace polyrig;

namespace {

Polytope square() {
  Matrix pts(4, 2);
  pts << 1, 1, -1, 1, -1, -1, 1, -1;
  return build_polytope(pts);
}

Vector uniform_alpha(int n) { return Vector::Constant(n, 1.0 / n); }

GraphEmbedding map_points(const GraphEmbedding& q, const Matrix& A) {
  return GraphEmbedding{q.graph, q.points * A.transpose(), static_cast<int>(A.rows())};
}

}  // namespace

TEST_CASE("alpha expansion basics") {
  Matrix coincident = Matrix::Ones(5, 3);
  CHECK(alpha_expansion(coincident, uniform_alpha(5)) == doctest::Approx(0.0));

  Polytope P = square();
  const double e = alpha_expansion(P.vertices, uniform_alpha(4));
  CHECK(e * e == doctest::Approx(2.0).epsilon(1e-12));

  Matrix bad = Matrix::Zero(3, 2);
  CHECK_THROWS_AS(alpha_expansion(bad, uniform_alpha(5)), DimensionMismatch);
}

TEST_CASE("alpha expansion equals the centered second moment") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  Matrix pts = Matrix::Random(7, 3);
  Vector alpha(7);
  for (int i = 0; i < 7; ++i) alpha[i] = unit(rng);
  alpha /= alpha.sum();
  double direct = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      direct += 0.5 * alpha[i] * alpha[j] * (pts.row(i) - pts.row(j)).squaredNorm();
  const double e = alpha_expansion(pts, alpha);
  CHECK(e * e == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("three-term decomposition recombines to the expansion on both sides") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const int d = 2 + trial % 2;
    Polytope P = random_polytope(d, d + 5, rng);
    Vector x = 0.2 * P.interiorMargin(Vector::Zero(d)) * Vector::Random(d);
    GraphEmbedding q = shrink_edges_randomly(skeleton(P), rng);
    ComparisonReport rep = expansion_compare(P, x, q);
    const double pRel = std::abs(rep.pSide.edgeTerm - rep.pSide.centerTerm + rep.pSide.traceTerm -
                                 rep.pSide.expansionSq);
    const double qRel = std::abs(rep.qSide.edgeTerm - rep.qSide.centerTerm + rep.qSide.traceTerm -
                                 rep.qSide.expansionSq);
    CHECK(pRel < 1e-10 * (1.0 + rep.pSide.expansionSq));
    CHECK(qRel < 1e-10 * (1.0 + rep.qSide.expansionSq));
    // with x translated to the origin the P side center term vanishes and the
    // trace term is the kernel residual
    CHECK(rep.pSide.centerTerm < 1e-12);
    CHECK(std::abs(rep.pSide.traceTerm) < 1e-9);
  }
}

TEST_CASE("identity embedding gives the equality case") {
  Polytope P = hypercube(3);
  ComparisonReport rep = expansion_compare(P, Vector::Zero(3), skeleton(P));
  CHECK(rep.inequalityHolds);
  CHECK(rep.equalityDetected);
  REQUIRE(rep.affineWitness.has_value());
  CHECK((rep.affineWitness->map - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("rotations give the equality case with the rotation as witness") {
  std::mt19937_64 rng(11);
  Polytope P = random_polytope(3, 8, rng);
  Matrix R = oracles::random_rotation(3, rng);
  GraphEmbedding q = map_points(skeleton(P), R);
  ComparisonReport rep = expansion_compare(P, Vector::Zero(3), q);
  CHECK(rep.inequalityHolds);
  CHECK(rep.equalityDetected);
  REQUIRE(rep.affineWitness.has_value());
  CHECK((rep.affineWitness->map - R).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("the cube path embedding is strictly less expanded") {
  CubePathFixture fx = cube_path_fixture();
  ComparisonReport rep = expansion_compare(fx.cube, Vector::Zero(3), fx.path);
  CHECK(rep.edgesDominated);  // equal edge lengths
  CHECK(rep.inequalityHolds);
  CHECK_FALSE(rep.equalityDetected);
  CHECK(rep.pSide.expansionSq == doctest::Approx(3.0).epsilon(1e-9));
  // the planar path keeps the vertex norms, so the loss is the squared mean
  const Vector mean = fx.path.points.colwise().mean();
  CHECK(rep.qSide.expansionSq == doctest::Approx(3.0 - mean.squaredNorm()).epsilon(1e-9));
  CHECK(rep.qSide.expansionSq < rep.pSide.expansionSq - 1e-3);
}

TEST_CASE("monotonicity under random edge shrinking") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const int n = d + 3 + trial % 5;
    Polytope P = random_polytope(d, n, rng);
    Vector x = 0.25 * P.interiorMargin(Vector::Zero(d)) * Vector::Random(d);
    GraphEmbedding q = shrink_edges_randomly(skeleton(P), rng);
    ComparisonReport rep = expansion_compare(P, x, q);
    INFO("trial " << trial);
    REQUIRE(rep.edgesDominated);
    CHECK(std::sqrt(rep.pSide.expansionSq) >= std::sqrt(rep.qSide.expansionSq) - 1e-9);
  }
}

TEST_CASE("equality characterization is exact") {
  std::mt19937_64 rng(17);
  Polytope P = random_polytope(3, 7, rng);
  // length-preserving affine image: rotation plus translation
  Matrix R = oracles::random_rotation(3, rng);
  GraphEmbedding q = map_points(skeleton(P), R);
  q.points.rowwise() += Eigen::RowVector3d(0.3, -0.1, 0.2);
  ComparisonReport rep = expansion_compare(P, Vector::Zero(3), q);
  CHECK(rep.equalityDetected);

  // genuinely shrunk edges must not be flagged as equality
  GraphEmbedding shrunk = shrink_edges_randomly(skeleton(P), rng);
  ComparisonReport rep2 = expansion_compare(P, Vector::Zero(3), shrunk);
  CHECK_FALSE(rep2.equalityDetected);
}

TEST_CASE("graph mismatch is rejected") {
  Polytope P = hypercube(3);
  GraphEmbedding q = skeleton(P);
  q.graph.edges.pop_back();
  CHECK_THROWS_AS(expansion_compare(P, Vector::Zero(3), q), GraphMismatch);
}

TEST_CASE("affine fit identities") {
  std::mt19937_64 rng(19);
  Matrix A = Matrix::Random(8, 3);

  AffineFit self = affine_fit(A, A);
  CHECK(self.residual < 1e-10);
  CHECK((self.map - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);

  Matrix R = oracles::random_rotation(3, rng);
  AffineFit rot = affine_fit(A, A * R.transpose());
  CHECK(rot.residual < 1e-10);
  CHECK((rot.map - R).cwiseAbs().maxCoeff() < 1e-9);

  // projection onto a random hyperplane is exact: the centered span of the
  // image is contained in the image of the source span
  Vector nu = Vector::Random(3).normalized();
  Matrix proj = Matrix::Identity(3, 3) - nu * nu.transpose();
  AffineFit onto = affine_fit(A, A * proj.transpose());
  CHECK(onto.residual < 1e-10);
  // and the reverse direction is not exact
  AffineFit back = affine_fit(A * proj.transpose(), A);
  CHECK(back.residual > 1e-3);
}

TEST_CASE("coordinate map reproduces points on the identity target") {
  std::mt19937_64 rng(23);
  Polytope P = random_polytope(3, 8, rng);
  Vector x = 0.4 * P.interiorMargin(Vector::Zero(3)) * Vector::Random(3);
  Vector image = wachspress_map(P, skeleton(P), x);
  CHECK((image - x).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("coordinate map scales with the target") {
  Polytope P = square();
  GraphEmbedding twice = skeleton(P);
  twice.points *= 2.0;
  Vector x(2);
  x << 0.3, 0.2;
  Vector image = wachspress_map(P, twice, x);
  CHECK(image[0] == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(image[1] == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("coordinate map sends faces toward faces") {
  // approach a facet of the cube from inside; the image must approach the
  // matching facet plane of a combinatorially equivalent box
  Polytope C = hypercube(3);
  Matrix box = C.vertices;
  box.col(0) *= 1.4;
  box.col(1) *= 0.8;
  box.col(2) *= 1.1;
  GraphEmbedding target = GraphEmbedding{edge_graph(C), box, 3};
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    Vector x(3);
    x << 0.2, -0.3, 1.0 - eps;  // facet x3 = 1 of the cube
    Vector image = wachspress_map(C, target, x);
    CHECK(std::abs(image[2] - 1.1) < 10.0 * eps + 1e-9);
  }
}

TEST_CASE("congruence certificate on rotated skeleta") {
  std::mt19937_64 rng(29);
  Polytope P = random_polytope(3, 7, rng);
  Matrix R = oracles::random_rotation(3, rng);
  CertificateResult res = congruence_certificate(P, map_points(skeleton(P), R));
  CHECK(res.status == CertificateStatus::Certified);
  CHECK(res.gramDeviation < 1e-8);
}

TEST_CASE("congruence certificate on a rotated polytope copy") {
  std::mt19937_64 rng(31);
  Polytope P = random_polytope(3, 8, rng);
  Matrix R = oracles::random_rotation(3, rng);
  Polytope Q = build_polytope(P.vertices * R.transpose());
  CertificateResult res = congruence_certificate(P, skeleton(Q));
  CHECK(res.status == CertificateStatus::Certified);
}

TEST_CASE("congruence certificate is inconclusive on the cube path") {
  CubePathFixture fx = cube_path_fixture();
  // equal edge lengths and equal vertex norms satisfy the preconditions
  CertificateResult res = congruence_certificate(fx.cube, fx.path);
  CHECK(res.status == CertificateStatus::NoWitnessFound);
}

TEST_CASE("congruence certificate rejects violated preconditions") {
  Polytope P = hypercube(3);
  GraphEmbedding q = skeleton(P);
  q.points *= 1.2;  // edges got longer
  CHECK_THROWS_AS(congruence_certificate(P, q), PreconditionViolated);
}

TEST_CASE("simplex pairs always certify") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    Polytope S = random_polytope(3, 4, rng);
    Matrix R = oracles::random_rotation(3, rng);
    if (trial % 2) R.col(0) *= -1.0;  // allow reflections
    CertificateResult res = congruence_certificate(S, map_points(skeleton(S), R));
    INFO("trial " << trial);
    CHECK(res.status == CertificateStatus::Certified);
  }
}

TEST_CASE("trace term is nonpositive after the spectral translation") {
  std::mt19937_64 rng(41);
  Polytope P = random_polytope(3, 8, rng);
  IzmestievData iz = izmestiev(P);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix q = Matrix::Random(P.n(), 4);
    const Vector shift = q.transpose() * iz.perron;
    q.rowwise() -= shift.transpose();
    const double trace = (iz.M * q * q.transpose()).trace();
    CHECK(trace <= 1e-10);
  }
}

TEST_CASE("inscribed comparison on boxes") {
  Polytope P = hypercube(3);

  OrderingReport same = inscribed_compare(P, P);
  CHECK(same.equalityDetected);
  CHECK(same.congruent);

  Polytope small = build_polytope(0.9 * P.vertices);
  OrderingReport shrunk = inscribed_compare(P, small);
  CHECK(shrunk.edgesDominated);
  CHECK(shrunk.radiusOrdered);
  CHECK(shrunk.radiusQ == doctest::Approx(0.9 * shrunk.radiusP).epsilon(1e-9));
  CHECK_FALSE(shrunk.equalityDetected);

  // boxes realize the cube type inscribed; shrink every axis
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.8, 1.2);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d a{unit(rng), unit(rng), unit(rng)};
    Eigen::Vector3d b = a * std::uniform_real_distribution<double>(0.6, 1.0)(rng);
    Matrix big = P.vertices, smallPts = P.vertices;
    for (int c = 0; c < 3; ++c) {
      big.col(c) *= a[c];
      smallPts.col(c) *= b[c];
    }
    OrderingReport rep = inscribed_compare(build_polytope(big), build_polytope(smallPts));
    INFO("trial " << trial);
    CHECK(rep.edgesDominated);
    CHECK(rep.radiusOrdered);
  }
}

TEST_CASE("inscribed comparison rejects bad inputs") {
  Polytope P = hypercube(3);
  std::mt19937_64 rng(47);
  Polytope R = random_polytope(3, 8, rng);  // different lattice
  CHECK_THROWS_AS(inscribed_compare(P, R), NotCombEquivalent);

  Matrix stretched = P.vertices;
  stretched.row(0) *= 1.3;
  CHECK_THROWS_AS(inscribed_compare(P, build_polytope(stretched)), Error);
}
