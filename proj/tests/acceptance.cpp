// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "polyrig/fixtures.hpp"
#include "polyrig/linprog.hpp"
#include "polyrig/io.hpp"
#include "polyrig/rigidity.hpp"
#include "polyrig/sdp.hpp"

using namespace polyrig;

namespace {

struct Outcome {
  int id;
  std::string title;
  bool pass;
  std::string detail;
};

std::vector<Outcome> outcomes;

void record(int id, const std::string& title, bool pass, const std::string& detail) {
  outcomes.push_back({id, title, pass, detail});
  std::printf("[%s] criterion %d: %s  (%s)\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

Polytope unit_square() {
  Matrix pts(4, 2);
  pts << 1, 1, -1, 1, -1, -1, 1, -1;
  return build_polytope(pts);
}

std::vector<Polytope> corpus;  // shared by criteria 1 and 6

void build_corpus() {
  std::mt19937_64 rng(90210);
  std::uniform_int_distribution<int> extra(2, 9);
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 3;
    const int n = std::min(14, d + extra(rng));
    corpus.push_back(random_polytope(d, n, rng));
  }
}

// 1. property suite over the corpus plus the named fixtures
void criterion1() {
  const double t0 = omp_get_wtime();
  std::vector<Polytope> fixtures = corpus;
  fixtures.push_back(unit_square());
  fixtures.push_back(hypercube(3));
  fixtures.push_back(regular_simplex(3));
  int failures = 0;
  double worst = 0.0;
  for (const auto& P : fixtures) {
    IzmestievData iz = izmestiev(P);
    PropertyReport rep = verify_izmestiev(P, iz, 1e-8);
    if (!rep.allPass()) ++failures;
    for (const auto& c : rep.checks)
      if (c.tolerance > 0.0) worst = std::max(worst, c.residual);
  }
  const double elapsed = omp_get_wtime() - t0;
  const bool pass = failures == 0 && elapsed <= 60.0;
  record(1, "matrix properties and row sums on 200 random polytopes plus fixtures", pass,
         fmt("failures %.0f, worst residual %.2e, %.1fs", failures, worst, elapsed));
}

// 2. geometric matrix against the finite-difference Hessian at step 1e-3,
// with the halving ratio, on every fixture of dimension <= 3.
//
// This criterion cannot hold as stated: the dual volume is piecewise
// polynomial of degree d in the offsets. For d <= 3 the central stencil is
// exact inside a smoothness cell (errors sit at the roundoff floor, which
// RISES when h halves), while non-simple duals such as the cube put c = 1 on
// a cell wall where one-sided third derivatives differ and the error is
// first order in h (measured ratio 2, and err(1e-3) = 1.67e-4 > 1e-5 on the
// cube, equal to h/6 times the third-derivative jump). A quadratic regime
// exists only from dimension 4 on, which is reported informationally below.
void criterion2() {
  std::mt19937_64 rng(777);
  std::vector<std::pair<std::string, Polytope>> fixtures;
  fixtures.push_back({"square", unit_square()});
  fixtures.push_back({"triangle", regular_polygon(3)});
  fixtures.push_back({"simplex3", regular_simplex(3)});
  fixtures.push_back({"cube", hypercube(3)});
  for (int k = 0; k < 6; ++k) {
    const int d = 2 + k % 2;
    fixtures.push_back({"random" + std::to_string(k), random_polytope(d, d + 4 + k % 3, rng)});
  }
  bool agreeAll = true, ratioAll = true;
  std::string worstLine;
  double worstErr = -1.0;
  for (const auto& [name, P] : fixtures) {
    const Matrix ref = izmestiev(P).Mtilde;
    const double e1 = (izmestiev_fd(P, 1e-3) - ref).cwiseAbs().maxCoeff();
    const double e2 = (izmestiev_fd(P, 5e-4) - ref).cwiseAbs().maxCoeff();
    const double ratio = e1 / e2;
    std::printf("    %-10s err(1e-3)=%.3e err(5e-4)=%.3e ratio=%.2f\n", name.c_str(), e1, e2, ratio);
    if (e1 > 1e-5) agreeAll = false;
    if (!(ratio >= 3.5)) ratioAll = false;
    if (e1 > worstErr) {
      worstErr = e1;
      worstLine = name + " err " + fmt("%.2e", e1);
    }
  }
  {
    // informational: the quadratic regime appears in dimension 4
    Polytope P4 = random_polytope(4, 8, rng);
    const Matrix ref = izmestiev(P4).Mtilde;
    const double e1 = (izmestiev_fd(P4, 2e-3) - ref).cwiseAbs().maxCoeff();
    const double e2 = (izmestiev_fd(P4, 1e-3) - ref).cwiseAbs().maxCoeff();
    std::printf("    d=4 info   err(2e-3)=%.3e err(1e-3)=%.3e ratio=%.2f (not gating)\n", e1, e2,
                e1 / e2);
  }
  record(2, "finite-difference oracle agreement at step 1e-3 with halving ratio >= 3.5",
         agreeAll && ratioAll, "worst " + worstLine + (ratioAll ? "" : ", ratio clause failed"));
}

// 3. square closed form
void criterion3() {
  Polytope P = unit_square();
  IzmestievData iz = izmestiev(P);
  Vector alpha = wachspress(P, Vector::Zero(2)).alpha;
  double err = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool adjacent =
          std::find(P.edges.begin(), P.edges.end(),
                    std::make_pair(std::min(i, j), std::max(i, j))) != P.edges.end();
      err = std::max(err, std::abs(iz.Mtilde(i, j) - (adjacent ? 0.5 : 0.0)));
    }
    err = std::max(err, std::abs(alpha[i] - 0.25));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(iz.Mtilde);
  Vector ev = eig.eigenvalues();
  Vector expected(4);
  expected << -1.0, 0.0, 0.0, 1.0;
  err = std::max(err, (ev - expected).cwiseAbs().maxCoeff());
  record(3, "square closed form (half cycle adjacency, spectrum, uniform weights)", err <= 1e-10,
         fmt("max deviation %.2e", err));
}

// 4. expansion monotonicity over >= 1000 edge-shrinking trials
void criterion4() {
  std::mt19937_64 rng(424242);
  int violations = 0, equalityMisses = 0;
  double worstSlack = 0.0;
  const int polytopes = 250;
  for (int k = 0; k < polytopes; ++k) {
    const int d = 2 + k % 3;
    const int n = std::min(12, d + 2 + k % 7);
    Polytope P = random_polytope(d, n, rng);
    Vector x = 0.3 * P.interiorMargin(Vector::Zero(d)) * Vector::Random(d);
    for (int t = 0; t < 4; ++t) {
      GraphEmbedding q = shrink_edges_randomly(skeleton(P), rng);
      ComparisonReport rep = expansion_compare(P, x, q);
      if (!rep.edgesDominated) continue;
      const double slack =
          std::sqrt(rep.pSide.expansionSq) - std::sqrt(rep.qSide.expansionSq);
      worstSlack = std::min(worstSlack, slack);
      if (slack < -1e-9) ++violations;
      if (rep.equalityDetected && slack > 1e-6) ++equalityMisses;
    }
    // length-preserving affine image must be flagged as the equality case
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix A(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = gauss(rng);
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix R = qr.householderQ();
    GraphEmbedding rotated{edge_graph(P), P.vertices * R.transpose(), d};
    ComparisonReport rep = expansion_compare(P, Vector::Zero(d), rotated);
    if (!rep.equalityDetected) ++equalityMisses;
  }
  record(4, "expansion monotonicity over 1000 edge-shrinking trials plus equality detection",
         violations == 0 && equalityMisses == 0,
         fmt("violations %.0f, equality misses %.0f, worst slack %.2e",
             static_cast<double>(violations), static_cast<double>(equalityMisses), worstSlack));
}

// 5. planar cube-path data
void criterion5() {
  CubePathFixture fx = cube_path_fixture();
  const double stepExpected = 2.0 * std::asin(1.0 / std::sqrt(3.0)) * 180.0 / std::numbers::pi;
  double edgeErr = 0.0, normErr = 0.0;
  for (auto [i, j] : fx.path.graph.edges)
    edgeErr = std::max(edgeErr, std::abs((fx.path.points.row(i) - fx.path.points.row(j)).norm() - 2.0));
  for (int i = 0; i < 8; ++i)
    normErr = std::max(normErr, std::abs(fx.path.points.row(i).norm() - std::sqrt(3.0)));

  // the origin is in the hull iff it is a convex combination of the points
  LpBuilder lp;
  std::vector<int> lambda;
  for (int i = 0; i < 8; ++i) lambda.push_back(lp.addVariable(0.0));
  for (int c = 0; c < 2; ++c) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < 8; ++i) terms.push_back({lambda[i], fx.path.points(i, c)});
    lp.addRow(terms, '=', 0.0);
  }
  std::vector<std::pair<int, double>> ones;
  for (int v : lambda) ones.push_back({v, 1.0});
  lp.addRow(ones, '=', 1.0);
  const bool originInHull = lp.solve().status == LpStatus::Optimal;

  ConeReport cones = cone_condition(fx.path);
  int coneFailures = 0;
  for (bool ok : cones.interior)
    if (!ok) ++coneFailures;

  const bool pass = std::abs(fx.arcStepDegrees - stepExpected) <= 1e-4 && edgeErr <= 1e-9 &&
                    normErr <= 1e-9 && originInHull && coneFailures >= 1;
  record(5, "cube path fixture: arc step 70.5288 deg, unit data, origin in hull, cone failure",
         pass,
         fmt("step %.6f deg, edge err %.1e, cone failures %.0f", fx.arcStepDegrees, edgeErr,
             static_cast<double>(coneFailures)));
}

// 6. zero-gap certificates over the corpus
void criterion6() {
  int gapFailures = 0, psdFailures = 0;
  double worstGap = 0.0, worstMargin = 0.0;
  for (const auto& P : corpus) {
    CertificateReport rep = dual_certificate(P, 1e-9);
    worstGap = std::max(worstGap, rep.gap);
    worstMargin = std::min(worstMargin, rep.psdMargin);
    if (rep.gap > 1e-8) ++gapFailures;
    if (rep.psdMargin < -1e-9 || rep.mu > std::ldexp(1.0, 60)) ++psdFailures;
  }
  record(6, "no duality gap and certificate matrix positive semidefinite on the corpus",
         gapFailures == 0 && psdFailures == 0,
         fmt("worst gap %.2e, worst margin %.2e", worstGap, worstMargin));
}

// 7. end-to-end reconstruction of 100 random 3-polytopes plus cube and triangle
void criterion7() {
  std::mt19937_64 rng(5150);
  int successes = 0;
  double worstTime = 0.0;
  bool withinTime = true;
  for (int seed = 0; seed < 100; ++seed) {
    const int n = 5 + seed % 6;
    Polytope P = random_polytope(3, n, rng);
    Vector x = 0.4 * P.interiorMargin(Vector::Zero(3)) * Vector::Random(3);
    Vector alpha = wachspress(P, x).alpha;
    Vector lengths(static_cast<int>(P.edges.size()));
    for (size_t k = 0; k < P.edges.size(); ++k) {
      auto [i, j] = P.edges[k];
      lengths[static_cast<int>(k)] = (P.vertices.row(i) - P.vertices.row(j)).norm();
    }
    const double t0 = omp_get_wtime();
    ReconstructionReport rep = reconstruct(edge_graph(P), lengths, alpha, &P);
    const double elapsed = omp_get_wtime() - t0;
    worstTime = std::max(worstTime, elapsed);
    if (elapsed > 10.0) withinTime = false;
    if (rep.solution.converged && rep.affineEquivalent) ++successes;
  }

  Polytope C = hypercube(3);
  ReconstructionReport cubeRep =
      reconstruct(edge_graph(C), Vector::Constant(12, 2.0), Vector::Constant(8, 0.125), &C);
  Polytope T = regular_polygon(3);
  Vector triLengths = Vector::Constant(3, (T.vertices.row(0) - T.vertices.row(1)).norm());
  ReconstructionReport triRep =
      reconstruct(edge_graph(T), triLengths, Vector::Constant(3, 1.0 / 3.0), &T);

  const bool pass = successes >= 95 && withinTime && cubeRep.affineEquivalent &&
                    triRep.affineEquivalent;
  record(7, "reconstruction of 100 random 3-polytopes, cube and triangle", pass,
         fmt("successes %.0f/100, worst time %.2fs", static_cast<double>(successes), worstTime));
}

// 8. rigidity fixtures
void criterion8() {
  bool pass = true;
  std::string detail;

  FlexResult simplex = first_order_flex(build_tensegrity(regular_simplex(3)));
  if (simplex.classification != FlexClass::TrivialOnly) {
    pass = false;
    detail += "simplex not trivial; ";
  }

  Polytope C = hypercube(3);
  Tensegrity swapped = build_tensegrity(C, true);
  FlexResult twist = first_order_flex(swapped);
  bool signsOk = twist.classification == FlexClass::NontrivialFlex;
  if (signsOk) {
    for (size_t m = 0; m < swapped.members.size(); ++m) {
      const double r = twist.memberRates[static_cast<int>(m)];
      if (swapped.members[m].kind == MemberKind::Cable && r > 1e-8) signsOk = false;
      if (swapped.members[m].kind == MemberKind::Strut && r < -1e-8) signsOk = false;
    }
  }
  if (!signsOk) {
    pass = false;
    detail += "swapped cube twist missing; ";
  }

  TwistFixture four = fourcube_twist_fixture();
  Tensegrity T4 = build_tensegrity(four.polytope);
  const double maxRate = member_rates(T4, four.field).cwiseAbs().maxCoeff();
  if (maxRate > 1e-12 || is_trivial_flex(T4, four.field)) {
    pass = false;
    detail += "4-cube twist not certified; ";
  }

  ProbeReport cubeProbe = local_probe(C, 1000, 1e-2, 3001);
  ProbeReport squareProbe = local_probe(unit_square(), 1000, 1e-2, 3002);
  if (cubeProbe.violations != 0 || squareProbe.violations != 0) {
    pass = false;
    detail += "probe violations; ";
  }
  if (detail.empty())
    detail = fmt("4-cube max rate %.1e, probe violations %.0f", maxRate,
                 static_cast<double>(cubeProbe.violations + squareProbe.violations));
  record(8, "rigidity fixtures: simplex rigid, cube twists, probes silent", pass, detail);
}

// 9. centrally symmetric congruence through the origin
void criterion9() {
  std::mt19937_64 rng(6060);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int failures = 0;
  double worstWitness = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 2;
    Polytope P = random_centrally_symmetric(d, d + 2 + trial % 3, rng);
    Matrix A(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = gauss(rng);
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix R = qr.householderQ();
    if (trial % 3 == 0) R.col(0) *= -1.0;
    GraphEmbedding q{edge_graph(P), P.vertices * R.transpose(), d};
    CertificateResult res = congruence_certificate(P, q);
    if (res.status != CertificateStatus::Certified || res.witness.norm() > 1e-6) ++failures;
    worstWitness = std::max(worstWitness, res.witness.norm());
  }
  record(9, "centrally symmetric embeddings certify with the origin witness", failures == 0,
         fmt("failures %.0f, worst witness norm %.1e", static_cast<double>(failures), worstWitness));
}

}  // namespace

int main(int argc, char** argv) {
  // selector: "all" (default), "main" = everything except the offset-volume
  // stencil criterion, "fd-oracle" = only that criterion
  const std::string mode = argc > 1 ? argv[1] : "all";
  const double t0 = omp_get_wtime();
  if (mode != "fd-oracle") {
    build_corpus();
    criterion1();
  }
  if (mode != "main") criterion2();
  if (mode != "fd-oracle") {
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
  }
  int failed = 0;
  for (const auto& o : outcomes)
    if (!o.pass) ++failed;
  std::printf("acceptance(%s): %zu criteria, %d failed, %.1fs total\n", mode.c_str(),
              outcomes.size(), failed, omp_get_wtime() - t0);
  return failed == 0 ? 0 : 1;
}
