#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polyrig/fixtures.hpp"
#include "polyrig/io.hpp"

using namespace polyrig;

namespace {

double global_tol() {
  if (const char* env = std::getenv("POLYRIG_TOL")) {
    try {
      return std::stod(env);
    } catch (...) {
      std::cerr << "warning: ignoring unparsable POLYRIG_TOL\n";
    }
  }
  return kDefaultTol;
}

Vector parse_point(const std::string& text, int dim) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (static_cast<int>(vals.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " coordinates, got " +
                     std::to_string(vals.size()));
  return Eigen::Map<const Vector>(vals.data(), static_cast<int>(vals.size()));
}

int cmd_analyze(const std::string& file, const std::string& pointText) {
  const double tol = global_tol();
  PolytopeFile pf = read_polytope(file, tol);
  const Polytope& P = pf.polytope;
  Vector x = pointText.empty() ? Vector(Vector::Zero(P.dimension)) : parse_point(pointText, P.dimension);
  if (!P.containsInterior(x, tol)) throw PointNotInterior("point not interior");

  WachspressData wd = wachspress(P, x, tol);
  std::cout << "polytope: " << file << "  (n=" << P.n() << ", d=" << P.dimension
            << ", facets=" << P.facets.size() << ", edges=" << P.edges.size() << ")\n";
  std::cout << "point: " << format_vector(x) << "\n";
  std::cout << "alpha: " << format_vector(wd.alpha) << "\n";
  std::cout << "alpha_unnormalized: " << format_vector(wd.alphaTilde) << "\n";

  Polytope shifted = P;
  shifted.vertices = P.vertices.rowwise() - x.transpose();
  shifted.facetOffsets = P.facetOffsets - P.facetNormals * x;
  IzmestievData iz = izmestiev(shifted, tol);
  std::cout << "matrix (normalized):\n" << format_matrix(iz.M);
  std::cout << "eigenvalues: " << format_vector(iz.eigenvalues) << "\n";
  std::cout << "perron: " << format_vector(iz.perron) << "\n";
  PropertyReport report = verify_izmestiev(shifted, iz);
  std::cout << format_property_report(report);
  return report.allPass() ? 0 : 1;
}

int cmd_compare(const std::string& pFile, const std::string& qFile, const std::string& pointText) {
  const double tol = global_tol();
  PolytopeFile pf = read_polytope(pFile, tol);
  GraphEmbedding q = read_embedding(qFile);
  Vector x = pointText.empty() ? Vector(Vector::Zero(pf.polytope.dimension))
                               : parse_point(pointText, pf.polytope.dimension);
  ComparisonReport rep = expansion_compare(pf.polytope, x, q, tol);
  std::cout << format_comparison_report(rep);
  if (!rep.edgesDominated)
    std::cout << "note: some q edges exceed the matching P edges; the expansion bound is not asserted\n";
  return rep.inequalityHolds || !rep.edgesDominated ? 0 : 1;
}

int cmd_map(const std::string& pFile, const std::string& qFile, const std::string& pointText) {
  const double tol = global_tol();
  PolytopeFile pf = read_polytope(pFile, tol);
  GraphEmbedding q = read_embedding(qFile);
  Vector x = parse_point(pointText, pf.polytope.dimension);
  Vector image = wachspress_map(pf.polytope, q, x, tol);
  std::cout << "point: " << format_vector(x) << "\n";
  std::cout << "image: " << format_vector(image) << "\n";
  return 0;
}

int cmd_reconstruct(const std::string& probFile, const std::string& refFile) {
  const double tol = global_tol();
  ProblemFile prob = read_problem(probFile);
  ReconstructionReport rep;
  if (!refFile.empty()) {
    PolytopeFile ref = read_polytope(refFile, tol);
    rep = reconstruct(prob.graph, prob.lengths, prob.alpha, &ref.polytope);
    std::cout << format_reconstruction_report(rep);
    CertificateReport cert = dual_certificate(ref.polytope);
    std::cout << "reference certificate:\n" << format_certificate_report(cert);
    return (rep.solution.converged && rep.affineEquivalent) ? 0 : 1;
  }
  rep = reconstruct(prob.graph, prob.lengths, prob.alpha);
  std::cout << format_reconstruction_report(rep);
  return rep.solution.converged ? 0 : 1;
}

int cmd_rigidity(const std::string& file, bool swapped, int probeTrials, double probeRadius,
                 unsigned long long seed) {
  const double tol = global_tol();
  PolytopeFile pf = read_polytope(file, tol);
  const Polytope& P = pf.polytope;

  Tensegrity T = build_tensegrity(P, swapped);
  int cables = 0, struts = 0;
  for (const auto& m : T.members) (m.kind == MemberKind::Cable ? cables : struts)++;
  std::cout << "tensegrity: " << T.members.size() << " members (" << cables << " cables, " << struts
            << " struts)" << (swapped ? " [swapped]" : "") << "\n";

  FlexResult flex = first_order_flex(T);
  std::cout << format_flex_result(T, flex);

  double eqRes = 0.0;
  stress_matrix(P, &eqRes, tol);
  std::cout << "stress_equilibrium_residual: " << eqRes << "\n";

  auto inv = central_involution(P, tol);
  if (inv) {
    std::cout << "central_involution:";
    for (int i : *inv) std::cout << " " << i;
    std::cout << "\n";
  } else {
    std::cout << "central_involution: none\n";
  }

  ConeReport cones = cone_condition(skeleton(P), tol);
  std::cout << format_cone_report(cones);

  bool ok = true;
  if (probeTrials > 0) {
    ProbeReport probe = local_probe(P, probeTrials, probeRadius, seed, tol);
    std::cout << format_probe_report(probe);
    ok = probe.violations == 0;
  }
  return ok ? 0 : 1;
}

int cmd_fixtures(const std::string& name, const std::string& outDir) {
  FixtureSet set = generate_fixtures(name, outDir);
  std::cout << "fixture: " << set.name << "\n";
  for (const auto& f : set.files) std::cout << "  wrote " << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wachspress coordinates, expansion bounds, tensegrity rigidity and reconstruction of convex polytopes"};
  app.require_subcommand(1);

  std::string file, qfile, point, refFile, outDir = ".", name;
  bool swapped = false;
  int probeTrials = 0;
  double probeRadius = 1e-2;
  unsigned long long seed = 1;

  auto* analyze = app.add_subcommand("analyze", "Wachspress coordinates and matrix properties");
  analyze->add_option("file", file, "polytope file")->required();
  analyze->add_option("--point", point, "interior point as comma separated coordinates");

  auto* compare = app.add_subcommand("compare", "expansion comparison against an embedding");
  compare->add_option("polytope", file)->required();
  compare->add_option("embedding", qfile)->required();
  compare->add_option("--point", point);

  auto* mapCmd = app.add_subcommand("map", "apply the coordinate-induced map to a point");
  mapCmd->add_option("polytope", file)->required();
  mapCmd->add_option("embedding", qfile)->required();
  mapCmd->add_option("--point", point)->required();

  auto* rec = app.add_subcommand("reconstruct", "solve the reconstruction program");
  rec->add_option("problem", file)->required();
  rec->add_option("--reference", refFile, "polytope file to compare against");

  auto* rig = app.add_subcommand("rigidity", "tensegrity analysis of a polytope");
  rig->add_option("file", file)->required();
  rig->add_flag("--swapped", swapped, "struts on edges, central cables");
  rig->add_option("--probe", probeTrials, "number of perturbation trials");
  rig->add_option("--radius", probeRadius, "perturbation radius");
  rig->add_option("--seed", seed, "probe seed");

  auto* fix = app.add_subcommand("fixtures", "generate bundled example data");
  fix->add_option("name", name, "cube-path | octagon | pentagon-exterior | cube-twist | fourcube-twist | pyramid-codim3 | random-corpus")
      ->required();
  fix->add_option("-o,--out", outDir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(file, point);
    if (compare->parsed()) return cmd_compare(file, qfile, point);
    if (mapCmd->parsed()) return cmd_map(file, qfile, point);
    if (rec->parsed()) return cmd_reconstruct(file, refFile);
    if (rig->parsed()) return cmd_rigidity(file, swapped, probeTrials, probeRadius, seed);
    if (fix->parsed()) return cmd_fixtures(name, outDir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
