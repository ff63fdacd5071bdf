#include "polyrig/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace polyrig {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return j;
}

void dump_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Matrix parse_points(const json& arr, const std::string& what) {
  if (!arr.is_array() || arr.empty()) throw ParseError(what + " must be a nonempty array");
  const int n = static_cast<int>(arr.size());
  const int d = static_cast<int>(arr[0].size());
  Matrix pts(n, d);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(arr[i].size()) != d) throw ParseError(what + " rows differ in length");
    for (int k = 0; k < d; ++k) pts(i, k) = arr[i][k].get<double>();
  }
  return pts;
}

json points_to_json(const Matrix& pts) {
  json arr = json::array();
  for (int i = 0; i < pts.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < pts.cols(); ++k) row.push_back(pts(i, k));
    arr.push_back(row);
  }
  return arr;
}

std::vector<std::pair<int, int>> parse_edges(const json& arr, int n) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2) throw ParseError("edges must be pairs of indices");
    int i = e[0].get<int>(), j = e[1].get<int>();
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw ParseError("edge index out of range");
    if (i > j) std::swap(i, j);
    edges.push_back({i, j});
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

PolytopeFile read_polytope(const std::string& path, double tol) {
  json j = load_json(path);
  if (!j.contains("dimension") || !j.contains("vertices"))
    throw ParseError(path + ": polytope file needs \"dimension\" and \"vertices\"");
  const int d = j["dimension"].get<int>();
  Matrix pts = parse_points(j["vertices"], "vertices");
  if (pts.cols() != d) throw ParseError(path + ": vertex coordinates do not match the dimension");

  PolytopeFile out;
  if (j.contains("facets")) {
    std::vector<std::vector<int>> facets;
    for (const auto& f : j["facets"]) facets.push_back(f.get<std::vector<int>>());
    out.polytope = build_polytope_with_facets(pts, facets, tol);
  } else {
    out.polytope = build_polytope(pts, tol);
  }
  if (j.contains("labels")) out.labels = j["labels"].get<std::vector<std::string>>();
  return out;
}

void write_polytope(const std::string& path, const Polytope& P, const std::vector<std::string>& labels) {
  json j;
  j["dimension"] = P.dimension;
  j["vertices"] = points_to_json(P.vertices);
  json facets = json::array();
  for (const auto& f : P.facets) facets.push_back(f);
  j["facets"] = facets;
  if (!labels.empty()) j["labels"] = labels;
  dump_json(path, j);
}

GraphEmbedding read_embedding(const std::string& path) {
  json j = load_json(path);
  for (const char* key : {"n", "ambient", "points", "edges"})
    if (!j.contains(key)) throw ParseError(path + ": embedding file needs \"" + key + "\"");
  GraphEmbedding q;
  q.graph.n = j["n"].get<int>();
  q.ambient = j["ambient"].get<int>();
  q.points = parse_points(j["points"], "points");
  if (q.points.rows() != q.graph.n || q.points.cols() != q.ambient)
    throw ParseError(path + ": point array does not match n and ambient");
  q.graph.edges = parse_edges(j["edges"], q.graph.n);
  return q;
}

void write_embedding(const std::string& path, const GraphEmbedding& q) {
  json j;
  j["n"] = q.graph.n;
  j["ambient"] = q.ambient;
  j["points"] = points_to_json(q.points);
  json edges = json::array();
  for (auto [a, b] : q.graph.edges) edges.push_back(json::array({a, b}));
  j["edges"] = edges;
  dump_json(path, j);
}

ProblemFile read_problem(const std::string& path) {
  json j = load_json(path);
  for (const char* key : {"n", "edges", "lengths", "alpha"})
    if (!j.contains(key)) throw ParseError(path + ": problem file needs \"" + key + "\"");
  ProblemFile p;
  p.graph.n = j["n"].get<int>();
  p.graph.edges = parse_edges(j["edges"], p.graph.n);
  const auto lengths = j["lengths"].get<std::vector<double>>();
  if (lengths.size() != p.graph.edges.size()) throw ParseError(path + ": one length per edge required");
  p.lengths = Eigen::Map<const Vector>(lengths.data(), static_cast<int>(lengths.size()));
  const auto alpha = j["alpha"].get<std::vector<double>>();
  if (static_cast<int>(alpha.size()) != p.graph.n) throw ParseError(path + ": one alpha per vertex required");
  p.alpha = Eigen::Map<const Vector>(alpha.data(), static_cast<int>(alpha.size()));
  return p;
}

void write_problem(const std::string& path, const EdgeGraph& graph, const Vector& lengths,
                   const Vector& alpha) {
  json j;
  j["n"] = graph.n;
  json edges = json::array();
  for (auto [a, b] : graph.edges) edges.push_back(json::array({a, b}));
  j["edges"] = edges;
  j["lengths"] = std::vector<double>(lengths.data(), lengths.data() + lengths.size());
  j["alpha"] = std::vector<double>(alpha.data(), alpha.data() + alpha.size());
  dump_json(path, j);
}

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os.precision(12);
  os << "[";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

std::string format_matrix(const Matrix& M, const std::string& indent) {
  std::ostringstream os;
  os.precision(12);
  for (int i = 0; i < M.rows(); ++i) {
    os << indent << "[";
    for (int j = 0; j < M.cols(); ++j) os << (j ? ", " : "") << M(i, j);
    os << "]\n";
  }
  return os.str();
}

std::string format_property_report(const PropertyReport& report) {
  std::ostringstream os;
  os.precision(6);
  for (const auto& c : report.checks) {
    os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  residual=" << c.residual
       << " tolerance=" << c.tolerance << "\n";
  }
  os << "properties: " << (report.allPass() ? "all pass" : "violations present") << "\n";
  return os.str();
}

std::string format_comparison_report(const ComparisonReport& rep) {
  std::ostringstream os;
  os.precision(12);
  auto side = [&](const char* name, const SideTerms& t) {
    os << name << ": edge_term=" << t.edgeTerm << " center_term=" << t.centerTerm
       << " trace_term=" << t.traceTerm << " expansion=" << std::sqrt(t.expansionSq) << "\n";
  };
  side("P", rep.pSide);
  side("q", rep.qSide);
  os << "edges_dominated: " << (rep.edgesDominated ? "yes" : "no")
     << " (max excess " << rep.maxEdgeExcess << ")\n";
  os << "expansion_inequality: " << (rep.inequalityHolds ? "holds" : "VIOLATED") << "\n";
  os << "equality_case: " << (rep.equalityDetected ? "yes" : "no") << "\n";
  if (rep.affineWitness) {
    os << "affine_witness_residual: " << rep.affineWitness->residual << "\n";
    os << "affine_witness_map:\n" << format_matrix(rep.affineWitness->map);
  }
  return os.str();
}

std::string format_flex_result(const Tensegrity& T, const FlexResult& flex) {
  std::ostringstream os;
  os.precision(9);
  os << "classification: "
     << (flex.classification == FlexClass::NontrivialFlex ? "nontrivial_flex" : "trivial_only") << "\n";
  os << "lp_slack: " << flex.slack << "\n";
  if (flex.classification == FlexClass::NontrivialFlex) {
    os << "flex:\n" << format_matrix(flex.flexVector);
    os << "member rates (kind, i, j, rate):\n";
    for (size_t m = 0; m < T.members.size(); ++m) {
      const auto& mem = T.members[m];
      const char* kind = mem.kind == MemberKind::Cable ? "cable"
                         : mem.kind == MemberKind::Strut ? "strut"
                                                         : "bar";
      os << "  " << kind << " " << mem.i << " " << mem.j << " " << flex.memberRates[static_cast<int>(m)]
         << "\n";
    }
  }
  return os.str();
}

std::string format_probe_report(const ProbeReport& rep) {
  std::ostringstream os;
  os << "trials: " << rep.trials << "\nseed: " << rep.seed << "\nradius: " << rep.radius
     << "\nconverged: " << rep.converged << "\nviolations: " << rep.violations
     << "\nmax_gram_deviation: " << rep.maxGramDeviation << "\n";
  return os.str();
}

std::string format_cone_report(const ConeReport& rep) {
  std::ostringstream os;
  os.precision(6);
  int failures = 0;
  for (size_t i = 0; i < rep.interior.size(); ++i) {
    os << "  vertex " << i << ": " << (rep.interior[i] ? "interior" : "NOT interior")
       << " (margin " << rep.margins[i] << ")\n";
    if (!rep.interior[i]) ++failures;
  }
  os << "cone_condition: " << (failures == 0 ? "all vertices pass" : std::to_string(failures) + " failures")
     << "\n";
  return os.str();
}

std::string format_reconstruction_report(const ReconstructionReport& rep) {
  std::ostringstream os;
  os.precision(9);
  const auto& s = rep.solution;
  os << "converged: " << (s.converged ? "yes" : "no") << " after " << s.iterations << " iterations\n";
  os << "objective: " << s.objective << "\n";
  os << "residuals: split=" << s.splitResidual << " edges=" << s.maxEdgeViolation
     << " centering=" << s.centeringResidual << " min_eigenvalue=" << s.minEigenvalue << "\n";
  os << "rank: " << s.rank << "\n";
  os << "points:\n" << format_matrix(s.embedding);
  if (rep.hasReference) {
    os << "affine_fit_residuals: forward=" << rep.forwardResidual
       << " backward=" << rep.backwardResidual << "\n";
    os << "affine_equivalent: " << (rep.affineEquivalent ? "yes" : "no") << "\n";
    os << "edge_lengths_match: " << (rep.edgeLengthsMatch ? "yes" : "no") << "\n";
  }
  return os.str();
}

std::string format_certificate_report(const CertificateReport& rep) {
  std::ostringstream os;
  os.precision(12);
  os << "primal e(p): " << rep.primalValue << "\ndual d(M): " << rep.dualValue
     << "\ngap: " << rep.gap << "\nmu: " << rep.mu << "\npsd_margin: " << rep.psdMargin
     << "\ncertified: " << (rep.certified ? "yes" : "no") << "\n";
  return os.str();
}

}  // namespace polyrig
