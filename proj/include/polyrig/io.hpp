#pragma once

#include <string>
#include <vector>

#include "polyrig/expansion.hpp"
#include "polyrig/geometry.hpp"
#include "polyrig/rigidity.hpp"
#include "polyrig/sdp.hpp"
#include "polyrig/wachspress.hpp"

namespace polyrig {

/// Polytope file: {"dimension": d, "vertices": [[..]], "facets"?: [[..]], "labels"?: [..]}
struct PolytopeFile {
  Polytope polytope;
  std::vector<std::string> labels;
};

PolytopeFile read_polytope(const std::string& path, double tol = kDefaultTol);
void write_polytope(const std::string& path, const Polytope& P,
                    const std::vector<std::string>& labels = {});

/// Embedding file: {"n": n, "ambient": e, "points": [[..]], "edges": [[i,j],..]}
GraphEmbedding read_embedding(const std::string& path);
void write_embedding(const std::string& path, const GraphEmbedding& q);

/// Problem file: {"n": n, "edges": [[i,j],..], "lengths": [..], "alpha": [..]}
struct ProblemFile {
  EdgeGraph graph;
  Vector lengths;
  Vector alpha;
};

ProblemFile read_problem(const std::string& path);
void write_problem(const std::string& path, const EdgeGraph& graph, const Vector& lengths,
                   const Vector& alpha);

std::string format_vector(const Vector& v);
std::string format_matrix(const Matrix& M, const std::string& indent = "  ");
std::string format_property_report(const PropertyReport& report);
std::string format_comparison_report(const ComparisonReport& rep);
std::string format_flex_result(const Tensegrity& T, const FlexResult& flex);
std::string format_probe_report(const ProbeReport& rep);
std::string format_cone_report(const ConeReport& rep);
std::string format_reconstruction_report(const ReconstructionReport& rep);
std::string format_certificate_report(const CertificateReport& rep);

}  // namespace polyrig
