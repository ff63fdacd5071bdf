#include "polyrig/fixtures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>

#include <json.hpp>

#include "polyrig/io.hpp"
#include "polyrig/rigidity.hpp"

namespace polyrig {

using nlohmann::json;

Polytope hypercube(int d) {
  const int n = 1 << d;
  Matrix pts(n, d);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < d; ++i) pts(k, i) = (k >> i) & 1 ? 1.0 : -1.0;
  return build_polytope(pts);
}

Polytope regular_polygon(int n, double r, double phase) {
  Matrix pts(n, 2);
  for (int k = 0; k < n; ++k) {
    const double a = phase + 2.0 * std::numbers::pi * k / n;
    pts(k, 0) = r * std::cos(a);
    pts(k, 1) = r * std::sin(a);
  }
  return build_polytope(pts);
}

Polytope regular_simplex(int d) {
  // d+1 unit vectors in R^{d+1} summing to zero, rotated down to R^d
  Matrix raw = Matrix::Identity(d + 1, d + 1);
  raw.array() -= 1.0 / (d + 1);
  Eigen::JacobiSVD<Matrix> svd(raw, Eigen::ComputeFullV);
  Matrix pts = raw * svd.matrixV().leftCols(d);
  pts /= pts.row(0).norm();
  return build_polytope(pts);
}

Polytope cross_polytope(int d) {
  Matrix pts = Matrix::Zero(2 * d, d);
  for (int i = 0; i < d; ++i) {
    pts(2 * i, i) = 1.0;
    pts(2 * i + 1, i) = -1.0;
  }
  return build_polytope(pts);
}

Polytope random_polytope(int d, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  // radius spread shrinks over attempts; on a common sphere every point is
  // extreme, so the sampler always terminates
  double spread = 0.18;
  for (int attempt = 0; attempt < 400; ++attempt, spread *= 0.97) {
    std::uniform_real_distribution<double> radius(1.0 - spread, 1.0 + spread);
    Matrix pts(n, d);
    for (int i = 0; i < n; ++i) {
      Vector v(d);
      for (int k = 0; k < d; ++k) v[k] = gauss(rng);
      pts.row(i) = radius(rng) * v.normalized().transpose();
    }
    try {
      Polytope P = build_polytope(pts);
      if (P.containsInterior(Vector::Zero(d)) && P.interiorMargin(Vector::Zero(d)) > 0.05) return P;
    } catch (const Error&) {
      // resample
    }
  }
  throw Error("could not sample a polytope with the origin well inside");
}

Polytope random_centrally_symmetric(int d, int pairs, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.85, 1.2);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Matrix pts(2 * pairs, d);
    for (int i = 0; i < pairs; ++i) {
      Vector v(d);
      for (int k = 0; k < d; ++k) v[k] = gauss(rng);
      v = radius(rng) * v.normalized();
      pts.row(2 * i) = v.transpose();
      pts.row(2 * i + 1) = -v.transpose();
    }
    try {
      Polytope P = build_polytope(pts);
      if (P.interiorMargin(Vector::Zero(d)) > 0.05) return P;
    } catch (const Error&) {
    }
  }
  throw Error("could not sample a centrally symmetric polytope");
}

CubePathFixture cube_path_fixture() {
  CubePathFixture fx;
  fx.cube = hypercube(3);
  const int n = 8;
  auto adj = fx.cube.adjacency();

  // Assign each vertex an integer level so that every edge steps by exactly
  // one; found by exhaustive backtracking over the step-sign sequences.
  std::vector<int> level(n, 100);
  std::function<bool(int)> assign = [&](int v) {
    if (v == n) return true;
    if (level[v] != 100) return assign(v + 1);
    for (int w : adj[v])
      if (level[w] != 100) {
        for (int step : {1, -1}) {
          level[v] = level[w] + step;
          bool ok = true;
          for (int u : adj[v])
            if (level[u] != 100 && std::abs(level[u] - level[v]) != 1) ok = false;
          if (ok && assign(v + 1)) return true;
        }
        level[v] = 100;
        return false;
      }
    level[v] = 0;
    if (assign(v + 1)) return true;
    level[v] = 100;
    return false;
  };
  if (!assign(0)) throw Error("no path grading of the cube graph exists");
  const int lo = *std::min_element(level.begin(), level.end());
  for (int& l : level) l -= lo;

  const double r = std::sqrt(3.0);
  const double step = 2.0 * std::asin(1.0 / r);
  Matrix pts(n, 2);
  for (int v = 0; v < n; ++v) {
    pts(v, 0) = r * std::cos(level[v] * step);
    pts(v, 1) = r * std::sin(level[v] * step);
  }
  fx.path = GraphEmbedding{edge_graph(fx.cube), pts, 2};
  fx.arcStepDegrees = step * 180.0 / std::numbers::pi;
  fx.levels = level;
  return fx;
}

OctagonFixture octagon_fixture() {
  OctagonFixture fx;
  fx.octagon = regular_polygon(8);
  // same vertices re-spaced three steps apart on the same circle: every edge
  // lengthens from 2 sin(pi/8) to 2 sin(3 pi/8), norms and antipodes kept
  Matrix pts(8, 2);
  for (int k = 0; k < 8; ++k) {
    const double a = 3.0 * 2.0 * std::numbers::pi * k / 8.0;
    pts(k, 0) = std::cos(a);
    pts(k, 1) = std::sin(a);
  }
  fx.star = GraphEmbedding{edge_graph(fx.octagon), pts, 2};
  return fx;
}

namespace {

// One-parameter family of convex pentagons around (2.6, 0); the parameter
// shifts the vertex directions.
Matrix pentagon_family(double t) {
  const double phi0[5] = {0.1, 1.35, 2.7, 4.0, 5.3};
  const double dphi[5] = {0.0, 0.3, -0.2, 0.15, -0.1};
  const double rho[5] = {1.0, 1.15, 0.95, 1.1, 1.05};
  Matrix pts(5, 2);
  for (int i = 0; i < 5; ++i) {
    const double phi = phi0[i] + t * dphi[i];
    pts(i, 0) = 2.6 + rho[i] * std::cos(phi);
    pts(i, 1) = rho[i] * std::sin(phi);
  }
  return pts;
}

struct PolarData {
  Vector radii;
  Vector turns;  // |angle difference| per edge i -> i+1
  std::vector<int> signs;
};

PolarData polar_data(const Matrix& pts) {
  PolarData pd;
  const int n = static_cast<int>(pts.rows());
  pd.radii = pts.rowwise().norm();
  pd.turns = Vector(n);
  pd.signs.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    double d = std::atan2(pts(j, 1), pts(j, 0)) - std::atan2(pts(i, 1), pts(i, 0));
    d = std::remainder(d, 2.0 * std::numbers::pi);
    pd.signs[i] = d >= 0 ? 1 : -1;
    pd.turns[i] = std::abs(d);
  }
  return pd;
}

Matrix realize_polar(const Vector& radii, const Vector& turns, const std::vector<int>& signs) {
  const int n = static_cast<int>(radii.size());
  Matrix pts(n, 2);
  double th = 0.0;
  for (int i = 0; i < n; ++i) {
    pts(i, 0) = radii[i] * std::cos(th);
    pts(i, 1) = radii[i] * std::sin(th);
    th += signs[i] * turns[i];
  }
  return pts;
}

}  // namespace

PentagonFixture pentagon_exterior_fixture() {
  // Second sign pattern for the angular walk around the origin; the root of
  // its closure sum inside the family gives a second convex realization.
  const std::vector<int> signsB = {1, 1, -1, -1, 1};
  auto closure = [&](double t) {
    PolarData pd = polar_data(pentagon_family(t));
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += signsB[i] * pd.turns[i];
    return s;
  };
  double lo = -0.3, hi = 0.0;
  if (closure(lo) * closure(hi) >= 0) throw Error("pentagon closure root not bracketed");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (closure(lo) * closure(mid) <= 0)
      hi = mid;
    else
      lo = mid;
  }
  const double t0 = 0.5 * (lo + hi);

  PentagonFixture fx;
  Matrix A = pentagon_family(t0);
  PolarData pd = polar_data(A);
  Matrix B = realize_polar(pd.radii, pd.turns, signsB);

  EdgeGraph cycle;
  cycle.n = 5;
  for (int i = 0; i < 5; ++i) cycle.edges.push_back({std::min(i, (i + 1) % 5), std::max(i, (i + 1) % 5)});
  std::sort(cycle.edges.begin(), cycle.edges.end());
  fx.first = GraphEmbedding{cycle, A, 2};
  fx.second = GraphEmbedding{cycle, B, 2};
  fx.radii = pd.radii;
  fx.lengths = Vector(5);
  for (int i = 0; i < 5; ++i) fx.lengths[i] = (A.row(i) - A.row((i + 1) % 5)).norm();
  return fx;
}

TwistFixture cube_twist_fixture() {
  TwistFixture fx;
  fx.polytope = hypercube(3);
  const int n = fx.polytope.n();
  fx.field = Matrix::Zero(n, 3);
  for (int v = 0; v < n; ++v) {
    const double s = fx.polytope.vertices(v, 2) > 0 ? 1.0 : -1.0;
    fx.field(v, 0) = -s * fx.polytope.vertices(v, 1);
    fx.field(v, 1) = s * fx.polytope.vertices(v, 0);
  }
  return fx;
}

TwistFixture fourcube_twist_fixture() {
  TwistFixture fx;
  fx.polytope = hypercube(4);
  const int n = fx.polytope.n();
  fx.field = Matrix::Zero(n, 4);
  for (int v = 0; v < n; ++v) {
    // twist the two 3-cube facets in x4 = +-1 oppositely; the pairing
    // v -> -v maps the field to its negative
    const double s = fx.polytope.vertices(v, 2) * fx.polytope.vertices(v, 3) > 0 ? 1.0 : -1.0;
    fx.field(v, 0) = -s * fx.polytope.vertices(v, 1);
    fx.field(v, 1) = s * fx.polytope.vertices(v, 0);
  }
  return fx;
}

PyramidFixture pyramid_codim3_fixture() {
  PentagonFixture base = pentagon_exterior_fixture();
  auto lift = [](const Matrix& pentagon) {
    Matrix pts(6, 3);
    pts.setZero();
    pts.block(0, 0, 5, 2) = pentagon;
    pts.col(2).head(5).setOnes();
    // apex at the origin: row 5 stays zero
    return build_polytope(pts);
  };
  PyramidFixture fx;
  fx.first = lift(base.first.points);
  fx.second = lift(base.second.points);
  return fx;
}

namespace {

json value_entry(double value, const std::string& tolerance, const std::string& method) {
  json j;
  j["value"] = value;
  j["tolerance"] = tolerance;
  j["method"] = method;
  return j;
}

}  // namespace

FixtureSet generate_fixtures(const std::string& name, const std::string& outDir) {
  namespace fs = std::filesystem;
  fs::create_directories(outDir);
  auto path = [&](const std::string& file) { return (fs::path(outDir) / file).string(); };

  FixtureSet set;
  set.name = name;
  json manifest;
  manifest["fixture"] = name;

  if (name == "cube-path") {
    CubePathFixture fx = cube_path_fixture();
    write_polytope(path("cube.json"), fx.cube);
    write_embedding(path("cube-path.json"), fx.path);
    set.files = {path("cube.json"), path("cube-path.json")};
    manifest["arc_step_degrees"] =
        value_entry(fx.arcStepDegrees, "1e-4", "closed form 2*asin(1/sqrt(3)), levels by arc-sign search");
    manifest["edge_length"] = value_entry(2.0, "1e-9", "chord of the arc step at radius sqrt(3)");
    manifest["vertex_norm"] = value_entry(std::sqrt(3.0), "1e-9", "all points on the circumcircle");
    manifest["origin_in_hull"] = true;
    manifest["levels"] = fx.levels;
  } else if (name == "octagon") {
    OctagonFixture fx = octagon_fixture();
    write_polytope(path("octagon.json"), fx.octagon);
    write_embedding(path("octagon-star.json"), fx.star);
    set.files = {path("octagon.json"), path("octagon-star.json")};
    manifest["polygon_edge_length"] =
        value_entry(2.0 * std::sin(std::numbers::pi / 8.0), "1e-12", "chord at one eighth turn");
    manifest["star_edge_length"] =
        value_entry(2.0 * std::sin(3.0 * std::numbers::pi / 8.0), "1e-12", "chord at three eighth turns");
    manifest["vertex_norm"] = value_entry(1.0, "1e-12", "unit circumcircle");
    manifest["centrally_symmetric"] = true;
  } else if (name == "pentagon-exterior") {
    PentagonFixture fx = pentagon_exterior_fixture();
    write_embedding(path("pentagon-a.json"), fx.first);
    write_embedding(path("pentagon-b.json"), fx.second);
    set.files = {path("pentagon-a.json"), path("pentagon-b.json")};
    json radii = json::array(), lengths = json::array();
    for (int i = 0; i < 5; ++i) {
      radii.push_back(fx.radii[i]);
      lengths.push_back(fx.lengths[i]);
    }
    manifest["radii"] = radii;
    manifest["edge_lengths"] = lengths;
    manifest["min_gram_deviation"] =
        value_entry(1e-3, "lower bound", "two closure sign patterns, root found by bisection");
    manifest["origin_outside_hull"] = true;
  } else if (name == "cube-twist" || name == "fourcube-twist") {
    TwistFixture fx = name == "cube-twist" ? cube_twist_fixture() : fourcube_twist_fixture();
    const std::string polyFile = name == "cube-twist" ? "cube.json" : "fourcube.json";
    write_polytope(path(polyFile), fx.polytope);
    json field;
    field["n"] = fx.polytope.n();
    field["dimension"] = fx.polytope.dimension;
    json rows = json::array();
    for (int i = 0; i < fx.field.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < fx.field.cols(); ++k) row.push_back(fx.field(i, k));
      rows.push_back(row);
    }
    field["field"] = rows;
    std::ofstream(path("twist-field.json")) << field.dump(2) << "\n";
    set.files = {path(polyFile), path("twist-field.json")};
    manifest["max_member_rate"] =
        value_entry(0.0, "1e-12", "facet twist field, rates verified by substitution");
    manifest["trivial"] = false;
  } else if (name == "pyramid-codim3") {
    PyramidFixture fx = pyramid_codim3_fixture();
    write_polytope(path("pyramid-a.json"), fx.first);
    write_polytope(path("pyramid-b.json"), fx.second);
    set.files = {path("pyramid-a.json"), path("pyramid-b.json")};
    manifest["origin_vertex_index"] = 5;
    manifest["note"] = "same edge graph, edge lengths and vertex-origin distances, not isometric";
  } else if (name == "random-corpus") {
    std::mt19937_64 rng(20240531);
    json entries = json::array();
    int idx = 0;
    for (int d = 2; d <= 4; ++d) {
      for (int k = 0; k < 4; ++k) {
        const int n = d + 3 + 2 * k;
        Polytope P = random_polytope(d, std::min(n, 14), rng);
        const std::string file = "random-" + std::to_string(idx++) + ".json";
        write_polytope(path(file), P);
        set.files.push_back(path(file));
        json e;
        e["file"] = file;
        e["dimension"] = d;
        e["vertices"] = P.n();
        entries.push_back(e);
      }
    }
    manifest["seed"] = 20240531;
    manifest["entries"] = entries;
  } else {
    throw UnknownFixture("no fixture named " + name);
  }

  const std::string manifestPath = path("manifest.json");
  std::ofstream(manifestPath) << manifest.dump(2) << "\n";
  set.files.push_back(manifestPath);
  return set;
}

}  // namespace polyrig
