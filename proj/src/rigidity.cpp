#include "polyrig/rigidity.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polyrig/linprog.hpp"

namespace polyrig {

Tensegrity build_tensegrity(const Polytope& P, bool swapped) {
  Vector zero = Vector::Zero(P.dimension);
  if (!P.containsInterior(zero)) throw OriginNotInterior("tensegrity needs 0 in int(P)");
  const int n = P.n();
  Tensegrity T;
  T.nodes = Matrix::Zero(n + 1, P.dimension);
  T.nodes.topRows(n) = P.vertices;
  T.pinnedNode = n;
  const MemberKind edgeKind = swapped ? MemberKind::Strut : MemberKind::Cable;
  const MemberKind centralKind = swapped ? MemberKind::Cable : MemberKind::Strut;
  for (auto [i, j] : P.edges)
    T.members.push_back({i, j, edgeKind, (P.vertices.row(i) - P.vertices.row(j)).norm()});
  for (int i = 0; i < n; ++i) T.members.push_back({i, n, centralKind, P.vertices.row(i).norm()});
  return T;
}

Vector member_rates(const Tensegrity& T, const Matrix& velocity) {
  Vector rates(static_cast<int>(T.members.size()));
  auto vel = [&](int node) -> Eigen::RowVectorXd {
    if (node == T.pinnedNode) return Eigen::RowVectorXd::Zero(T.dim());
    return velocity.row(node);
  };
  for (size_t m = 0; m < T.members.size(); ++m) {
    const auto& mem = T.members[m];
    const Eigen::RowVectorXd dx = T.nodes.row(mem.i) - T.nodes.row(mem.j);
    const Eigen::RowVectorXd dv = vel(mem.i) - vel(mem.j);
    rates[static_cast<int>(m)] = dx.dot(dv) / std::max(mem.restLength, 1e-300);
  }
  return rates;
}

namespace {

// Orthonormal basis of the rotation fields v_i = S p_i, S skew-symmetric.
std::vector<Vector> trivial_flex_basis(const Tensegrity& T) {
  const int n = T.freeNodes();
  const int d = T.dim();
  std::vector<Vector> fields;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      Vector field = Vector::Zero(n * d);
      for (int i = 0; i < n; ++i) {
        field[i * d + a] = -T.nodes(i, b);
        field[i * d + b] = T.nodes(i, a);
      }
      fields.push_back(field);
    }
  }
  // Gram-Schmidt
  std::vector<Vector> basis;
  for (Vector f : fields) {
    for (const Vector& b : basis) f -= b.dot(f) * b;
    const double nn = f.norm();
    if (nn > 1e-12) basis.push_back(f / nn);
  }
  return basis;
}

Matrix unflatten(const Vector& v, int n, int d) {
  Matrix M(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) M(i, k) = v[i * d + k];
  return M;
}

}  // namespace

bool is_trivial_flex(const Tensegrity& T, const Matrix& velocity, double tol) {
  const int n = T.freeNodes();
  const int d = T.dim();
  Vector flat(n * d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) flat[i * d + k] = velocity(i, k);
  Vector res = flat;
  for (const Vector& b : trivial_flex_basis(T)) res -= b.dot(flat) * b;
  return res.norm() <= tol * (1.0 + flat.norm());
}

FlexResult first_order_flex(const Tensegrity& T, double tol) {
  const int n = T.freeNodes();
  const int d = T.dim();
  const int nm = static_cast<int>(T.members.size());
  const auto trivial = trivial_flex_basis(T);

  double lengthScale = 0.0;
  for (const auto& m : T.members) lengthScale = std::max(lengthScale, m.restLength);

  // LP: velocities in a box, per-member slack in [0,1], maximize total slack.
  LpBuilder lp;
  std::vector<int> v(n * d);
  for (int k = 0; k < n * d; ++k) v[k] = lp.addVariable(-1.0, 1.0);
  std::vector<int> slack;
  for (int m = 0; m < nm; ++m) {
    if (T.members[m].kind == MemberKind::Bar)
      slack.push_back(-1);
    else
      slack.push_back(lp.addVariable(0.0, 1.0, 1.0));
  }
  auto rateTerms = [&](const Member& mem) {
    std::vector<std::pair<int, double>> terms;
    const Eigen::RowVectorXd dx = T.nodes.row(mem.i) - T.nodes.row(mem.j);
    if (mem.i != T.pinnedNode)
      for (int k = 0; k < d; ++k) terms.push_back({v[mem.i * d + k], dx[k]});
    if (mem.j != T.pinnedNode)
      for (int k = 0; k < d; ++k) terms.push_back({v[mem.j * d + k], -dx[k]});
    return terms;
  };
  for (int m = 0; m < nm; ++m) {
    const auto& mem = T.members[m];
    auto terms = rateTerms(mem);
    if (mem.kind == MemberKind::Bar) {
      lp.addRow(terms, '=', 0.0);
    } else if (mem.kind == MemberKind::Cable) {
      terms.push_back({slack[m], lengthScale});
      lp.addRow(terms, '<', 0.0);  // rate <= -slack * scale
    } else {
      terms.push_back({slack[m], -lengthScale});
      lp.addRow(terms, '>', 0.0);  // rate >= slack * scale
    }
  }
  for (const Vector& b : trivial) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < n * d; ++k)
      if (std::abs(b[k]) > 1e-14) terms.push_back({v[k], b[k]});
    lp.addRow(terms, '=', 0.0);
  }
  LpSolution sol = lp.solve();

  FlexResult result;
  result.slack = (sol.status == LpStatus::Optimal) ? sol.objective : 0.0;
  if (sol.status == LpStatus::Optimal && sol.objective > 1e3 * tol) {
    Vector flat(n * d);
    for (int k = 0; k < n * d; ++k) flat[k] = sol.x[v[k]];
    result.flexVector = unflatten(flat, n, d);
    result.memberRates = member_rates(T, result.flexVector);
    result.classification = FlexClass::NontrivialFlex;
    return result;
  }

  // No strictly signed flex; probe the bar-framework kernel (all rates 0).
  Matrix R(nm + static_cast<int>(trivial.size()), n * d);
  R.setZero();
  for (int m = 0; m < nm; ++m) {
    const auto& mem = T.members[m];
    const Eigen::RowVectorXd dx = T.nodes.row(mem.i) - T.nodes.row(mem.j);
    if (mem.i != T.pinnedNode)
      for (int k = 0; k < d; ++k) R(m, mem.i * d + k) = dx[k];
    if (mem.j != T.pinnedNode)
      for (int k = 0; k < d; ++k) R(m, mem.j * d + k) = -dx[k];
  }
  for (size_t t = 0; t < trivial.size(); ++t) R.row(nm + static_cast<int>(t)) = trivial[t].transpose();

  Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * (1.0 + sv.size() * sv[0]);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  if (rank < n * d) {
    Vector flat = svd.matrixV().col(n * d - 1);
    flat /= flat.cwiseAbs().maxCoeff();
    result.flexVector = unflatten(flat, n, d);
    result.memberRates = member_rates(T, result.flexVector);
    result.classification = FlexClass::NontrivialFlex;
    return result;
  }

  result.classification = FlexClass::TrivialOnly;
  result.flexVector = Matrix::Zero(n, d);
  result.memberRates = Vector::Zero(nm);
  return result;
}

Matrix stress_matrix(const Polytope& P, double* equilibriumResidual, double tol) {
  const int n = P.n();
  Vector zero = Vector::Zero(P.dimension);
  if (!P.containsInterior(zero, tol)) throw OriginNotInterior("stress matrix needs 0 in int(P)");
  IzmestievData iz = izmestiev(P, tol);
  Vector alpha = wachspress(P, zero, tol).alpha;

  // member stresses: M_ij on edges, -alpha_i on the central struts;
  // entries are -stress off the diagonal and the stress row sums on it
  Matrix omega = Matrix::Zero(n + 1, n + 1);
  Vector rowStress = Vector::Zero(n + 1);
  auto place = [&](int i, int j, double stress) {
    omega(i, j) = omega(j, i) = -stress;
    rowStress[i] += stress;
    rowStress[j] += stress;
  };
  for (auto [i, j] : P.edges) place(i, j, iz.M(i, j));
  for (int i = 0; i < n; ++i) place(i, n, -alpha[i]);
  omega.diagonal() = rowStress;

  if (equilibriumResidual) {
    Matrix placement = Matrix::Zero(n + 1, P.dimension + 1);
    placement.topLeftCorner(n, P.dimension) = P.vertices;
    placement.col(P.dimension).setOnes();  // translations are in the kernel too
    *equilibriumResidual = (omega * placement).cwiseAbs().maxCoeff();
  }
  return omega;
}

std::optional<std::vector<int>> central_involution(const Polytope& P, double tol) {
  const int n = P.n();
  std::vector<int> pairing(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((P.vertices.row(i) + P.vertices.row(j)).norm() <=
          1e3 * tol * (1.0 + P.vertices.row(i).norm())) {
        pairing[i] = j;
        break;
      }
    }
    if (pairing[i] < 0 || pairing[i] == i) return std::nullopt;
  }
  for (int i = 0; i < n; ++i)
    if (pairing[pairing[i]] != i) return std::nullopt;
  return pairing;
}

bool ConeReport::allInterior() const {
  return std::all_of(interior.begin(), interior.end(), [](bool b) { return b; });
}

ConeReport cone_condition(const GraphEmbedding& q, double tol) {
  if (!q.graph.connected()) throw DisconnectedGraph("cone condition needs a connected graph");
  const int n = q.graph.n;
  auto adj = q.graph.adjacency();
  ConeReport rep;
  rep.interior.resize(n);
  rep.margins.resize(n);
  for (int i = 0; i < n; ++i) {
    Matrix gens(static_cast<int>(adj[i].size()), q.ambient);
    for (size_t k = 0; k < adj[i].size(); ++k)
      gens.row(static_cast<int>(k)) = q.points.row(adj[i][k]) - q.points.row(i);
    const Vector target = -q.points.row(i).transpose();
    const double margin = cone_interior_margin(gens, target);
    rep.margins[i] = margin;
    rep.interior[i] = margin > 1e3 * tol * (1.0 + target.norm());
  }
  return rep;
}

namespace {

struct TrialOutcome {
  bool converged = false;
  bool violation = false;
  double gramDev = 0.0;
};

TrialOutcome run_probe_trial(const GraphEmbedding& ref, const Vector& radii, double radius,
                             unsigned long long seed, double tol) {
  const int n = ref.graph.n;
  const int e = ref.ambient;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Matrix q = ref.points;
  for (int i = 0; i < n; ++i) {
    Vector dir(e);
    for (int k = 0; k < e; ++k) dir[k] = gauss(rng);
    dir.normalize();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    q.row(i) += radius * std::pow(unit(rng), 1.0 / e) * dir.transpose();
  }

  // alternating per-constraint corrections toward {edges <=, norms >=}
  const double feasTol = 1e-10 * (1.0 + ref.points.cwiseAbs().maxCoeff());
  bool feasible = false;
  for (int sweep = 0; sweep < 200 && !feasible; ++sweep) {
    feasible = true;
    for (auto [i, j] : ref.graph.edges) {
      const double target = (ref.points.row(i) - ref.points.row(j)).norm();
      Eigen::RowVectorXd diff = q.row(i) - q.row(j);
      const double len = diff.norm();
      if (len > target + feasTol) {
        feasible = false;
        const Eigen::RowVectorXd mid = 0.5 * (q.row(i) + q.row(j));
        q.row(i) = mid + 0.5 * target / len * diff;
        q.row(j) = mid - 0.5 * target / len * diff;
      }
    }
    for (int i = 0; i < n; ++i) {
      const double len = q.row(i).norm();
      if (len < radii[i] - feasTol) {
        feasible = false;
        if (len > 1e-12)
          q.row(i) *= radii[i] / len;
        else
          q(i, 0) = radii[i];
      }
    }
  }
  TrialOutcome out;
  if (!feasible) return out;
  out.converged = true;
  const Matrix gram = q * q.transpose();
  const Matrix gramRef = ref.points * ref.points.transpose();
  out.gramDev = (gram - gramRef).cwiseAbs().maxCoeff();
  const double scale2 = 1.0 + gramRef.cwiseAbs().maxCoeff();
  out.violation = out.gramDev > 1e-4 * scale2;
  (void)tol;
  return out;
}

ProbeReport probe_impl(const GraphEmbedding& ref, int trials, double radius, unsigned long long seed,
                       double tol, bool parallel) {
  const int n = ref.graph.n;
  Vector radii(n);
  for (int i = 0; i < n; ++i) radii[i] = ref.points.row(i).norm();

  std::vector<TrialOutcome> outcomes(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int t = 0; t < trials; ++t)
    outcomes[t] = run_probe_trial(ref, radii, radius, seed * 0x9e3779b97f4a7c15ULL + t, tol);

  ProbeReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.radius = radius;
  for (int t = 0; t < trials; ++t) {
    if (outcomes[t].converged) ++rep.converged;
    rep.maxGramDeviation = std::max(rep.maxGramDeviation, outcomes[t].gramDev);
    if (outcomes[t].violation) {
      ++rep.violations;
      rep.violationTrials.push_back(t);
    }
  }
  return rep;
}

}  // namespace

ProbeReport probe_embedding(const GraphEmbedding& ref, int trials, double radius,
                            unsigned long long seed, double tol) {
  return probe_impl(ref, trials, radius, seed, tol, true);
}

ProbeReport probe_embedding_serial(const GraphEmbedding& ref, int trials, double radius,
                                   unsigned long long seed, double tol) {
  return probe_impl(ref, trials, radius, seed, tol, false);
}

ProbeReport local_probe(const Polytope& P, int trials, double radius, unsigned long long seed,
                        double tol) {
  Vector zero = Vector::Zero(P.dimension);
  if (!P.containsInterior(zero, tol)) throw OriginNotInterior("local probe needs 0 in int(P)");
  return probe_embedding(skeleton(P), trials, radius, seed, tol);
}

}  // namespace polyrig
