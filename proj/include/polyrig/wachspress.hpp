#pragma once

#include <string>
#include <vector>

#include "polyrig/geometry.hpp"

namespace polyrig {

/// Normalized and unnormalized Wachspress coordinates of a point.
struct WachspressData {
  Vector point;       // x
  Vector alphaTilde;  // unnormalized, > 0 for interior points
  Vector alpha;       // normalized, sums to 1 and reproduces x
};

/// The symmetric matrix supported on the edge graph whose kernel spans the
/// vertex coordinates, together with its spectral data.
struct IzmestievData {
  Matrix Mtilde;       // unnormalized
  Matrix M;            // normalized so that the total sum is 1
  double sumTilde;     // sum of all entries of Mtilde
  Vector eigenvalues;  // of M, sorted descending
  Vector perron;       // positive top eigenvector scaled into the simplex
  int kernelDim;       // eigenvalues of M counted as zero
};

/// Wachspress coordinates of an interior point x, via dual facet volumes of
/// the translated polytope. Throws PointNotInterior.
WachspressData wachspress(const Polytope& P, const Vector& x, double tol = kDefaultTol);

/// Izmestiev matrix of P with 0 in the interior, by the dual-face-volume
/// formula; diagonal recovered from the kernel condition M X_P = 0.
IzmestievData izmestiev(const Polytope& P, double tol = kDefaultTol);

/// Hessian of vol(P°(c)) at c = 1 by central second differences.
/// The parallel variant is bitwise identical to the serial reference.
Matrix izmestiev_fd(const Polytope& P, double step, double tol = kDefaultTol);
Matrix izmestiev_fd_serial(const Polytope& P, double step, double tol = kDefaultTol);

struct PropertyCheck {
  std::string name;
  bool pass;
  double residual;
  double tolerance;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool allPass() const;
  const PropertyCheck* find(const std::string& name) const;
};

/// Checks edge positivity, non-edge zeros, kernel dimension, M X_P = 0,
/// spectral signature, Perron positivity and the row-sum identity.
PropertyReport verify_izmestiev(const Polytope& P, const IzmestievData& data, double tol = 1e-8);

}  // namespace polyrig
