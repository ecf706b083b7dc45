#pragma once

#include "fec/coordinate_model.hpp"
#include "fec/polynomial.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace fec::models {

/// Axis-aligned box in R^n.
struct Box {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

/// Symmetric matrix of polynomial coefficients a_ij(x) in variables x1..xn
/// with a uniform ellipticity lower bound. This also covers diagonal-metric
/// Riemannian charts: a chart with cometric g^ij is the coefficient field
/// a_ij = g^ij, so no separate backend exists for that case.
struct CoefficientField {
  int dim = 0;
  std::vector<Polynomial> entries;  // row-major dim*dim, a_ij == a_ji
  double ellipticity = 0.0;

  const Polynomial& operator()(int i, int j) const {
    return entries[static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)];
  }
  Polynomial& operator()(int i, int j) {
    return entries[static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)];
  }

  static CoefficientField identity(int dim);
  static CoefficientField diagonal(std::vector<Polynomial> diag, double ellipticity);

  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;
};

/// Divergence-form Euclidean model on a uniform grid: partition = grid cells,
/// m_k = cell volume, Z_k = a(center), y(x_k) = center, and
/// Ly^i = sum_j da_ij/dx_j at the center. Throws if ellipticity fails at a
/// quadrature node (the offending node is reported).
CoordinateModel euclidean_model(const CoefficientField& a, const Box& box, const std::vector<int>& grid);

/// Left-invariant Heisenberg fields in coordinates (xi, eta, zeta):
/// Xf = df/dxi - (eta/2) df/dzeta, Yf = df/deta + (xi/2) df/dzeta.
Polynomial heisenberg_X(const Polynomial& f);
Polynomial heisenberg_Y(const Polynomial& f);

/// The metric matrix Z(q); symmetric, nonnegative definite, rank two.
Eigen::Matrix3d heisenberg_Z(const Eigen::Vector3d& q);

/// Z(q) with polynomial entries, for exact identities.
std::array<std::array<Polynomial, 3>, 3> heisenberg_Z_poly();

/// Grid model over a box in R^3 with Z from heisenberg_Z and Ly^i = 0.
CoordinateModel heisenberg_model(const Box& box, const std::vector<int>& grid);

/// X^2 f + Y^2 f, exact.
Polynomial sublaplacian(const Polynomial& f);

/// sum_ij Z^ij d^2f/dy^i dy^j with polynomial Z entries; the coordinates are
/// harmonic for the sub-Laplacian, so this is the whole generator. Agrees
/// with sublaplacian() as an exact polynomial identity.
Polynomial heisenberg_generator_in_coordinates(const Polynomial& f);

/// Symbolic gradient pairing sum_i dF/dy^i Z^ij for the Heisenberg model;
/// equals Xf, Yf, -(eta/2)Xf + (xi/2)Yf for j = 0,1,2.
Polynomial heisenberg_gradient_pairing(const Polynomial& f, int j);

/// Midpoint-quadrature check of integration by parts:
/// lhs = integral of g grad(f) . a grad(u), rhs = integral of div(a g grad f) u.
/// For u vanishing on the box boundary lhs + rhs -> 0 at rate O(h^2).
struct IbpResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;        // |lhs + rhs|
  bool boundary_vanishing = true;  // recorded, never thrown
};
IbpResult euclidean_ibp_check(const CoefficientField& a, const Polynomial& f, const Polynomial& g,
                              const Polynomial& u, const Box& box, const std::vector<int>& grid);

}  // namespace fec::models
