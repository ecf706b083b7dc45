#pragma once

#include "fec/coordinate_model.hpp"
#include "fec/polynomial.hpp"

#include <Eigen/Dense>

namespace fec::calculus {

/// An element of the fiber at partition element `base`: the coefficient
/// vector of sum_i v_i (dy^i)_x, optionally scaled by a function value g(x)
/// for simple tensors. For f = F(y) the differential has v = grad F(y(x)).
struct FiberElement {
  int base = 0;
  Eigen::VectorXd coeff;
  double scale = 1.0;
};

/// (d(F(y)))_{x_k} as a fiber element: coefficients grad F(y(x_k)).
FiberElement differential(const Polynomial& f, const CoordinateModel& m, int k);

/// Fiber inner product g1 g2 <v1, Z(x) v2>; both elements must sit at the
/// same base point.
double fiber_inner(const FiberElement& e1, const FiberElement& e2, const CoordinateModel& m);

/// E(f,g) = sum_k <grad F(y_k), Z_k grad G(y_k)> m_k, the cell-sum form of
/// the energy in coordinates.
double energy_form(const Polynomial& f, const Polynomial& g, const CoordinateModel& m);

/// <(df)_x, (dy^j)_x> = (Z_k grad F(y_k))_j.
double gradient_pairing(const Polynomial& f, int j, const CoordinateModel& m, int k);

/// Distributional divergence pairing:
/// -sum_k G(y_k) <grad F(y_k), Z_k grad U(y_k)> m_k.
double divergence_functional(const Polynomial& f, const Polynomial& g, const Polynomial& u,
                             const CoordinateModel& m);

/// Generator in coordinates at element k:
/// sum_ij d2F/dy^i dy^j (y_k) Z_k^ij + sum_i dF/dy^i (y_k) Ly^i(x_k).
/// Requires the model to carry coordinate Laplacians.
double generator_apply(const Polynomial& f, const CoordinateModel& m, int k);

/// Level-n comparison of the graph energy E_n(F(y), U(y)) against the
/// cell-sum pairing sum_w tr(Z_w D2F(y_w)) U(y_w) nu(K_w) on the gasket.
/// For U vanishing at the gasket corners lhs + rhs -> 0; there is no exact
/// identity at any finite level, so this is a convergence experiment.
struct WeakGeneratorResult {
  double graph_energy = 0.0;  // E_n(F(y), U(y))
  double cell_pairing = 0.0;  // sum_w tr(Z_w D2F) U nu
  double residual = 0.0;      // |graph_energy + cell_pairing|
  double relative = 0.0;      // residual / max(|graph_energy|, |cell_pairing|)
};
WeakGeneratorResult weak_generator_check(const Polynomial& f, const Polynomial& u, int level);

/// Derivation property at element k: coefficient vector of d(FG) against
/// F(y_k) grad G(y_k) + G(y_k) grad F(y_k); returns the max-norm residual.
double leibniz_check(const Polynomial& f, const Polynomial& g, const CoordinateModel& m, int k);

}  // namespace fec::calculus
