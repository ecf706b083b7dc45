#pragma once

#include "fec/graph_form.hpp"

#include <Eigen/Dense>

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace fec::builder {

/// Coordinates, energy dominant measure and per-vertex metric built from
/// resolvent functions on a finite-state form.
struct BuiltCoordinates {
  GraphForm graph;
  std::vector<VertexFunction> y;          // y^i, i = 1..N in order
  VertexMeasure m_tilde;                  // sum_i 2^i Gamma(y^i)
  std::vector<Eigen::MatrixXd> z;         // Z(p), N x N; empty matrix where m_tilde(p) = 0
  std::vector<int> undefined_vertices;    // vertices with m_tilde(p) = 0
};

/// y^i = 2^{-i} G1 f_i / (||G1 f_i||_sup + ||f_i||_sup + E(G1 f_i)^{1/2}),
/// i = 1..N. Guarantees ||y^i||_sup <= 2^{-i} and E(y^i) <= 2^{-2i}.
/// Throws on a zero input function. The Feller hypothesis behind the
/// construction is automatic on a finite state space and is not checked.
std::vector<VertexFunction> build_coordinates(const GraphForm& g, const std::vector<VertexFunction>& fs);

/// m_tilde = sum_i 2^i Gamma(y^i); total mass <= sum_i 2^{-i} < 1.
VertexMeasure build_measure(const GraphForm& g, const std::vector<VertexFunction>& y);

/// Z^{ij}(p) = Gamma(y^i, y^j)({p}) / m_tilde({p}), accumulated per edge so
/// each Z(p) is a Gram matrix (symmetric PSD by construction). Vertices with
/// m_tilde(p) = 0 get an empty matrix and are appended to `undefined`.
std::vector<Eigen::MatrixXd> compute_Z(const GraphForm& g, const std::vector<VertexFunction>& y,
                                       const VertexMeasure& m_tilde, std::vector<int>* undefined = nullptr);

BuiltCoordinates build(const GraphForm& g, const std::vector<VertexFunction>& fs);

/// The standard basis e_1..e_n as input family; with it the built
/// coordinates span the whole n-dimensional function space.
std::vector<VertexFunction> standard_basis(int n);

struct BoundCheck {
  std::string name;
  int index = 0;      // coordinate or vertex index, -1 when global
  double value = 0.0;
  double limit = 0.0;
  bool ok = true;
};

/// Everything the construction promises, checked: per-coordinate energy
/// bounds, total mass bound, per-vertex PSD / diagonal / operator-norm
/// bounds, and the rank of the coordinate span (the finite-dimensional
/// density statement). Failed checks land in `violations`; nothing throws.
struct Report {
  std::vector<BoundCheck> bounds;
  double m_total = 0.0;
  double m_total_limit = 0.0;
  int rank = 0;
  int vertex_count = 0;
  int coordinate_count = 0;
  std::vector<int> undefined_vertices;
  std::vector<std::string> violations;

  bool all_ok() const { return violations.empty(); }
  nlohmann::json to_json() const;  // {bounds: [...], rank, m_total, violations: []}
};

Report verify_bounds(const BuiltCoordinates& built);

}  // namespace fec::builder
