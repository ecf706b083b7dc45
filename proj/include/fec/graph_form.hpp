#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace fec {

using VertexFunction = Eigen::VectorXd;
// Signed measure on the vertex set; mutual energy measures live here.
using VertexMeasure = Eigen::VectorXd;

struct Edge {
  int p = 0;
  int q = 0;
  double c = 0.0;  // conductance, >= 0
};

/// Dirichlet form of a finite weighted graph.
///
/// The energy is E(f,g) = 1/2 sum_{p,q} c_pq (f(p)-f(q))(g(p)-g(q)), i.e. one
/// term c (f(p)-f(q))(g(p)-g(q)) per undirected edge. The vertex measure mu
/// enters the generator Lf(p) = (1/mu(p)) sum_q c_pq (f(q)-f(p)) and the
/// resolvent. Everything here is computed exactly (dense direct solves); this
/// class is the brute-force oracle for the continuum identities elsewhere.
class GraphForm {
 public:
  GraphForm(int vertex_count, std::vector<Edge> edges, VertexFunction mu);

  /// Line-oriented text format: `v <id> <mu>`, `e <id1> <id2> <conductance>`,
  /// comments starting with `#`. Vertex ids map to dense indices in order of
  /// their `v` lines.
  static GraphForm parse(std::istream& in);
  static GraphForm from_file(const std::string& path);

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const VertexFunction& measure() const { return mu_; }

  double energy(const VertexFunction& f, const VertexFunction& g) const;
  double energy(const VertexFunction& f) const { return energy(f, f); }

  /// Energy measure Gamma(f,g)({p}) = 1/2 sum_q c_pq (f(p)-f(q))(g(p)-g(q)).
  /// Total mass equals energy(f,g).
  VertexMeasure energy_measure(const VertexFunction& f, const VertexFunction& g) const;

  /// | sum_p phi(p) Gamma(f,g)({p}) - 1/2 (E(f,g phi) + E(g, f phi) - E(fg, phi)) |.
  /// Zero up to rounding: the defining identity of the energy measure is exact
  /// on finite graphs when products are formed pointwise at vertices.
  double energy_measure_identity_residual(const VertexFunction& f, const VertexFunction& g,
                                          const VertexFunction& phi) const;

  /// Lf; satisfies E(f,g) = -sum_p Lf(p) g(p) mu(p).
  VertexFunction generator(const VertexFunction& f) const;

  /// u = (I - L)^{-1} f. The system is strictly diagonally dominant, so the
  /// dense solve cannot fail for valid inputs.
  VertexFunction resolvent_g1(const VertexFunction& f) const;

  /// Energy minimizer among functions with the given boundary values;
  /// harmonic (Lf = 0) at interior vertices. Throws if some connected
  /// component misses the boundary.
  VertexFunction harmonic_solve(const std::vector<int>& boundary,
                                const std::vector<double>& values) const;

 private:
  void check_function(const VertexFunction& f) const;

  int n_ = 0;
  std::vector<Edge> edges_;
  VertexFunction mu_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
};

}  // namespace fec
