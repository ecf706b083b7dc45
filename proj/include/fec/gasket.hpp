#pragma once

#include "fec/coordinate_model.hpp"
#include "fec/graph_form.hpp"
#include "fec/polynomial.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fec::gasket {

/// Deepest supported subdivision level. Cell words are strings over {1,2,3}
/// of length <= kMaxLevel; the empty word is the whole gasket.
inline constexpr int kMaxLevel = 10;

/// Triangle energy Q(a,b,c) = (a-b)^2 + (b-c)^2 + (a-c)^2 of boundary values,
/// and its polarization B(u,v).
double tri_energy(const Eigen::Vector3d& b);
double tri_energy(const Eigen::Vector3d& u, const Eigen::Vector3d& v);

/// Harmonic extension matrices A1, A2, A3: A_i maps boundary values of a
/// harmonic function on a cell to boundary values on child cell i (the
/// 1/5-2/5 rule). Rows are convex weights, and the extension preserves
/// renormalized energy: (5/3) sum_i Q(A_i b) = Q(b).
std::array<Eigen::Matrix3d, 3> extension_matrices();

/// Boundary values of the two harmonic coordinates at the corners p1,p2,p3.
struct BoundaryPair {
  Eigen::Vector3d b1;  // y1 at (p1,p2,p3)
  Eigen::Vector3d b2;  // y2 at (p1,p2,p3)
};

/// The Q-orthonormal pair used throughout: b1 = (-1,1,0)/sqrt(6),
/// b2 = (-1,-1,2)/sqrt(18), so Q(b1) = Q(b2) = 1 and B(b1,b2) = 0.
/// Any other Q-orthonormal pair differs by an orthogonal transform and
/// conjugates Z; output files record this choice.
BoundaryPair coordinate_boundary_values();

/// Per-cell data: boundary values of (y1,y2), energy Gram matrix, Kusuoka
/// mass nu = tr G, and the normalized metric Z = G/nu (trace one).
struct CellData {
  std::string word;        // address over {1,2,3}; empty = whole gasket
  BoundaryPair boundary;
  Eigen::Matrix2d gram;    // G_w, symmetric nonnegative definite
  double nu = 0.0;         // nu(K_w) = tr G_w
  Eigen::Matrix2d z;       // G_w / nu
  Eigen::Vector2d center;  // centroid of the three boundary coordinate pairs

  double eig_ratio() const;  // lambda_min / lambda_max of z
};

/// All 3^level cells at the given level, in lexicographic word order.
/// Throws when level is outside [0, kMaxLevel].
std::vector<CellData> cell_enumerate(int level);

/// max over words |w| < level of |nu(K_w) - sum_i nu(K_wi)|.
double kusuoka_additivity_check(int level);

/// max over words |w| < level of the entrywise residual |G_w - sum_i G_wi|.
double gram_additivity_residual(int level);

/// The level-n vertex set V_n with the data needed to evaluate any harmonic
/// function on it. Vertices are deduplicated across cells (exact integer
/// barycentric addresses) and appear in first-visit order of the
/// lexicographic cell sweep; each vertex stores the convex weights w(v) with
/// h(v) = w(v)^T b for a harmonic function with boundary values b. Edges
/// carry conductance (5/3)^level and are emitted three per cell in
/// lexicographic cell order, so the edges of the subtree below a word form a
/// contiguous range.
struct VertexSet {
  int level = 0;
  std::vector<Eigen::Vector3d> weights;
  std::vector<Eigen::Vector2d> coords;  // (y1(v), y2(v))
  std::vector<Edge> edges;

  int vertex_count() const { return static_cast<int>(weights.size()); }

  /// Values of the harmonic function with boundary data b at every vertex.
  VertexFunction harmonic_values(const Eigen::Vector3d& b) const;

  /// Values of F(y1,y2) at every vertex.
  VertexFunction composite_values(const Polynomial& f) const;

  /// Half-open edge index range of the cells descending from `prefix`.
  std::pair<std::ptrdiff_t, std::ptrdiff_t> subtree_edge_range(const std::string& prefix) const;

  /// sum of c (f(p)-f(q))(g(p)-g(q)) over the edge range [e0, e1).
  double edge_energy(const VertexFunction& f, const VertexFunction& g, std::ptrdiff_t e0,
                     std::ptrdiff_t e1) const;

  /// The same vertex set as a weighted-graph Dirichlet form (mu = 1).
  GraphForm to_graph() const;
};

/// Harmonic coordinates on V_level; |V_n| = (3^(n+1) + 3)/2. Throws if two
/// cells disagree about a shared vertex beyond 1e-12.
VertexSet coordinates_at_vertices(int level);

/// Level-n graph energy E_n(F(y), G(y)) = (5/3)^n sum_edges Df Dg.
double graph_energy_of_composite(const Polynomial& f, const Polynomial& g, int level);

/// Per-level eigenvalue-ratio statistics of Z_w. The mean is nu-weighted
/// (the measure behind the a.e. rank-one degeneracy; the unweighted mean is
/// dominated by measure-starved cells and does not decay monotonically).
/// Levels up to min(level, exhaustive_max) sweep every cell; deeper levels
/// estimate the same mean from `sample_count` words drawn by nu-weighted
/// descent (child i picked with probability nu(K_wi)/nu(K_w)). The max is
/// over the swept or sampled cells; it does not decay (rank-one fails on a
/// nu-null set).
struct LevelRatioStats {
  int level = 0;
  double mean = 0.0;
  double max = 0.0;
  long cells = 0;
  bool exhaustive = true;
};
std::vector<LevelRatioStats> rank_one_decay(int level, int sample_count, uint64_t seed = 12345,
                                            int exhaustive_max = 8);

/// The level-n cells as a coordinate model: m = nu(K_w), Z = Z_w,
/// y = centroid, Ly^i = 0 (the coordinates are harmonic).
CoordinateModel coordinate_model(int level);

/// Quadratic in y2 vanishing at the images of all three gasket corners;
/// multiplying by it produces boundary-vanishing test functions. The roots
/// are stored as exact dyadic rationals, so the values at the corner images
/// vanish to machine precision only. Even under the p1/p2 mirror symmetry
/// (y1 -> -y1), so products with odd functions pair to zero.
Polynomial corner_vanishing_quadratic();

/// Asymmetric bump: the product of the two affine forms whose zero lines
/// carry the corner images p1,p2 and p1,p3. Vanishes at the three corner
/// images, keeps one sign on the interior of the coordinate image, and
/// breaks the mirror symmetry, so generator pairings against even functions
/// do not degenerate to 0 = 0.
Polynomial corner_bump();

/// Energy of a harmonic function with root boundary values b inside cell w,
/// computed through the boundary recursion: (5/3)^{|w|} Q(b_w).
double harmonic_cell_energy(const Eigen::Vector3d& b, const std::string& word);

/// cells.csv: word,level,nu,G11,G12,G22,Z11,Z12,Z22,eig_ratio,y1_center,
/// y2_center, one row per level-n cell in lexicographic order. A leading
/// comment records the boundary-value convention.
void write_cells_csv(std::ostream& out, int level);

/// Point cloud of y(V_n) in a unit-square viewport, dot radius scaled to the
/// level.
void write_gasket_svg(std::ostream& out, int level);

}  // namespace fec::gasket
