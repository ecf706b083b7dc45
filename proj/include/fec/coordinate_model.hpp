#pragma once

#include <Eigen/Dense>

#include <vector>

namespace fec {

/// A coordinate sequence at fixed finite resolution: a partition {x_k} with
/// weights m_k, metric matrices Z(x_k), coordinate values y(x_k), and
/// optionally the coordinate Laplacians Ly^i(x_k).
///
/// The gasket, Euclidean and Heisenberg backends all produce this shape and
/// the coordinate calculus consumes it.
struct CoordinateModel {
  int dim = 0;                             // number of coordinates
  std::vector<double> weight;              // m_k > 0
  std::vector<Eigen::MatrixXd> metric;     // Z(x_k), dim x dim, symmetric PSD
  std::vector<Eigen::VectorXd> ycoord;     // y(x_k)
  std::vector<Eigen::VectorXd> laplacian;  // Ly^i(x_k); empty when unavailable

  int size() const { return static_cast<int>(weight.size()); }
  bool has_laplacians() const { return !laplacian.empty(); }

  /// Throws on violated invariants: positive weights, symmetric matrices
  /// with smallest eigenvalue >= -psd_tol, consistent sizes.
  void validate(double psd_tol = 1e-10) const;
};

}  // namespace fec
