#include "fec/coordinate_model.hpp"

#include <stdexcept>

namespace fec {

void CoordinateModel::validate(double psd_tol) const {
  const size_t n = weight.size();
  if (metric.size() != n || ycoord.size() != n)
    throw std::invalid_argument("coordinate model: inconsistent field sizes");
  if (!laplacian.empty() && laplacian.size() != n)
    throw std::invalid_argument("coordinate model: inconsistent laplacian size");
  for (size_t k = 0; k < n; ++k) {
    if (!(weight[k] > 0.0)) throw std::invalid_argument("coordinate model: nonpositive weight");
    const Eigen::MatrixXd& z = metric[k];
    if (z.rows() != dim || z.cols() != dim) throw std::invalid_argument("coordinate model: metric size mismatch");
    if ((z - z.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + z.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("coordinate model: metric not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol)
      throw std::invalid_argument("coordinate model: metric not nonnegative definite");
    if (ycoord[k].size() != dim) throw std::invalid_argument("coordinate model: coordinate size mismatch");
    if (!laplacian.empty() && laplacian[k].size() != dim)
      throw std::invalid_argument("coordinate model: laplacian size mismatch");
  }
}

}  // namespace fec
