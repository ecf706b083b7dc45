#include "fec/calculus.hpp"

#include "fec/gasket.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fec::calculus {

namespace {

std::vector<Polynomial> partials(const Polynomial& f, int dim) {
  std::vector<Polynomial> out;
  out.reserve(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) out.push_back(f.partial(i));
  return out;
}

Eigen::VectorXd eval_gradient(const std::vector<Polynomial>& grad, const Eigen::VectorXd& y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(grad.size()));
  const std::span<const double> point(y.data(), static_cast<size_t>(y.size()));
  for (size_t i = 0; i < grad.size(); ++i) v[static_cast<Eigen::Index>(i)] = grad[i].eval(point);
  return v;
}

void check_element(const CoordinateModel& m, int k) {
  if (k < 0 || k >= m.size()) throw std::invalid_argument("partition element index out of range");
}

}  // namespace

FiberElement differential(const Polynomial& f, const CoordinateModel& m, int k) {
  check_element(m, k);
  return {k, eval_gradient(partials(f, m.dim), m.ycoord[static_cast<size_t>(k)]), 1.0};
}

double fiber_inner(const FiberElement& e1, const FiberElement& e2, const CoordinateModel& m) {
  if (e1.base != e2.base) throw std::invalid_argument("fiber elements live at different base points");
  check_element(m, e1.base);
  return e1.scale * e2.scale * e1.coeff.dot(m.metric[static_cast<size_t>(e1.base)] * e2.coeff);
}

double energy_form(const Polynomial& f, const Polynomial& g, const CoordinateModel& m) {
  const std::vector<Polynomial> gf = partials(f, m.dim);
  const std::vector<Polynomial> gg = partials(g, m.dim);
  double sum = 0.0;
  for (int k = 0; k < m.size(); ++k) {
    const Eigen::VectorXd& y = m.ycoord[static_cast<size_t>(k)];
    sum += m.weight[static_cast<size_t>(k)] *
           eval_gradient(gf, y).dot(m.metric[static_cast<size_t>(k)] * eval_gradient(gg, y));
  }
  return sum;
}

double gradient_pairing(const Polynomial& f, int j, const CoordinateModel& m, int k) {
  check_element(m, k);
  if (j < 0 || j >= m.dim) throw std::invalid_argument("coordinate index out of range");
  const Eigen::VectorXd v = eval_gradient(partials(f, m.dim), m.ycoord[static_cast<size_t>(k)]);
  return (m.metric[static_cast<size_t>(k)] * v)[j];
}

double divergence_functional(const Polynomial& f, const Polynomial& g, const Polynomial& u,
                             const CoordinateModel& m) {
  const std::vector<Polynomial> gf = partials(f, m.dim);
  const std::vector<Polynomial> gu = partials(u, m.dim);
  double sum = 0.0;
  for (int k = 0; k < m.size(); ++k) {
    const Eigen::VectorXd& y = m.ycoord[static_cast<size_t>(k)];
    const std::span<const double> point(y.data(), static_cast<size_t>(y.size()));
    sum += m.weight[static_cast<size_t>(k)] * g.eval(point) *
           eval_gradient(gf, y).dot(m.metric[static_cast<size_t>(k)] * eval_gradient(gu, y));
  }
  return -sum;
}

double generator_apply(const Polynomial& f, const CoordinateModel& m, int k) {
  check_element(m, k);
  if (!m.has_laplacians()) throw std::invalid_argument("generator formula requires coordinate Laplacians Ly^i");
  std::vector<int> vars(static_cast<size_t>(m.dim));
  for (int i = 0; i < m.dim; ++i) vars[static_cast<size_t>(i)] = i;
  const auto hess = f.hessian(vars);
  const Eigen::VectorXd& y = m.ycoord[static_cast<size_t>(k)];
  const std::span<const double> point(y.data(), static_cast<size_t>(y.size()));
  const Eigen::MatrixXd& z = m.metric[static_cast<size_t>(k)];
  double second = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j)
      second += hess[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(point) * z(i, j);
  const Eigen::VectorXd grad = eval_gradient(partials(f, m.dim), y);
  return second + grad.dot(m.laplacian[static_cast<size_t>(k)]);
}

WeakGeneratorResult weak_generator_check(const Polynomial& f, const Polynomial& u, int level) {
  WeakGeneratorResult r;
  r.graph_energy = gasket::graph_energy_of_composite(f, u, level);
  const std::vector<int> vars = {0, 1};
  const auto hess = f.hessian(vars);
  for (const gasket::CellData& cell : gasket::cell_enumerate(level)) {
    const double point[2] = {cell.center[0], cell.center[1]};
    const std::span<const double> sp(point, 2);
    double trace = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        trace += hess[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(sp) * cell.z(i, j);
    r.cell_pairing += trace * u.eval(sp) * cell.nu;
  }
  r.residual = std::abs(r.graph_energy + r.cell_pairing);
  const double scale = std::max(std::abs(r.graph_energy), std::abs(r.cell_pairing));
  r.relative = scale > 0.0 ? r.residual / scale : r.residual;
  return r;
}

double leibniz_check(const Polynomial& f, const Polynomial& g, const CoordinateModel& m, int k) {
  check_element(m, k);
  const Eigen::VectorXd& y = m.ycoord[static_cast<size_t>(k)];
  const std::span<const double> point(y.data(), static_cast<size_t>(y.size()));
  const Eigen::VectorXd product_grad = eval_gradient(partials(f * g, m.dim), y);
  const Eigen::VectorXd expanded =
      f.eval(point) * eval_gradient(partials(g, m.dim), y) + g.eval(point) * eval_gradient(partials(f, m.dim), y);
  return (product_grad - expanded).cwiseAbs().maxCoeff();
}

}  // namespace fec::calculus
