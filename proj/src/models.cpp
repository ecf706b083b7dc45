#include "fec/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fec::models {

namespace {

// Heisenberg variable indices.
constexpr int kXi = 0, kEta = 1, kZeta = 2;

void check_grid(const Box& box, const std::vector<int>& grid) {
  if (box.lo.size() != box.hi.size() || box.lo.empty()) throw std::invalid_argument("malformed box");
  if (grid.size() != box.lo.size()) throw std::invalid_argument("grid rank must match the box");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 2) throw std::invalid_argument("grid must have at least 2 cells per axis");
    if (!(box.hi[i] > box.lo[i])) throw std::invalid_argument("box must have positive extent");
  }
}

// Row-major sweep over grid cell centers.
template <typename Visitor>
void walk_centers(const Box& box, const std::vector<int>& grid, Visitor&& visit) {
  const int d = box.dim();
  std::vector<double> h(static_cast<size_t>(d));
  double volume = 1.0;
  for (int i = 0; i < d; ++i) {
    h[static_cast<size_t>(i)] = (box.hi[static_cast<size_t>(i)] - box.lo[static_cast<size_t>(i)]) /
                                grid[static_cast<size_t>(i)];
    volume *= h[static_cast<size_t>(i)];
  }
  std::vector<int> idx(static_cast<size_t>(d), 0);
  Eigen::VectorXd center(d);
  for (;;) {
    for (int i = 0; i < d; ++i)
      center[i] = box.lo[static_cast<size_t>(i)] + (idx[static_cast<size_t>(i)] + 0.5) * h[static_cast<size_t>(i)];
    visit(center, volume);
    int axis = d - 1;
    while (axis >= 0 && ++idx[static_cast<size_t>(axis)] == grid[static_cast<size_t>(axis)]) {
      idx[static_cast<size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
}

double eval_at(const Polynomial& p, const Eigen::VectorXd& x) {
  return p.eval(std::span<const double>(x.data(), static_cast<size_t>(x.size())));
}

}  // namespace

CoefficientField CoefficientField::identity(int dim) {
  CoefficientField a;
  a.dim = dim;
  a.ellipticity = 1.0;
  a.entries.assign(static_cast<size_t>(dim) * static_cast<size_t>(dim), Polynomial());
  for (int i = 0; i < dim; ++i) a(i, i) = Polynomial::constant(Rational(1));
  return a;
}

CoefficientField CoefficientField::diagonal(std::vector<Polynomial> diag, double ellipticity) {
  CoefficientField a;
  a.dim = static_cast<int>(diag.size());
  a.ellipticity = ellipticity;
  a.entries.assign(static_cast<size_t>(a.dim) * static_cast<size_t>(a.dim), Polynomial());
  for (int i = 0; i < a.dim; ++i) a(i, i) = std::move(diag[static_cast<size_t>(i)]);
  return a;
}

Eigen::MatrixXd CoefficientField::eval(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = eval_at((*this)(i, j), x);
  return m;
}

CoordinateModel euclidean_model(const CoefficientField& a, const Box& box, const std::vector<int>& grid) {
  if (a.dim != box.dim()) throw std::invalid_argument("coefficient field rank must match the box");
  check_grid(box, grid);
  for (int i = 0; i < a.dim; ++i)
    for (int j = i + 1; j < a.dim; ++j)
      if (a(i, j) != a(j, i)) throw std::invalid_argument("coefficient field must be symmetric");

  // Ly^i = sum_j da_ij/dx_j, exact polynomial differentiation.
  std::vector<Polynomial> divergence(static_cast<size_t>(a.dim));
  for (int i = 0; i < a.dim; ++i) {
    Polynomial d;
    for (int j = 0; j < a.dim; ++j) d += a(i, j).partial(j);
    divergence[static_cast<size_t>(i)] = std::move(d);
  }

  CoordinateModel m;
  m.dim = a.dim;
  walk_centers(box, grid, [&](const Eigen::VectorXd& center, double volume) {
    Eigen::MatrixXd z = a.eval(center);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < a.ellipticity - 1e-12) {
      std::ostringstream os;
      os << "ellipticity violated at node (" << center.transpose() << "): smallest eigenvalue "
         << es.eigenvalues().minCoeff() << " < " << a.ellipticity;
      throw std::invalid_argument(os.str());
    }
    Eigen::VectorXd ly(a.dim);
    for (int i = 0; i < a.dim; ++i) ly[i] = eval_at(divergence[static_cast<size_t>(i)], center);
    m.weight.push_back(volume);
    m.metric.push_back(std::move(z));
    m.ycoord.push_back(center);
    m.laplacian.push_back(std::move(ly));
  });
  return m;
}

Polynomial heisenberg_X(const Polynomial& f) {
  const Polynomial eta_half = Polynomial::variable(kEta) * Rational(1, 2);
  return f.partial(kXi) - eta_half * f.partial(kZeta);
}

Polynomial heisenberg_Y(const Polynomial& f) {
  const Polynomial xi_half = Polynomial::variable(kXi) * Rational(1, 2);
  return f.partial(kEta) + xi_half * f.partial(kZeta);
}

Eigen::Matrix3d heisenberg_Z(const Eigen::Vector3d& q) {
  const double xi = q[0], eta = q[1];
  Eigen::Matrix3d z;
  z << 1.0, 0.0, -eta / 2.0,
       0.0, 1.0, xi / 2.0,
       -eta / 2.0, xi / 2.0, (xi * xi + eta * eta) / 4.0;
  return z;
}

std::array<std::array<Polynomial, 3>, 3> heisenberg_Z_poly() {
  // Gram matrix of the rows (Xy^i, Yy^i): y1 -> (1,0), y2 -> (0,1),
  // y3 -> (-eta/2, xi/2).
  const Polynomial one = Polynomial::constant(Rational(1));
  const Polynomial xi_half = Polynomial::variable(kXi) * Rational(1, 2);
  const Polynomial eta_half = Polynomial::variable(kEta) * Rational(1, 2);
  std::array<std::array<Polynomial, 3>, 3> z;
  z[0][0] = one;
  z[1][1] = one;
  z[0][2] = z[2][0] = -eta_half;
  z[1][2] = z[2][1] = xi_half;
  z[2][2] = xi_half * xi_half + eta_half * eta_half;
  // z[0][1], z[1][0] stay zero
  return z;
}

CoordinateModel heisenberg_model(const Box& box, const std::vector<int>& grid) {
  if (box.dim() != 3) throw std::invalid_argument("the Heisenberg model lives on R^3");
  check_grid(box, grid);
  CoordinateModel m;
  m.dim = 3;
  walk_centers(box, grid, [&](const Eigen::VectorXd& center, double volume) {
    m.weight.push_back(volume);
    m.metric.push_back(heisenberg_Z(center));
    m.ycoord.push_back(center);
    m.laplacian.push_back(Eigen::Vector3d::Zero());  // X^2 y^i + Y^2 y^i = 0
  });
  return m;
}

Polynomial sublaplacian(const Polynomial& f) { return heisenberg_X(heisenberg_X(f)) + heisenberg_Y(heisenberg_Y(f)); }

Polynomial heisenberg_generator_in_coordinates(const Polynomial& f) {
  const auto z = heisenberg_Z_poly();
  Polynomial out;
  for (int i = 0; i < 3; ++i) {
    const Polynomial fi = f.partial(i);
    for (int j = 0; j < 3; ++j) out += z[static_cast<size_t>(i)][static_cast<size_t>(j)] * fi.partial(j);
  }
  return out;
}

Polynomial heisenberg_gradient_pairing(const Polynomial& f, int j) {
  if (j < 0 || j > 2) throw std::invalid_argument("coordinate index must be 0, 1 or 2");
  const auto z = heisenberg_Z_poly();
  Polynomial out;
  for (int i = 0; i < 3; ++i) out += f.partial(i) * z[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return out;
}

IbpResult euclidean_ibp_check(const CoefficientField& a, const Polynomial& f, const Polynomial& g,
                              const Polynomial& u, const Box& box, const std::vector<int>& grid) {
  if (a.dim != box.dim()) throw std::invalid_argument("coefficient field rank must match the box");
  check_grid(box, grid);
  const int d = a.dim;

  // integrand1 = g sum_ij df/dx_i a_ij du/dx_j
  Polynomial integrand1;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) integrand1 += f.partial(i) * a(i, j) * u.partial(j);
  integrand1 *= g;

  // integrand2 = div(a g grad f) u = sum_j d/dx_j (sum_i a_ji g df/dx_i) u
  Polynomial divergence;
  for (int j = 0; j < d; ++j) {
    Polynomial component;
    for (int i = 0; i < d; ++i) component += a(j, i) * g * f.partial(i);
    divergence += component.partial(j);
  }
  const Polynomial integrand2 = divergence * u;

  IbpResult result;
  walk_centers(box, grid, [&](const Eigen::VectorXd& center, double volume) {
    result.lhs += volume * eval_at(integrand1, center);
    result.rhs += volume * eval_at(integrand2, center);
  });
  result.residual = std::abs(result.lhs + result.rhs);

  // Sample |u| on every face of the box; a non-vanishing boundary is recorded
  // in the result, not thrown.
  double boundary_max = 0.0;
  double interior_scale = 0.0;
  constexpr int kFaceSamples = 7;
  std::vector<double> point(static_cast<size_t>(d));
  std::vector<int> idx(static_cast<size_t>(d), 0);
  for (int axis = 0; axis < d; ++axis) {
    for (int side = 0; side < 2; ++side) {
      std::fill(idx.begin(), idx.end(), 0);
      for (;;) {
        for (int i = 0; i < d; ++i) {
          if (i == axis) {
            point[static_cast<size_t>(i)] = side == 0 ? box.lo[static_cast<size_t>(i)] : box.hi[static_cast<size_t>(i)];
          } else {
            const double t = (idx[static_cast<size_t>(i)] + 0.5) / kFaceSamples;
            point[static_cast<size_t>(i)] =
                box.lo[static_cast<size_t>(i)] + t * (box.hi[static_cast<size_t>(i)] - box.lo[static_cast<size_t>(i)]);
          }
        }
        boundary_max = std::max(boundary_max, std::abs(u.eval(point)));
        std::vector<double> mid = point;
        mid[static_cast<size_t>(axis)] =
            0.5 * (box.lo[static_cast<size_t>(axis)] + box.hi[static_cast<size_t>(axis)]);
        interior_scale = std::max(interior_scale, std::abs(u.eval(mid)));
        int i = d - 1;
        while (i >= 0) {
          if (i == axis) {
            --i;
            continue;
          }
          if (++idx[static_cast<size_t>(i)] < kFaceSamples) break;
          idx[static_cast<size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
    }
  }
  result.boundary_vanishing = boundary_max <= 1e-9 * (1.0 + interior_scale);
  return result;
}

}  // namespace fec::models
