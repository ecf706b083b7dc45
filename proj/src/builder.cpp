#include "fec/builder.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace fec::builder {

std::vector<VertexFunction> build_coordinates(const GraphForm& g, const std::vector<VertexFunction>& fs) {
  std::vector<VertexFunction> y;
  y.reserve(fs.size());
  for (size_t idx = 0; idx < fs.size(); ++idx) {
    const VertexFunction& f = fs[idx];
    const double f_sup = f.cwiseAbs().maxCoeff();
    if (f_sup == 0.0) throw std::invalid_argument("input function " + std::to_string(idx + 1) + " is zero");
    const VertexFunction resolvent = g.resolvent_g1(f);
    const double denom = resolvent.cwiseAbs().maxCoeff() + f_sup + std::sqrt(g.energy(resolvent));
    const double scale = std::ldexp(1.0, -static_cast<int>(idx + 1));  // 2^{-i}
    y.push_back((scale / denom) * resolvent);
  }
  return y;
}

VertexMeasure build_measure(const GraphForm& g, const std::vector<VertexFunction>& y) {
  VertexMeasure m = VertexMeasure::Zero(g.vertex_count());
  for (size_t idx = 0; idx < y.size(); ++idx) {
    m += std::ldexp(1.0, static_cast<int>(idx + 1)) * g.energy_measure(y[idx], y[idx]);
  }
  return m;
}

std::vector<Eigen::MatrixXd> compute_Z(const GraphForm& g, const std::vector<VertexFunction>& y,
                                       const VertexMeasure& m_tilde, std::vector<int>* undefined) {
  const int n = g.vertex_count();
  const int coords = static_cast<int>(y.size());
  std::vector<Eigen::MatrixXd> numerator(static_cast<size_t>(n), Eigen::MatrixXd::Zero(coords, coords));
  Eigen::VectorXd diff(coords);
  for (const Edge& e : g.edges()) {
    for (int i = 0; i < coords; ++i) diff[i] = y[static_cast<size_t>(i)][e.p] - y[static_cast<size_t>(i)][e.q];
    const Eigen::MatrixXd outer = (0.5 * e.c) * (diff * diff.transpose());
    numerator[static_cast<size_t>(e.p)] += outer;
    numerator[static_cast<size_t>(e.q)] += outer;
  }
  std::vector<Eigen::MatrixXd> z(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) {
    if (m_tilde[p] > 0.0) {
      z[static_cast<size_t>(p)] = numerator[static_cast<size_t>(p)] / m_tilde[p];
    } else {
      // m_tilde(p) = 0 forces Gamma(y^i)({p}) = 0 for every i; Z stays
      // undefined there (the continuum statement is only m-a.e.).
      if (numerator[static_cast<size_t>(p)].cwiseAbs().maxCoeff() > 0.0)
        throw std::logic_error("vanishing measure with nonvanishing energy measure");
      if (undefined) undefined->push_back(p);
    }
  }
  return z;
}

BuiltCoordinates build(const GraphForm& g, const std::vector<VertexFunction>& fs) {
  BuiltCoordinates built{g, build_coordinates(g, fs), {}, {}, {}};
  built.m_tilde = build_measure(g, built.y);
  built.z = compute_Z(g, built.y, built.m_tilde, &built.undefined_vertices);
  return built;
}

std::vector<VertexFunction> standard_basis(int n) {
  std::vector<VertexFunction> fs;
  fs.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    VertexFunction e = VertexFunction::Zero(n);
    e[i] = 1.0;
    fs.push_back(std::move(e));
  }
  return fs;
}

Report verify_bounds(const BuiltCoordinates& built) {
  Report report;
  const int n = built.graph.vertex_count();
  const int coords = static_cast<int>(built.y.size());
  report.vertex_count = n;
  report.coordinate_count = coords;
  report.undefined_vertices = built.undefined_vertices;

  const auto record = [&](const std::string& name, int index, double value, double limit) {
    const bool ok = value <= limit;
    report.bounds.push_back({name, index, value, limit, ok});
    if (!ok) report.violations.push_back(name + "[" + std::to_string(index) + "]");
  };

  double m_limit = 0.0;
  for (int i = 1; i <= coords; ++i) {
    m_limit += std::ldexp(1.0, -i);
    record("coordinate_energy", i, built.graph.energy(built.y[static_cast<size_t>(i - 1)]),
           std::ldexp(1.0, -2 * i) + 1e-15);
    record("coordinate_sup_norm", i, built.y[static_cast<size_t>(i - 1)].cwiseAbs().maxCoeff(),
           std::ldexp(1.0, -i) + 1e-15);
  }
  report.m_total = built.m_tilde.sum();
  report.m_total_limit = m_limit;
  record("measure_total", -1, report.m_total, m_limit + 1e-15);

  for (int p = 0; p < n; ++p) {
    const Eigen::MatrixXd& z = built.z[static_cast<size_t>(p)];
    if (z.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z, Eigen::EigenvaluesOnly);
    record("metric_psd", p, -es.eigenvalues().minCoeff(), 1e-10);
    record("metric_operator_norm", p, es.eigenvalues().maxCoeff(), 1.0 + 1e-10);
    double worst_diag_excess = -1e300;
    for (int i = 1; i <= coords; ++i)
      worst_diag_excess = std::max(worst_diag_excess, z(i - 1, i - 1) - std::ldexp(1.0, -i));
    record("metric_diagonal", p, worst_diag_excess, 1e-12);
  }

  // Rank of the coordinate span. Rows are rescaled to unit sup norm first:
  // the 2^{-i} normalization would otherwise dominate the rank threshold.
  Eigen::MatrixXd stack = Eigen::MatrixXd::Zero(coords, n);
  for (int i = 0; i < coords; ++i) {
    const double sup = built.y[static_cast<size_t>(i)].cwiseAbs().maxCoeff();
    if (sup > 0.0) stack.row(i) = built.y[static_cast<size_t>(i)].transpose() / sup;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(stack);
  lu.setThreshold(1e-10);
  report.rank = static_cast<int>(lu.rank());
  if (report.rank < std::min(coords, n)) report.violations.push_back("density");

  return report;
}

nlohmann::json Report::to_json() const {
  nlohmann::json bounds_json = nlohmann::json::array();
  for (const BoundCheck& b : bounds) {
    bounds_json.push_back({{"name", b.name}, {"index", b.index}, {"value", b.value}, {"limit", b.limit}, {"ok", b.ok}});
  }
  return {
      {"bounds", bounds_json},
      {"rank", rank},
      {"vertex_count", vertex_count},
      {"coordinate_count", coordinate_count},
      {"m_total", m_total},
      {"m_total_limit", m_total_limit},
      {"undefined_vertices", undefined_vertices},
      {"violations", violations},
  };
}

}  // namespace fec::builder
