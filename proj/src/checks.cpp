#include "fec/checks.hpp"

#include "fec/builder.hpp"
#include "fec/calculus.hpp"
#include "fec/gasket.hpp"
#include "fec/models.hpp"
#include "fec/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fec::checks {

namespace {

void add_check(CheckReport& report, std::string name, double value, double tolerance,
               nlohmann::json detail = nlohmann::json()) {
  CheckResult r;
  r.name = std::move(name);
  r.value = value;
  r.tolerance = tolerance;
  r.passed = std::isfinite(value) && value <= tolerance;
  r.detail = std::move(detail);
  report.checks.push_back(std::move(r));
}

void add_flag(CheckReport& report, std::string name, bool ok, nlohmann::json detail = nlohmann::json()) {
  CheckResult r;
  r.name = std::move(name);
  r.value = ok ? 0.0 : 1.0;
  r.tolerance = 0.0;
  r.passed = ok;
  r.detail = std::move(detail);
  report.checks.push_back(std::move(r));
}

Polynomial random_polynomial(std::mt19937_64& rng, int vars, int max_degree, int terms) {
  std::uniform_int_distribution<int> coeff_num(-3, 3);
  std::uniform_int_distribution<int> coeff_den(1, 2);
  std::uniform_int_distribution<int> exp_dist(0, max_degree);
  Polynomial p;
  for (int t = 0; t < terms; ++t) {
    Monomial m(static_cast<size_t>(vars), 0);
    int budget = max_degree;
    for (int v = 0; v < vars; ++v) {
      const int e = std::min(budget, exp_dist(rng));
      m[static_cast<size_t>(v)] = static_cast<uint32_t>(e);
      budget -= e;
    }
    int num = coeff_num(rng);
    if (num == 0) num = 1;
    p.add_term(std::move(m), Rational(num, coeff_den(rng)));
  }
  return p;
}

double min_pairwise_gap(const std::vector<Eigen::Vector2d>& pts) {
  std::vector<int> order(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = pts[static_cast<size_t>(a)];
    const auto& pb = pts[static_cast<size_t>(b)];
    return pa[0] != pb[0] ? pa[0] < pb[0] : pa[1] < pb[1];
  });
  double best = 1e300;
  for (size_t i = 0; i < order.size(); ++i) {
    const auto& pi = pts[static_cast<size_t>(order[i])];
    for (size_t j = i + 1; j < order.size(); ++j) {
      const auto& pj = pts[static_cast<size_t>(order[j])];
      if (pj[0] - pi[0] >= best) break;  // sorted sweep cutoff
      best = std::min(best, (pj - pi).norm());
    }
  }
  return best;
}

std::vector<int> grids_doubling(int base, int count) {
  std::vector<int> out;
  for (int i = 0, g = base; i < count; ++i, g *= 2) out.push_back(g);
  return out;
}

}  // namespace

bool CheckReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json entry = {{"check", c.name}, {"passed", c.passed}, {"residual", c.value}, {"tolerance", c.tolerance}};
    if (!c.detail.is_null()) entry["detail"] = c.detail;
    checks_json.push_back(std::move(entry));
  }
  return {{"schema", 1}, {"suite", suite}, {"passed", all_passed()}, {"checks", checks_json}};
}

GraphForm random_connected_graph(std::mt19937_64& rng, int vertex_count) {
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::vector<Edge> edges;
  for (int v = 1; v < vertex_count; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    edges.push_back({parent(rng), v, weight(rng)});
  }
  const int extra = vertex_count / 2;
  for (int i = 0; i < extra && vertex_count >= 2; ++i) {
    std::uniform_int_distribution<int> pick(0, vertex_count - 1);
    const int a = pick(rng);
    int b = pick(rng);
    if (a == b) b = (b + 1) % vertex_count;
    edges.push_back({a, b, weight(rng)});
  }
  VertexFunction mu(vertex_count);
  for (int v = 0; v < vertex_count; ++v) mu[v] = weight(rng);
  return GraphForm(vertex_count, std::move(edges), std::move(mu));
}

VertexFunction random_vertex_function(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  VertexFunction f(n);
  for (int i = 0; i < n; ++i) f[i] = dist(rng);
  return f;
}

CheckReport run_sg_suite(const CheckOptions& opt) {
  CheckReport report;
  report.suite = "sg";
  const int level = std::clamp(opt.level, 1, gasket::kMaxLevel);
  const int deep = std::min(level, 8);
  const double tol_exact = opt.tolerance.value_or(1e-12);
  const double tol_energy = opt.tolerance.value_or(1e-10);
  std::mt19937_64 rng(opt.seed);

  const Polynomial y1 = Polynomial::variable(0);
  const Polynomial y2 = Polynomial::variable(1);

  // Orthonormality of the coordinates at every level.
  {
    double worst_diag = 0.0, worst_cross = 0.0;
    for (int n = 1; n <= level; ++n) {
      worst_diag = std::max(worst_diag, std::abs(gasket::graph_energy_of_composite(y1, y1, n) - 1.0));
      worst_diag = std::max(worst_diag, std::abs(gasket::graph_energy_of_composite(y2, y2, n) - 1.0));
      worst_cross = std::max(worst_cross, std::abs(gasket::graph_energy_of_composite(y1, y2, n)));
    }
    add_check(report, "coordinate_energies_unit", worst_diag, tol_energy, {{"levels", level}});
    add_check(report, "coordinate_energies_orthogonal", worst_cross, tol_energy, {{"levels", level}});
  }

  // Kusuoka measure structure.
  {
    double worst_trace = 0.0;
    for (int n = 0; n <= deep; ++n)
      for (const auto& cell : gasket::cell_enumerate(n))
        worst_trace = std::max(worst_trace, std::abs(cell.z.trace() - 1.0));
    add_check(report, "metric_trace_one", worst_trace, tol_exact, {{"levels", deep}});
    add_check(report, "nu_additivity", gasket::kusuoka_additivity_check(level), tol_exact);
    add_check(report, "gram_additivity", gasket::gram_additivity_residual(level), tol_exact);
    double total = 0.0;
    for (const auto& cell : gasket::cell_enumerate(level)) total += cell.nu;
    add_check(report, "nu_total_mass", std::abs(total - 2.0), tol_exact);
    double worst_level1 = 0.0;
    for (const auto& cell : gasket::cell_enumerate(1)) worst_level1 = std::max(worst_level1, std::abs(cell.nu - 2.0 / 3.0));
    add_check(report, "nu_level1_cells", worst_level1, tol_exact);
  }

  // Level-1 masses recomputed from the discrete energy measure.
  {
    const gasket::VertexSet vs = gasket::coordinates_at_vertices(4);
    const gasket::BoundaryPair b = gasket::coordinate_boundary_values();
    const VertexFunction v1 = vs.harmonic_values(b.b1);
    const VertexFunction v2 = vs.harmonic_values(b.b2);
    double worst = 0.0;
    for (const std::string prefix : {"1", "2", "3"}) {
      const auto [e0, e1] = vs.subtree_edge_range(prefix);
      const double mass = vs.edge_energy(v1, v1, e0, e1) + vs.edge_energy(v2, v2, e0, e1);
      worst = std::max(worst, std::abs(mass - 2.0 / 3.0));
    }
    add_check(report, "nu_level1_graph_oracle", worst, tol_exact);
  }

  // Energy self-similarity: cell energy of a harmonic function from the
  // boundary recursion against the edge-allocated discrete energy measure.
  {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (int word_len : {1, 2, 3}) {
      for (int extra = 2; extra <= 3; ++extra) {
        const gasket::VertexSet vs = gasket::coordinates_at_vertices(word_len + extra);
        for (int trial = 0; trial < 4; ++trial) {
          const Eigen::Vector3d b(dist(rng), dist(rng), dist(rng));
          std::string word;
          for (int i = 0; i < word_len; ++i) word.push_back(static_cast<char>('1' + (rng() % 3)));
          const auto [e0, e1] = vs.subtree_edge_range(word);
          const VertexFunction h = vs.harmonic_values(b);
          worst = std::max(worst, std::abs(gasket::harmonic_cell_energy(b, word) - vs.edge_energy(h, h, e0, e1)));
        }
      }
    }
    add_check(report, "cell_energy_self_similarity", worst, opt.tolerance.value_or(1e-10));
  }

  // The coordinate map separates the vertices and stays inside the triangle
  // spanned by the corner images.
  {
    const gasket::VertexSet vs = gasket::coordinates_at_vertices(deep);
    add_check(report, "vertex_map_injective", min_pairwise_gap(vs.coords) > 0.0 ? 0.0 : 1.0, 0.0,
              {{"min_gap", min_pairwise_gap(vs.coords)}, {"level", deep}});
    double worst_weight = 0.0, worst_sum = 0.0;
    for (const auto& w : vs.weights) {
      worst_weight = std::max(worst_weight, -w.minCoeff());
      worst_sum = std::max(worst_sum, std::abs(w.sum() - 1.0));
    }
    add_check(report, "vertex_map_in_boundary_triangle", std::max(worst_weight, worst_sum), tol_exact);
  }

  // Rank-one tendency of the metric.
  {
    const auto stats = gasket::rank_one_decay(deep, 2000, opt.seed);
    double worst_increase = -1e300;
    for (size_t n = 1; n + 1 < stats.size(); ++n) worst_increase = std::max(worst_increase, stats[n + 1].mean - stats[n].mean);
    nlohmann::json means = nlohmann::json::array();
    for (const auto& s : stats) means.push_back(s.mean);
    add_check(report, "eig_ratio_monotone_decreasing", worst_increase, 0.0, {{"means", means}});
    if (deep >= 8) add_check(report, "eig_ratio_small_at_level8", stats[8].mean, 0.05);
  }

  // Coordinate calculus over the cell model.
  {
    const CoordinateModel model = gasket::coordinate_model(deep);
    model.validate();
    add_check(report, "energy_form_y1_unit", std::abs(calculus::energy_form(y1, y1, model) - 1.0), tol_exact);
    add_check(report, "energy_form_cross_zero", std::abs(calculus::energy_form(y1, y2, model)), tol_exact);

    std::uniform_int_distribution<int> cell_dist(0, model.size() - 1);
    double worst_pairing = 0.0, worst_leibniz = 0.0, most_negative_fiber = 0.0;
    for (int trial = 0; trial < 24; ++trial) {
      const Polynomial f = random_polynomial(rng, 2, 3, 4);
      const Polynomial g = random_polynomial(rng, 2, 3, 4);
      const int k = cell_dist(rng);
      for (int j = 0; j < 2; ++j) {
        const Polynomial yj = Polynomial::variable(j);
        const double via_fiber =
            calculus::fiber_inner(calculus::differential(f, model, k), calculus::differential(yj, model, k), model);
        worst_pairing = std::max(worst_pairing, std::abs(calculus::gradient_pairing(f, j, model, k) - via_fiber));
      }
      worst_leibniz = std::max(worst_leibniz, calculus::leibniz_check(f, g, model, k));
      const calculus::FiberElement df = calculus::differential(f, model, k);
      most_negative_fiber = std::min(most_negative_fiber, calculus::fiber_inner(df, df, model));
    }
    add_check(report, "gradient_pairing_matches_fiber_inner", worst_pairing, tol_exact);
    add_check(report, "leibniz_on_cells", worst_leibniz, tol_exact);
    add_check(report, "fiber_inner_nonnegative", -most_negative_fiber, tol_exact);

    double fiber_total = 0.0;
    const Polynomial f = y1 * y1 + y2;
    for (int k = 0; k < model.size(); ++k) {
      const calculus::FiberElement df = calculus::differential(f, model, k);
      fiber_total += calculus::fiber_inner(df, df, model) * model.weight[static_cast<size_t>(k)];
    }
    add_check(report, "fiber_inner_sums_to_energy", std::abs(fiber_total - calculus::energy_form(f, f, model)),
              tol_exact);
  }

  // Kusuoka-Kigami energy formula: cell sums against graph energies.
  {
    const std::vector<std::pair<std::string, Polynomial>> cases = {
        {"y1^2", y1 * y1}, {"y1*y2", y1 * y2}, {"y1^2+y2^3", y1 * y1 + y2 * y2 * y2}};
    for (const auto& [label, f] : cases) {
      std::vector<double> gaps;
      double graph = 0.0, cells = 0.0;
      for (int n = 4; n <= deep; ++n) {
        graph = gasket::graph_energy_of_composite(f, f, n);
        cells = calculus::energy_form(f, f, gasket::coordinate_model(n));
        gaps.push_back(std::abs(graph - cells) / std::abs(graph));
      }
      double worst_increase = -1e300;
      for (size_t i = 0; i + 1 < gaps.size(); ++i) worst_increase = std::max(worst_increase, gaps[i + 1] - gaps[i]);
      add_check(report, "energy_formula_gap[" + label + "]", gaps.back(), 0.05,
                {{"model", "sg"},
                 {"level_or_grid", deep},
                 {"lhs", graph},
                 {"rhs", cells},
                 {"residual", std::abs(graph - cells)},
                 {"relative", gaps.back()},
                 {"gaps", gaps}});
      add_check(report, "energy_formula_gap_decreasing[" + label + "]", worst_increase, 0.0);
    }
  }

  // Trace-form generator against the graph energy pairing.
  {
    const Polynomial f = y1 * y1;
    const Polynomial u = y1 * gasket::corner_bump();
    std::vector<double> rel;
    calculus::WeakGeneratorResult last;
    for (int n = 4; n <= deep; ++n) {
      last = calculus::weak_generator_check(f, u, n);
      rel.push_back(last.relative);
    }
    double worst_increase = -1e300;
    for (size_t i = 0; i + 1 < rel.size(); ++i) worst_increase = std::max(worst_increase, rel[i + 1] - rel[i]);
    add_check(report, "weak_generator_relative_residual", rel.back(), 0.10,
              {{"model", "sg"},
               {"level_or_grid", deep},
               {"lhs", last.graph_energy},
               {"rhs", last.cell_pairing},
               {"residual", last.residual},
               {"relative", last.relative},
               {"history", rel}});
    add_check(report, "weak_generator_residual_decreasing", worst_increase, 0.0);
  }

  return report;
}

CheckReport run_heisenberg_suite(const CheckOptions& opt) {
  CheckReport report;
  report.suite = "heisenberg";
  std::mt19937_64 rng(opt.seed);
  const Polynomial xi = Polynomial::variable(0);
  const Polynomial eta = Polynomial::variable(1);
  const Polynomial zeta = Polynomial::variable(2);
  const Polynomial one = Polynomial::constant(Rational(1));
  const Polynomial half = Polynomial::constant(Rational(1, 2));

  using models::heisenberg_X;
  using models::heisenberg_Y;

  add_flag(report, "field_action_on_coordinates",
           heisenberg_X(xi) == one && heisenberg_Y(xi) == Polynomial() && heisenberg_X(eta) == Polynomial() &&
               heisenberg_Y(eta) == one && heisenberg_X(zeta) == -(half * eta) && heisenberg_Y(zeta) == half * xi);

  {
    bool ok = heisenberg_X(heisenberg_Y(zeta)) - heisenberg_Y(heisenberg_X(zeta)) == one;
    for (int trial = 0; trial < 32 && ok; ++trial) {
      const Polynomial f = random_polynomial(rng, 3, 4, 5);
      ok = heisenberg_X(heisenberg_Y(f)) - heisenberg_Y(heisenberg_X(f)) == f.partial(2);
    }
    add_flag(report, "commutator_is_zeta_derivative", ok);
  }

  {
    // det Z = 0 as an exact polynomial identity (cofactor expansion).
    const auto z = models::heisenberg_Z_poly();
    const Polynomial det = z[0][0] * (z[1][1] * z[2][2] - z[1][2] * z[2][1]) -
                           z[0][1] * (z[1][0] * z[2][2] - z[1][2] * z[2][0]) +
                           z[0][2] * (z[1][0] * z[2][1] - z[1][1] * z[2][0]);
    add_flag(report, "metric_determinant_vanishes", det == Polynomial());
  }

  {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    double worst_null = 0.0;
    bool rank_two = true;
    for (int trial = 0; trial < 16; ++trial) {
      const Eigen::Vector3d q =
          trial == 0 ? Eigen::Vector3d(1.0, 1.0, 0.0) : Eigen::Vector3d(dist(rng), dist(rng), dist(rng));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(models::heisenberg_Z(q), Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();
      worst_null = std::max(worst_null, std::abs(ev[0]));
      rank_two = rank_two && ev[1] > 1e-8 && ev[2] > 1e-8;
    }
    add_check(report, "metric_null_eigenvalue", worst_null, 1e-12);
    add_flag(report, "metric_rank_two", rank_two);
  }

  {
    bool ok = true;
    for (int trial = 0; trial < 32 && ok; ++trial) {
      const Polynomial f = random_polynomial(rng, 3, 4, 5);
      const Polynomial xf = heisenberg_X(f);
      const Polynomial yf = heisenberg_Y(f);
      ok = models::heisenberg_gradient_pairing(f, 0) == xf && models::heisenberg_gradient_pairing(f, 1) == yf &&
           models::heisenberg_gradient_pairing(f, 2) == -(half * eta) * xf + (half * xi) * yf;
    }
    add_flag(report, "gradient_pairings_exact", ok);
  }

  add_flag(report, "sublaplacian_examples",
           models::sublaplacian(xi * xi + eta * eta) == Polynomial::constant(Rational(4)) &&
               models::sublaplacian(zeta) == Polynomial() &&
               models::sublaplacian(zeta * zeta) == half * (xi * xi + eta * eta) &&
               models::sublaplacian(zeta * zeta) == models::heisenberg_generator_in_coordinates(zeta * zeta));

  {
    bool ok = models::sublaplacian(xi) == Polynomial() && models::sublaplacian(eta) == Polynomial() &&
              models::sublaplacian(zeta) == Polynomial();
    add_flag(report, "coordinates_harmonic", ok);
  }

  {
    bool ok = true;
    for (int trial = 0; trial < 32 && ok; ++trial) {
      const Polynomial f = random_polynomial(rng, 3, 4, 5);
      ok = models::heisenberg_generator_in_coordinates(f) == models::sublaplacian(f);
    }
    add_flag(report, "generator_equals_sublaplacian", ok);
  }

  {
    const models::Box box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
    const CoordinateModel model = models::heisenberg_model(box, {3, 3, 3});
    model.validate();
    double worst_z = 0.0, worst_trace = 0.0, worst_gen = 0.0, worst_fiber = 0.0;
    std::uniform_int_distribution<int> cell_dist(0, model.size() - 1);
    const Polynomial f = random_polynomial(rng, 3, 4, 5);
    const Polynomial lf = models::sublaplacian(f);
    for (int k = 0; k < model.size(); ++k) {
      const Eigen::VectorXd& q = model.ycoord[static_cast<size_t>(k)];
      worst_z = std::max(worst_z,
                         (model.metric[static_cast<size_t>(k)] - models::heisenberg_Z(q)).cwiseAbs().maxCoeff());
      worst_trace = std::max(worst_trace, std::abs(model.metric[static_cast<size_t>(k)].trace() -
                                                   (2.0 + (q[0] * q[0] + q[1] * q[1]) / 4.0)));
      const std::span<const double> sp(q.data(), 3);
      worst_gen = std::max(worst_gen, std::abs(calculus::generator_apply(f, model, k) - lf.eval(sp)));
      const calculus::FiberElement dzeta = calculus::differential(zeta, model, k);
      worst_fiber = std::max(worst_fiber, std::abs(calculus::fiber_inner(dzeta, dzeta, model) -
                                                   (q[0] * q[0] + q[1] * q[1]) / 4.0));
    }
    add_check(report, "model_metric_matches", worst_z, 0.0);
    add_check(report, "model_trace_formula", worst_trace, opt.tolerance.value_or(1e-12));
    add_check(report, "model_generator_matches_sublaplacian", worst_gen, opt.tolerance.value_or(1e-12));
    add_check(report, "model_fiber_inner_dzeta", worst_fiber, opt.tolerance.value_or(1e-12));
  }

  return report;
}

CheckReport run_euclid_suite(const CheckOptions& opt) {
  CheckReport report;
  report.suite = "euclid";
  std::mt19937_64 rng(opt.seed);
  const int grid = std::max(2, opt.grid);
  const double tol_exact = opt.tolerance.value_or(1e-12);

  const Polynomial x1 = Polynomial::variable(0);
  const Polynomial x2 = Polynomial::variable(1);
  const Polynomial one = Polynomial::constant(Rational(1));
  const models::Box square{{0.0, 0.0}, {1.0, 1.0}};
  const Polynomial bump = x1 * (one - x1) * x2 * (one - x2);

  // Identity coefficients: flat metric, vanishing coordinate Laplacians.
  {
    const CoordinateModel model = models::euclidean_model(models::CoefficientField::identity(2), square, {grid, grid});
    model.validate();
    double worst_z = 0.0, worst_ly = 0.0, worst_pairing = 0.0;
    std::uniform_int_distribution<int> cell_dist(0, model.size() - 1);
    const Polynomial f = random_polynomial(rng, 2, 3, 4);
    for (int trial = 0; trial < 16; ++trial) {
      const int k = cell_dist(rng);
      worst_z = std::max(worst_z,
                         (model.metric[static_cast<size_t>(k)] - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
      worst_ly = std::max(worst_ly, model.laplacian[static_cast<size_t>(k)].cwiseAbs().maxCoeff());
      const Eigen::VectorXd& c = model.ycoord[static_cast<size_t>(k)];
      const std::span<const double> sp(c.data(), 2);
      for (int j = 0; j < 2; ++j)
        worst_pairing =
            std::max(worst_pairing, std::abs(calculus::gradient_pairing(f, j, model, k) - f.partial(j).eval(sp)));
    }
    add_check(report, "identity_metric", worst_z, 0.0);
    add_check(report, "identity_coordinate_laplacians", worst_ly, 0.0);
    add_check(report, "identity_gradient_pairing", worst_pairing, tol_exact);
    add_check(report, "identity_energy_of_x1", std::abs(calculus::energy_form(x1, x1, model) - 1.0), tol_exact);
  }

  // Variable coefficients a = diag(1 + x1^2, 1).
  const models::CoefficientField a = models::CoefficientField::diagonal({one + x1 * x1, one}, 1.0);
  {
    const CoordinateModel model = models::euclidean_model(a, square, {grid, grid});
    model.validate();
    double worst_z = 0.0, worst_ly = 0.0, worst_gen = 0.0, worst_leibniz = 0.0;
    const Polynomial f = random_polynomial(rng, 2, 3, 4);
    const Polynomial g = random_polynomial(rng, 2, 3, 4);
    // L f = sum_ij a_ij d2f + sum_i (sum_j da_ij/dx_j) d_i f, exact polynomial.
    Polynomial lf;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) lf += a(i, j) * f.partial(i).partial(j);
      Polynomial div_row;
      for (int j = 0; j < 2; ++j) div_row += a(i, j).partial(j);
      lf += div_row * f.partial(i);
    }
    std::uniform_int_distribution<int> cell_dist(0, model.size() - 1);
    for (int trial = 0; trial < 16; ++trial) {
      const int k = cell_dist(rng);
      const Eigen::VectorXd& c = model.ycoord[static_cast<size_t>(k)];
      const std::span<const double> sp(c.data(), 2);
      Eigen::Matrix2d expected;
      expected << 1.0 + c[0] * c[0], 0.0, 0.0, 1.0;
      worst_z = std::max(worst_z, (model.metric[static_cast<size_t>(k)] - expected).cwiseAbs().maxCoeff());
      const Eigen::Vector2d expected_ly(2.0 * c[0], 0.0);
      worst_ly = std::max(worst_ly,
                          (model.laplacian[static_cast<size_t>(k)] - expected_ly).cwiseAbs().maxCoeff());
      worst_gen = std::max(worst_gen, std::abs(calculus::generator_apply(f, model, k) - lf.eval(sp)));
      worst_leibniz = std::max(worst_leibniz, calculus::leibniz_check(f, g, model, k));
    }
    add_check(report, "variable_metric_matches", worst_z, tol_exact);
    add_check(report, "variable_coordinate_laplacians", worst_ly, tol_exact);
    add_check(report, "variable_generator_formula", worst_gen, tol_exact);
    add_check(report, "leibniz_on_cells", worst_leibniz, tol_exact);
  }

  // Integration by parts: trivial cases, then O(h^2) convergence.
  {
    const auto constant_case = models::euclidean_ibp_check(a, one, one, bump, square, {grid, grid});
    add_check(report, "ibp_constant_f", constant_case.residual, 1e-15);
    const auto symmetric_case =
        models::euclidean_ibp_check(models::CoefficientField::identity(2), x1, one, bump, square, {grid, grid});
    add_check(report, "ibp_flat_symmetric", symmetric_case.residual, tol_exact);

    std::vector<double> residuals, orders;
    nlohmann::json records = nlohmann::json::array();
    bool boundary_ok = true;
    for (int g : grids_doubling(grid, 4)) {
      const auto r = models::euclidean_ibp_check(a, x1, one, bump, square, {g, g});
      residuals.push_back(r.residual);
      boundary_ok = boundary_ok && r.boundary_vanishing;
      records.push_back({{"grid", g}, {"residual", r.residual}});
    }
    for (size_t i = 0; i + 1 < residuals.size(); ++i) orders.push_back(std::log2(residuals[i] / residuals[i + 1]));
    const double min_order = *std::min_element(orders.begin(), orders.end());
    for (size_t i = 0; i < orders.size(); ++i) records[i + 1]["order_estimate"] = orders[i];
    add_flag(report, "ibp_boundary_vanishing", boundary_ok);
    add_check(report, "ibp_quadratic_convergence", 2.0 - min_order, 0.2, {{"records", records}});

    const auto shifted = models::euclidean_ibp_check(a, x1, one, x1, square, {grid, grid});
    add_flag(report, "ibp_flags_nonvanishing_boundary", !shifted.boundary_vanishing);
  }

  // Divergence functional against both quadrature integrals.
  {
    const CoordinateModel model = models::euclidean_model(a, square, {grid, grid});
    const double dv = calculus::divergence_functional(x1, one, bump, model);
    const auto r = models::euclidean_ibp_check(a, x1, one, bump, square, {grid, grid});
    add_check(report, "divergence_functional_is_minus_energy", std::abs(dv + r.lhs), tol_exact,
              {{"lhs", -r.lhs}, {"rhs", dv}});
    add_check(report, "divergence_functional_matches_strong_form", std::abs(dv - r.rhs), r.residual + 1e-12,
              {{"lhs", r.rhs}, {"rhs", dv}});
    add_check(report, "divergence_of_gradient_pairs_energy",
              std::abs(calculus::divergence_functional(x1, one, bump, model) + calculus::energy_form(x1, bump, model)),
              tol_exact);
  }

  return report;
}

CheckReport run_builder_suite(const CheckOptions& opt) {
  CheckReport report;
  report.suite = "builder";
  std::mt19937_64 rng(opt.seed);

  if (opt.graph_file) {
    const GraphForm g = GraphForm::from_file(*opt.graph_file);
    const auto family = [&] {
      if (!opt.random_family) return builder::standard_basis(g.vertex_count());
      std::mt19937_64 family_rng(opt.seed);
      std::vector<VertexFunction> fs;
      for (int i = 0; i < g.vertex_count(); ++i)
        fs.push_back(random_vertex_function(family_rng, g.vertex_count()));
      return fs;
    }();
    const auto built = builder::build(g, family);
    const auto r = builder::verify_bounds(built);
    add_flag(report, "construction_bounds_hold", r.all_ok(), r.to_json());
    const auto built2 = builder::build(g, family);
    add_flag(report, "report_reproducible", builder::verify_bounds(built2).to_json().dump() == r.to_json().dump());
    return report;
  }

  // Hand-solvable two-vertex case.
  {
    const GraphForm g(2, {{0, 1, 1.0}}, VertexFunction::Ones(2));
    VertexFunction f(2);
    f << 1.0, 0.0;
    const auto built = builder::build(g, {f});
    Eigen::Vector2d expected(1.0 / 6.0, 1.0 / 12.0);
    add_check(report, "two_vertex_coordinate", (built.y[0] - expected).cwiseAbs().maxCoeff(), 1e-14);
    add_check(report, "two_vertex_energy", std::abs(g.energy(built.y[0]) - 1.0 / 144.0), 1e-16);
    add_check(report, "two_vertex_measure_total", std::abs(built.m_tilde.sum() - 1.0 / 72.0), 1e-16);
    add_check(report, "two_vertex_metric", std::abs(built.z[0](0, 0) - 0.5), 1e-14);
  }

  // Degenerate constant inputs: the density check must fail and be reported.
  {
    const GraphForm g = random_connected_graph(rng, 6);
    std::vector<VertexFunction> fs(3, VertexFunction::Ones(6));
    const auto built = builder::build(g, fs);
    const auto r = builder::verify_bounds(built);
    const bool density_flagged =
        std::find(r.violations.begin(), r.violations.end(), "density") != r.violations.end();
    add_flag(report, "degenerate_inputs_flagged", density_flagged && r.rank == 1, r.to_json());
    add_check(report, "degenerate_sup_norm", std::abs(built.y[0].cwiseAbs().maxCoeff() - 0.25), 1e-15);
  }

  // Random connected graphs: every bound of the construction.
  {
    std::uniform_int_distribution<int> size_dist(3, 50);
    bool all_ok = true;
    bool rank_full = true;
    double worst_opnorm = 0.0;
    int graphs = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = size_dist(rng);
      const GraphForm g = random_connected_graph(rng, n);
      const auto built = builder::build(g, builder::standard_basis(n));
      const auto r = builder::verify_bounds(built);
      all_ok = all_ok && r.all_ok();
      rank_full = rank_full && r.rank == n;
      for (int rep = 0; rep < 5; ++rep) {
        const int p = static_cast<int>(rng() % static_cast<uint64_t>(n));
        if (built.z[static_cast<size_t>(p)].size() == 0) continue;
        const VertexFunction v = random_vertex_function(rng, n);
        worst_opnorm = std::max(worst_opnorm,
                                (built.z[static_cast<size_t>(p)] * v).norm() / v.norm());
      }
      ++graphs;
    }
    add_flag(report, "random_graphs_bounds_hold", all_ok, {{"graphs", graphs}});
    add_flag(report, "random_graphs_full_rank", rank_full);
    add_check(report, "metric_operator_contraction", worst_opnorm, 1.0 + 1e-12);
  }

  // Finite-scale energy dominance: vanishing m_tilde forces vanishing
  // energy measure for every function.
  {
    bool ok = true;
    for (int trial = 0; trial < 8 && ok; ++trial) {
      const int n = 4 + static_cast<int>(rng() % 8);
      const GraphForm g = random_connected_graph(rng, n);
      const auto built = builder::build(g, builder::standard_basis(n));
      const VertexFunction f = random_vertex_function(rng, n);
      const VertexMeasure gamma = g.energy_measure(f, f);
      for (int p = 0; p < n; ++p)
        if (built.m_tilde[p] == 0.0 && std::abs(gamma[p]) > 0.0) ok = false;
    }
    add_flag(report, "energy_dominance_at_finite_scale", ok);
  }

  return report;
}

CheckReport run_all_suites(const CheckOptions& opt) {
  CheckReport merged;
  merged.suite = "all";
  for (const CheckReport& r :
       {run_sg_suite(opt), run_heisenberg_suite(opt), run_euclid_suite(opt), run_builder_suite(opt)}) {
    for (const CheckResult& c : r.checks) {
      CheckResult copy = c;
      copy.name = r.suite + "." + c.name;
      merged.checks.push_back(std::move(copy));
    }
  }
  return merged;
}

}  // namespace fec::checks
