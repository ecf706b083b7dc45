// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include "fec/builder.hpp"
#include "fec/calculus.hpp"
#include "fec/checks.hpp"
#include "fec/gasket.hpp"
#include "fec/graph_form.hpp"
#include "fec/models.hpp"
#include "fec/polynomial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace fec;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& info) {
  std::printf("[%s] criterion %2d: %-34s %s\n", ok ? "PASS" : "FAIL", number, name.c_str(), info.c_str());
  if (!ok) ++failures;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

const Polynomial Y1 = Polynomial::variable(0);
const Polynomial Y2 = Polynomial::variable(1);

void criterion_orthonormality() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    worst = std::max(worst, std::abs(gasket::graph_energy_of_composite(Y1, Y1, n) - 1.0));
    worst = std::max(worst, std::abs(gasket::graph_energy_of_composite(Y2, Y2, n) - 1.0));
    worst = std::max(worst, std::abs(gasket::graph_energy_of_composite(Y1, Y2, n)));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, "coordinate orthonormality", worst <= 1e-10 && seconds < 10.0,
         "max deviation " + fmt(worst) + " over n<=10 in " + fmt(seconds) + "s");
}

void criterion_kusuoka_structure() {
  double worst_trace = 0.0;
  for (int n = 0; n <= 8; ++n)
    for (const auto& cell : gasket::cell_enumerate(n))
      worst_trace = std::max(worst_trace, std::abs(cell.z.trace() - 1.0));

  const double additivity = gasket::kusuoka_additivity_check(8);

  double total = 0.0;
  for (const auto& cell : gasket::cell_enumerate(8)) total += cell.nu;
  const double total_residual = std::abs(total - 2.0);

  double level1 = 0.0;
  for (const auto& cell : gasket::cell_enumerate(1)) level1 = std::max(level1, std::abs(cell.nu - 2.0 / 3.0));

  // cross-check of the level-1 masses through the discrete energy measure
  const gasket::VertexSet vs = gasket::coordinates_at_vertices(4);
  const gasket::BoundaryPair b = gasket::coordinate_boundary_values();
  const VertexFunction v1 = vs.harmonic_values(b.b1);
  const VertexFunction v2 = vs.harmonic_values(b.b2);
  double oracle = 0.0;
  for (const std::string prefix : {"1", "2", "3"}) {
    const auto [e0, e1] = vs.subtree_edge_range(prefix);
    const double mass = vs.edge_energy(v1, v1, e0, e1) + vs.edge_energy(v2, v2, e0, e1);
    oracle = std::max(oracle, std::abs(mass - 2.0 / 3.0));
  }

  const double worst = std::max({worst_trace, additivity, total_residual, level1, oracle});
  report(2, "Kusuoka measure structure", worst <= 1e-12,
         "trace " + fmt(worst_trace) + ", additivity " + fmt(additivity) + ", total " + fmt(total_residual) +
             ", level-1 " + fmt(std::max(level1, oracle)));
}

void criterion_rank_one() {
  const auto stats = gasket::rank_one_decay(8, 1000, 12345);
  bool monotone = true;
  for (size_t n = 1; n + 1 < stats.size(); ++n) monotone = monotone && stats[n + 1].mean < stats[n].mean;
  const double final_mean = stats[8].mean;
  report(3, "rank-one tendency of Z", monotone && final_mean < 0.05,
         "mean ratio at level 8 = " + fmt(final_mean) + (monotone ? ", decreasing 1..8" : ", NOT monotone"));
}

void criterion_energy_formula() {
  const std::vector<std::pair<std::string, Polynomial>> cases = {
      {"y1^2", Y1 * Y1}, {"y1*y2", Y1 * Y2}, {"y1^2+y2^3", Y1 * Y1 + Y2 * Y2 * Y2}};
  bool ok = true;
  std::string info;
  for (const auto& [label, f] : cases) {
    double previous = 1e300, last = 0.0;
    bool decreasing = true;
    for (int n = 4; n <= 8; ++n) {
      const double graph = gasket::graph_energy_of_composite(f, f, n);
      const double cells = calculus::energy_form(f, f, gasket::coordinate_model(n));
      last = std::abs(graph - cells) / std::abs(graph);
      decreasing = decreasing && last < previous;
      previous = last;
    }
    ok = ok && decreasing && last <= 0.05;
    info += label + ": " + fmt(last) + (decreasing ? " " : " NOT-DECREASING ");
  }
  report(4, "energy formula cell sums", ok, info);
}

void criterion_weak_generator() {
  const Polynomial f = Y1 * Y1;
  const Polynomial u = Y1 * gasket::corner_bump();
  double previous = 1e300, last = 0.0;
  bool decreasing = true;
  for (int n = 4; n <= 8; ++n) {
    last = calculus::weak_generator_check(f, u, n).relative;
    decreasing = decreasing && last < previous;
    previous = last;
  }
  report(5, "trace-form generator pairing", decreasing && last <= 0.10,
         "relative residual at level 8 = " + fmt(last) + (decreasing ? ", decreasing 4..8" : ", NOT monotone"));
}

void criterion_discrete_identities() {
  std::mt19937_64 rng(2026);
  double worst_measure = 0.0, worst_carre = 0.0, worst_markov = 0.0, worst_adjoint = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const GraphForm g = checks::random_connected_graph(rng, n);
    const VertexFunction f = checks::random_vertex_function(rng, n);
    const VertexFunction h = checks::random_vertex_function(rng, n);
    const VertexFunction phi = checks::random_vertex_function(rng, n);

    worst_measure = std::max(worst_measure, g.energy_measure_identity_residual(f, h, phi));

    const VertexFunction carre_lhs = g.energy_measure(f, h).cwiseQuotient(g.measure());
    const VertexFunction carre_rhs =
        0.5 * (g.generator(f.cwiseProduct(h)) - f.cwiseProduct(g.generator(h)) - h.cwiseProduct(g.generator(f)));
    worst_carre = std::max(worst_carre, (carre_lhs - carre_rhs).cwiseAbs().maxCoeff());

    worst_markov = std::max(worst_markov, g.energy(f.cwiseMax(0.0).cwiseMin(1.0)) - g.energy(f));

    const double pairing = -(g.generator(f).cwiseProduct(h).cwiseProduct(g.measure())).sum();
    worst_adjoint = std::max(worst_adjoint, std::abs(g.energy(f, h) - pairing));
  }
  const bool ok = worst_measure <= 1e-12 && worst_carre <= 1e-12 && worst_markov <= 1e-12 && worst_adjoint <= 1e-12;
  report(6, "exact discrete identities", ok,
         "measure " + fmt(worst_measure) + ", carre " + fmt(worst_carre) + ", markov " + fmt(worst_markov) +
             ", adjoint " + fmt(worst_adjoint) + " (200 trials)");
}

void criterion_heisenberg() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coeff(-3, 3);
  const Polynomial xi = Polynomial::variable(0);
  const Polynomial eta = Polynomial::variable(1);
  const Polynomial zeta = Polynomial::variable(2);

  const auto z = models::heisenberg_Z_poly();
  const Polynomial det = z[0][0] * (z[1][1] * z[2][2] - z[1][2] * z[2][1]) -
                         z[0][1] * (z[1][0] * z[2][2] - z[1][2] * z[2][0]) +
                         z[0][2] * (z[1][0] * z[2][1] - z[1][1] * z[2][0]);
  bool ok = det.is_zero();

  ok = ok && (models::heisenberg_X(models::heisenberg_Y(zeta)) - models::heisenberg_Y(models::heisenberg_X(zeta)) ==
              Polynomial::constant(Rational(1)));

  for (int trial = 0; trial < 100 && ok; ++trial) {
    Polynomial f;
    for (int t = 0; t < 5; ++t) {
      Monomial m(3, 0);
      int budget = 4;
      for (int v = 0; v < 3; ++v) {
        const int e = std::min<int>(budget, static_cast<int>(rng() % 3));
        m[static_cast<size_t>(v)] = static_cast<uint32_t>(e);
        budget -= e;
      }
      int c = coeff(rng);
      if (c == 0) c = 1;
      f.add_term(std::move(m), Rational(c));
    }
    const Polynomial xf = models::heisenberg_X(f);
    const Polynomial yf = models::heisenberg_Y(f);
    ok = ok && models::heisenberg_gradient_pairing(f, 0) == xf;
    ok = ok && models::heisenberg_gradient_pairing(f, 1) == yf;
    ok = ok && models::heisenberg_gradient_pairing(f, 2) ==
                   Rational(-1, 2) * eta * xf + Rational(1, 2) * xi * yf;
    ok = ok && models::heisenberg_generator_in_coordinates(f) == models::sublaplacian(f);
  }
  report(7, "Heisenberg exactness", ok, ok ? "det, pairings, generator, commutator all exact" : "identity broken");
}

void criterion_euclidean_ibp() {
  const Polynomial x1 = Polynomial::variable(0);
  const Polynomial x2 = Polynomial::variable(1);
  const Polynomial one = Polynomial::constant(Rational(1));
  const models::CoefficientField a = models::CoefficientField::diagonal({one + x1 * x1, one}, 1.0);
  const models::Box square{{0.0, 0.0}, {1.0, 1.0}};
  const Polynomial bump = x1 * (one - x1) * x2 * (one - x2);

  std::vector<double> residuals;
  for (int grid : {8, 16, 32, 64})
    residuals.push_back(models::euclidean_ibp_check(a, x1, one, bump, square, {grid, grid}).residual);
  double min_order = 1e300;
  for (size_t i = 0; i + 1 < residuals.size(); ++i)
    min_order = std::min(min_order, std::log2(residuals[i] / residuals[i + 1]));
  report(8, "Euclidean divergence O(h^2)", min_order >= 1.8,
         "observed order >= " + fmt(min_order) + " over grids 8..64");
}

void criterion_builder() {
  // hand-computed two-vertex case
  const GraphForm two(2, {{0, 1, 1.0}}, VertexFunction::Ones(2));
  VertexFunction f(2);
  f << 1.0, 0.0;
  const auto built2 = builder::build(two, {f});
  bool ok = std::abs(built2.y[0][0] - 1.0 / 6.0) <= 1e-15 && std::abs(built2.y[0][1] - 1.0 / 12.0) <= 1e-15 &&
            std::abs(two.energy(built2.y[0]) - 1.0 / 144.0) <= 1e-16;

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size_dist(2, 50);
  int graphs = 0;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    const int n = size_dist(rng);
    const GraphForm g = checks::random_connected_graph(rng, n);
    const auto built = builder::build(g, builder::standard_basis(n));
    const builder::Report r = builder::verify_bounds(built);
    ok = ok && r.all_ok() && r.rank == n;
    for (int rep = 0; rep < 100 && ok; ++rep) {
      const int p = static_cast<int>(rng() % static_cast<uint64_t>(n));
      if (built.z[static_cast<size_t>(p)].size() == 0) continue;
      const VertexFunction v = checks::random_vertex_function(rng, n);
      ok = (built.z[static_cast<size_t>(p)] * v).norm() <= v.norm() * (1.0 + 1e-12);
    }
    ++graphs;
  }
  report(9, "coordinate construction bounds", ok,
         ok ? "two-vertex exact; all bounds on " + std::to_string(graphs) + " random graphs"
            : "a bound failed");
}

void criterion_determinism() {
  const fs::path dir1 = fs::temp_directory_path() / "fec_accept_run1";
  const fs::path dir2 = fs::temp_directory_path() / "fec_accept_run2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  const std::string base = std::string("\"") + FEC_CLI_PATH + "\" sg-cells --level 8 --out ";
  const int rc1 = std::system((base + dir1.string() + " > /dev/null").c_str());
  const int rc2 = std::system((base + dir2.string() + " > /dev/null").c_str());
  bool ok = WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0;
  std::string info = "cli runs failed";
  if (ok) {
    std::ifstream a(dir1 / "cells.csv", std::ios::binary);
    std::ifstream b(dir2 / "cells.csv", std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    const std::string first = sa.str(), second = sb.str();
    const long lines = std::count(first.begin(), first.end(), '\n');
    ok = !first.empty() && first == second && lines == 6561 + 2;  // rows + comment + header
    info = ok ? std::to_string(first.size()) + " bytes, 6561 rows, identical across runs" : "outputs differ";
  }
  report(10, "deterministic cell table", ok, info);
}

}  // namespace

int main() {
  criterion_orthonormality();
  criterion_kusuoka_structure();
  criterion_rank_one();
  criterion_energy_formula();
  criterion_weak_generator();
  criterion_discrete_identities();
  criterion_heisenberg();
  criterion_euclidean_ibp();
  criterion_builder();
  criterion_determinism();
  if (failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
    return EXIT_SUCCESS;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return EXIT_FAILURE;
}
