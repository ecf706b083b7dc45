#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fec/builder.hpp"
#include "fec/checks.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace fec;
using namespace fec::builder;

TEST_CASE("two-vertex case solved by hand") {
  const GraphForm g(2, {{0, 1, 1.0}}, VertexFunction::Ones(2));
  VertexFunction f(2);
  f << 1.0, 0.0;
  const auto built = build(g, {f});

  REQUIRE(built.y.size() == 1);
  CHECK(built.y[0][0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(built.y[0][1] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(g.energy(built.y[0]) == doctest::Approx(1.0 / 144.0).epsilon(1e-14));
  CHECK(built.m_tilde.sum() == doctest::Approx(1.0 / 72.0).epsilon(1e-14));
  // single coordinate: Z^{ 11 } = Gamma / (2 Gamma) = 1/2 <= 2^{-1}
  CHECK(built.z[0](0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(built.z[1](0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  const Report report = verify_bounds(built);
  CHECK(report.all_ok());
  CHECK(report.rank == 1);
}

TEST_CASE("constant inputs give constant coordinates of norm 2^{-i-1}") {
  const GraphForm g(3, {{0, 1, 1.0}, {1, 2, 1.0}}, VertexFunction::Ones(3));
  VertexFunction c = VertexFunction::Constant(3, 2.5);
  const auto y = build_coordinates(g, {c, c});
  CHECK((y[0].array() - y[0][0]).abs().maxCoeff() == 0.0);
  CHECK(y[0].cwiseAbs().maxCoeff() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(y[1].cwiseAbs().maxCoeff() == doctest::Approx(0.125).epsilon(1e-15));

  // fully constant family: zero measure, rank 1, density violation reported
  const auto built = build(g, {c, c});
  CHECK(built.m_tilde.sum() == 0.0);
  CHECK(built.undefined_vertices.size() == 3);
  const Report report = verify_bounds(built);
  CHECK(report.rank == 1);
  CHECK_FALSE(report.all_ok());
  bool density = false;
  for (const auto& v : report.violations) density = density || v == "density";
  CHECK(density);
}

TEST_CASE("zero input functions are rejected") {
  const GraphForm g(2, {{0, 1, 1.0}}, VertexFunction::Ones(2));
  CHECK_THROWS_AS(build_coordinates(g, {VertexFunction::Zero(2)}), std::invalid_argument);
}

TEST_CASE("all bounds of the construction hold on random graphs") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> size_dist(2, 50);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = size_dist(rng);
    const GraphForm g = checks::random_connected_graph(rng, n);
    const auto built = build(g, standard_basis(n));

    for (int i = 1; i <= n; ++i) {
      CHECK(built.y[static_cast<size_t>(i - 1)].cwiseAbs().maxCoeff() <= std::ldexp(1.0, -i) + 1e-15);
      CHECK(g.energy(built.y[static_cast<size_t>(i - 1)]) <= std::ldexp(1.0, -2 * i) + 1e-15);
    }
    CHECK(built.m_tilde.sum() <= 1.0);
    CHECK(built.m_tilde.minCoeff() >= 0.0);

    const Report report = verify_bounds(built);
    CHECK(report.all_ok());
    CHECK(report.rank == n);

    // operator contraction on random vectors
    for (int rep = 0; rep < 10; ++rep) {
      const int p = static_cast<int>(rng() % static_cast<uint64_t>(n));
      if (built.z[static_cast<size_t>(p)].size() == 0) continue;
      const VertexFunction v = checks::random_vertex_function(rng, n);
      CHECK((built.z[static_cast<size_t>(p)] * v).norm() <= v.norm() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("path graph with basis inputs has full-rank coordinates") {
  const int n = 5;
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  const GraphForm g(n, edges, VertexFunction::Ones(n));
  const Report report = verify_bounds(build(g, standard_basis(n)));
  CHECK(report.rank == 5);
  CHECK(report.all_ok());
}

TEST_CASE("report serializes with the expected shape") {
  const GraphForm g(2, {{0, 1, 1.0}}, VertexFunction::Ones(2));
  VertexFunction f(2);
  f << 1.0, 0.0;
  const Report report = verify_bounds(build(g, {f}));
  const nlohmann::json j = report.to_json();
  CHECK(j.contains("bounds"));
  CHECK(j.contains("rank"));
  CHECK(j.contains("m_total"));
  CHECK(j.contains("violations"));
  CHECK(j["violations"].empty());
  CHECK(j["bounds"].is_array());
  CHECK(!j["bounds"].empty());

  // bit-identical reports for identical inputs
  const Report again = verify_bounds(build(g, {f}));
  CHECK(again.to_json().dump() == j.dump());
}

TEST_CASE("builder runs on the graph text format") {
  const std::string path = "builder_test_graph.txt";
  {
    std::ofstream out(path);
    out << "# five-vertex path\n";
    for (int i = 0; i < 5; ++i) out << "v " << i << " 1.0\n";
    for (int i = 0; i + 1 < 5; ++i) out << "e " << i << " " << i + 1 << " 1.0\n";
  }
  const GraphForm g = GraphForm::from_file(path);
  const Report report = verify_bounds(build(g, standard_basis(g.vertex_count())));
  CHECK(report.all_ok());
  CHECK(report.rank == 5);
  std::remove(path.c_str());
}
