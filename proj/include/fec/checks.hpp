#pragma once

#include "fec/graph_form.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fec::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // residual or measured quantity
  double tolerance = 0.0;  // bound the value was held against
  nlohmann::json detail;   // optional extra fields (lhs/rhs/grid/...)
};

struct CheckReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  nlohmann::json to_json() const;  // schema 1
};

struct CheckOptions {
  int level = 8;                          // gasket level
  int grid = 8;                           // base Euclidean grid
  uint64_t seed = 12345;
  std::optional<double> tolerance;        // overrides per-check defaults when set
  std::optional<std::string> graph_file;  // builder suite input
  bool random_family = false;             // builder inputs: random functions instead of the basis
};

CheckReport run_sg_suite(const CheckOptions& opt);
CheckReport run_heisenberg_suite(const CheckOptions& opt);
CheckReport run_euclid_suite(const CheckOptions& opt);
CheckReport run_builder_suite(const CheckOptions& opt);
/// All of the above, names prefixed by their suite.
CheckReport run_all_suites(const CheckOptions& opt);

/// Random connected weighted graph: a random spanning tree plus extra edges,
/// conductances and measures in [1/2, 2].
GraphForm random_connected_graph(std::mt19937_64& rng, int vertex_count);

VertexFunction random_vertex_function(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0);

}  // namespace fec::checks
