#include "fec/checks.hpp"
#include "fec/gasket.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

namespace {

// Exit codes: 0 success, 1 check or I/O failure, 2 usage error.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int write_artifact(const std::string& out_dir, const std::string& filename,
                   const std::function<void(std::ostream&)>& writer) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << out_dir << ": " << ec.message() << "\n";
    return kExitFailure;
  }
  const std::filesystem::path path = std::filesystem::path(out_dir) / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << path.string() << " for writing\n";
    return kExitFailure;
  }
  writer(out);
  out.flush();
  if (!out) {
    std::cerr << "write to " << path.string() << " failed\n";
    return kExitFailure;
  }
  std::cout << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite energy coordinates: gasket tables, model checks, coordinate construction"};
  app.require_subcommand(1);

  int level = 8;
  std::string out_dir = ".";

  auto* cells = app.add_subcommand("sg-cells", "write per-cell table cells.csv (Gram, nu, Z, eigenvalue ratio)");
  cells->add_option("--level", level, "subdivision level")->required()->check(CLI::Range(0, fec::gasket::kMaxLevel));
  cells->add_option("--out", out_dir, "output directory");

  auto* plot = app.add_subcommand("sg-plot", "write gasket.svg, the harmonic coordinate image of the vertices");
  plot->add_option("--level", level, "subdivision level")->required()->check(CLI::Range(0, fec::gasket::kMaxLevel));
  plot->add_option("--out", out_dir, "output directory");

  fec::checks::CheckOptions opt;
  std::string suite;
  double tol = -1.0;
  std::string graph_file;
  auto* check = app.add_subcommand("check", "run an invariant suite and print a JSON report");
  check->add_option("suite", suite, "one of: sg, heisenberg, euclid, builder, all")
      ->required()
      ->check(CLI::IsMember({"sg", "heisenberg", "euclid", "builder", "all"}));
  check->add_option("--level", opt.level, "gasket level")->check(CLI::Range(1, fec::gasket::kMaxLevel));
  check->add_option("--grid", opt.grid, "base Euclidean grid")->check(CLI::Range(2, 512));
  check->add_option("--graph", graph_file, "graph file for the builder suite")->check(CLI::ExistingFile);
  std::string family = "basis";
  check->add_option("--family", family, "builder input family: basis or random")
      ->check(CLI::IsMember({"basis", "random"}));
  check->add_option("--seed", opt.seed, "seed for randomized checks");
  check->add_option("--tol", tol, "tolerance override for exact identities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cells->parsed()) {
      return write_artifact(out_dir, "cells.csv", [&](std::ostream& os) { fec::gasket::write_cells_csv(os, level); });
    }
    if (plot->parsed()) {
      return write_artifact(out_dir, "gasket.svg", [&](std::ostream& os) { fec::gasket::write_gasket_svg(os, level); });
    }
    // check
    if (tol > 0.0) opt.tolerance = tol;
    if (!graph_file.empty()) opt.graph_file = graph_file;
    opt.random_family = family == "random";
    fec::checks::CheckReport report;
    if (suite == "sg") report = fec::checks::run_sg_suite(opt);
    else if (suite == "heisenberg") report = fec::checks::run_heisenberg_suite(opt);
    else if (suite == "euclid") report = fec::checks::run_euclid_suite(opt);
    else if (suite == "builder") report = fec::checks::run_builder_suite(opt);
    else report = fec::checks::run_all_suites(opt);
    std::cout << report.to_json().dump(2) << "\n";
    return report.all_passed() ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
