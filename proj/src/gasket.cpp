#include "fec/gasket.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace fec::gasket {

namespace {

constexpr double kResistanceScale = 5.0 / 3.0;

void check_level(int level) {
  if (level < 0 || level > kMaxLevel)
    throw std::invalid_argument("gasket level must lie in [0, " + std::to_string(kMaxLevel) + "]");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Eigen::Matrix2d gram_of(const BoundaryPair& b, double scale) {
  Eigen::Matrix2d g;
  g(0, 0) = scale * tri_energy(b.b1);
  g(1, 1) = scale * tri_energy(b.b2);
  g(0, 1) = g(1, 0) = scale * tri_energy(b.b1, b.b2);
  return g;
}

Eigen::Vector2d centroid_of(const BoundaryPair& b) {
  return {b.b1.mean(), b.b2.mean()};
}

double ratio_of_gram(const Eigen::Matrix2d& g) {
  // Eigenvalue ratio of a symmetric 2x2 matrix in closed form.
  const double tr = g(0, 0) + g(1, 1);
  const double disc = std::sqrt(std::max(0.0, (g(0, 0) - g(1, 1)) * (g(0, 0) - g(1, 1)) + 4.0 * g(0, 1) * g(0, 1)));
  const double lmax = 0.5 * (tr + disc);
  const double lmin = 0.5 * (tr - disc);
  return lmax > 0.0 ? std::max(0.0, lmin) / lmax : 1.0;
}

// Depth-first sweep over all cells in lexicographic order. visit(word, b,
// scale) is called on every node with |word| <= level; scale = (5/3)^{|word|}.
template <typename Visitor>
void walk_cells(int level, Visitor&& visit) {
  std::string word;
  auto rec = [&](auto&& self, const BoundaryPair& b, double scale) -> void {
    visit(static_cast<const std::string&>(word), b, scale);
    if (static_cast<int>(word.size()) == level) return;
    const auto& ext = extension_matrices();
    for (int i = 0; i < 3; ++i) {
      BoundaryPair child{ext[i] * b.b1, ext[i] * b.b2};
      word.push_back(static_cast<char>('1' + i));
      self(self, child, scale * kResistanceScale);
      word.pop_back();
    }
  };
  rec(rec, coordinate_boundary_values(), 1.0);
}

}  // namespace

double tri_energy(const Eigen::Vector3d& b) {
  const double d01 = b[0] - b[1], d12 = b[1] - b[2], d02 = b[0] - b[2];
  return d01 * d01 + d12 * d12 + d02 * d02;
}

double tri_energy(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  return (u[0] - u[1]) * (v[0] - v[1]) + (u[1] - u[2]) * (v[1] - v[2]) + (u[0] - u[2]) * (v[0] - v[2]);
}

std::array<Eigen::Matrix3d, 3> extension_matrices() {
  static const std::array<Eigen::Matrix3d, 3> mats = [] {
    std::array<Eigen::Matrix3d, 3> a;
    a[0] << 1.0, 0.0, 0.0,
            0.4, 0.4, 0.2,
            0.4, 0.2, 0.4;
    a[1] << 0.4, 0.4, 0.2,
            0.0, 1.0, 0.0,
            0.2, 0.4, 0.4;
    a[2] << 0.4, 0.2, 0.4,
            0.2, 0.4, 0.4,
            0.0, 0.0, 1.0;
    return a;
  }();
  return mats;
}

BoundaryPair coordinate_boundary_values() {
  BoundaryPair b;
  b.b1 = Eigen::Vector3d(-1.0, 1.0, 0.0) / std::sqrt(6.0);
  b.b2 = Eigen::Vector3d(-1.0, -1.0, 2.0) / std::sqrt(18.0);
  return b;
}

double CellData::eig_ratio() const { return ratio_of_gram(z); }

std::vector<CellData> cell_enumerate(int level) {
  check_level(level);
  std::vector<CellData> cells;
  cells.reserve(static_cast<size_t>(std::pow(3.0, level)));
  walk_cells(level, [&](const std::string& word, const BoundaryPair& b, double scale) {
    if (static_cast<int>(word.size()) != level) return;
    CellData cell;
    cell.word = word;
    cell.boundary = b;
    cell.gram = gram_of(b, scale);
    cell.nu = cell.gram.trace();
    cell.z = cell.gram / cell.nu;
    cell.center = centroid_of(b);
    cells.push_back(std::move(cell));
  });
  return cells;
}

double kusuoka_additivity_check(int level) {
  check_level(level);
  if (level < 1) throw std::invalid_argument("additivity check needs level >= 1");
  double worst = 0.0;
  const auto& ext = extension_matrices();
  walk_cells(level - 1, [&](const std::string&, const BoundaryPair& b, double scale) {
    const double nu_parent = gram_of(b, scale).trace();
    double nu_children = 0.0;
    for (int i = 0; i < 3; ++i) {
      BoundaryPair child{ext[i] * b.b1, ext[i] * b.b2};
      nu_children += gram_of(child, scale * kResistanceScale).trace();
    }
    worst = std::max(worst, std::abs(nu_parent - nu_children));
  });
  return worst;
}

double gram_additivity_residual(int level) {
  check_level(level);
  if (level < 1) throw std::invalid_argument("additivity check needs level >= 1");
  double worst = 0.0;
  const auto& ext = extension_matrices();
  walk_cells(level - 1, [&](const std::string&, const BoundaryPair& b, double scale) {
    Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 3; ++i) {
      BoundaryPair child{ext[i] * b.b1, ext[i] * b.b2};
      sum += gram_of(child, scale * kResistanceScale);
    }
    worst = std::max(worst, (gram_of(b, scale) - sum).cwiseAbs().maxCoeff());
  });
  return worst;
}

VertexFunction VertexSet::harmonic_values(const Eigen::Vector3d& b) const {
  VertexFunction f(vertex_count());
  for (int v = 0; v < vertex_count(); ++v) f[v] = weights[static_cast<size_t>(v)].dot(b);
  return f;
}

VertexFunction VertexSet::composite_values(const Polynomial& f) const {
  VertexFunction out(vertex_count());
  for (int v = 0; v < vertex_count(); ++v) {
    const Eigen::Vector2d& y = coords[static_cast<size_t>(v)];
    const double point[2] = {y[0], y[1]};
    out[v] = f.eval(std::span<const double>(point, 2));
  }
  return out;
}

std::pair<std::ptrdiff_t, std::ptrdiff_t> VertexSet::subtree_edge_range(const std::string& prefix) const {
  if (static_cast<int>(prefix.size()) > level) throw std::invalid_argument("prefix longer than the level");
  std::ptrdiff_t base = 0;
  for (char ch : prefix) {
    if (ch < '1' || ch > '3') throw std::invalid_argument("cell word must use letters 1,2,3");
    base = base * 3 + (ch - '1');
  }
  std::ptrdiff_t block = 1;
  for (int k = static_cast<int>(prefix.size()); k < level; ++k) block *= 3;
  return {3 * base * block, 3 * (base + 1) * block};
}

double VertexSet::edge_energy(const VertexFunction& f, const VertexFunction& g, std::ptrdiff_t e0,
                              std::ptrdiff_t e1) const {
  double s = 0.0;
  for (std::ptrdiff_t i = e0; i < e1; ++i) {
    const Edge& e = edges[static_cast<size_t>(i)];
    s += e.c * (f[e.p] - f[e.q]) * (g[e.p] - g[e.q]);
  }
  return s;
}

GraphForm VertexSet::to_graph() const {
  return GraphForm(vertex_count(), edges, VertexFunction::Ones(vertex_count()));
}

VertexSet coordinates_at_vertices(int level) {
  check_level(level);
  VertexSet vs;
  vs.level = level;
  const double conductance = std::pow(kResistanceScale, level);
  const BoundaryPair root = coordinate_boundary_values();
  const auto& ext = extension_matrices();

  // Integer barycentric address of corner j of the cell reached by the word
  // with digit sum S: address = S + e_j at scale 2^level. Exact, so shared
  // vertices deduplicate without tolerance.
  std::unordered_map<uint64_t, int> seen;
  seen.reserve(static_cast<size_t>(std::pow(3.0, level)) * 2 + 8);
  const auto pack = [](const std::array<int64_t, 3>& a) {
    return static_cast<uint64_t>(a[0]) | (static_cast<uint64_t>(a[1]) << 21) |
           (static_cast<uint64_t>(a[2]) << 42);
  };

  auto rec = [&](auto&& self, const Eigen::Matrix3d& weight_rows, const std::array<int64_t, 3>& digit_sum,
                 int depth) -> void {
    if (depth == level) {
      int ids[3];
      for (int j = 0; j < 3; ++j) {
        std::array<int64_t, 3> addr = digit_sum;
        addr[j] += 1;
        const Eigen::Vector3d w = weight_rows.row(j);
        auto [it, inserted] = seen.try_emplace(pack(addr), vs.vertex_count());
        if (inserted) {
          vs.weights.push_back(w);
          vs.coords.emplace_back(w.dot(root.b1), w.dot(root.b2));
        } else if ((vs.weights[static_cast<size_t>(it->second)] - w).cwiseAbs().maxCoeff() > 1e-12) {
          throw std::logic_error("inconsistent vertex value between adjacent cells");
        }
        ids[j] = it->second;
      }
      vs.edges.push_back({ids[0], ids[1], conductance});
      vs.edges.push_back({ids[1], ids[2], conductance});
      vs.edges.push_back({ids[0], ids[2], conductance});
      return;
    }
    for (int i = 0; i < 3; ++i) {
      std::array<int64_t, 3> sum = {2 * digit_sum[0], 2 * digit_sum[1], 2 * digit_sum[2]};
      sum[static_cast<size_t>(i)] += 1;
      self(self, ext[i] * weight_rows, sum, depth + 1);
    }
  };
  rec(rec, Eigen::Matrix3d::Identity(), {0, 0, 0}, 0);
  return vs;
}

double graph_energy_of_composite(const Polynomial& f, const Polynomial& g, int level) {
  const VertexSet vs = coordinates_at_vertices(level);
  const VertexFunction fv = vs.composite_values(f);
  const VertexFunction gv = vs.composite_values(g);
  return vs.edge_energy(fv, gv, 0, static_cast<std::ptrdiff_t>(vs.edges.size()));
}

std::vector<LevelRatioStats> rank_one_decay(int level, int sample_count, uint64_t seed, int exhaustive_max) {
  check_level(level);
  std::vector<LevelRatioStats> stats(static_cast<size_t>(level) + 1);
  for (int n = 0; n <= level; ++n) stats[static_cast<size_t>(n)].level = n;

  const int deepest_full = std::min(level, exhaustive_max);
  std::vector<double> mass(static_cast<size_t>(deepest_full) + 1, 0.0);
  walk_cells(deepest_full, [&](const std::string& word, const BoundaryPair& b, double scale) {
    auto& s = stats[word.size()];
    const Eigen::Matrix2d g = gram_of(b, scale);
    const double r = ratio_of_gram(g);
    s.mean += r * g.trace();
    s.max = std::max(s.max, r);
    s.cells += 1;
    mass[word.size()] += g.trace();
  });
  for (int n = 0; n <= deepest_full; ++n) stats[static_cast<size_t>(n)].mean /= mass[static_cast<size_t>(n)];

  if (level > deepest_full) {
    // nu-weighted descent: child i with probability nu(K_wi)/nu(K_w).
    if (sample_count <= 0) throw std::invalid_argument("sampled levels need sample_count > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto& ext = extension_matrices();
    for (int n = deepest_full + 1; n <= level; ++n) {
      auto& s = stats[static_cast<size_t>(n)];
      s.exhaustive = false;
      s.cells = sample_count;
      for (int trial = 0; trial < sample_count; ++trial) {
        BoundaryPair b = coordinate_boundary_values();
        double scale = 1.0;
        for (int step = 0; step < n; ++step) {
          BoundaryPair children[3];
          double nu[3];
          double total = 0.0;
          for (int i = 0; i < 3; ++i) {
            children[i] = {ext[i] * b.b1, ext[i] * b.b2};
            nu[i] = gram_of(children[i], scale * kResistanceScale).trace();
            total += nu[i];
          }
          double u = unif(rng) * total;
          int pick = 0;
          while (pick < 2 && u > nu[pick]) {
            u -= nu[pick];
            ++pick;
          }
          b = children[pick];
          scale *= kResistanceScale;
        }
        const double r = ratio_of_gram(gram_of(b, scale));
        s.mean += r;
        s.max = std::max(s.max, r);
      }
      s.mean /= static_cast<double>(sample_count);
    }
  }
  return stats;
}

CoordinateModel coordinate_model(int level) {
  const std::vector<CellData> cells = cell_enumerate(level);
  CoordinateModel m;
  m.dim = 2;
  m.weight.reserve(cells.size());
  m.metric.reserve(cells.size());
  m.ycoord.reserve(cells.size());
  m.laplacian.reserve(cells.size());
  for (const CellData& cell : cells) {
    m.weight.push_back(cell.nu);
    m.metric.push_back(cell.z);
    m.ycoord.push_back(cell.center);
    m.laplacian.push_back(Eigen::Vector2d::Zero());  // harmonic coordinates
  }
  return m;
}

Polynomial corner_vanishing_quadratic() {
  // y2 takes only two values on the corner images: -1/sqrt(18) twice and
  // 2/sqrt(18) once.
  const Polynomial y2 = Polynomial::variable(1);
  const Polynomial low = Polynomial::from_double(-1.0 / std::sqrt(18.0));
  const Polynomial high = Polynomial::from_double(2.0 / std::sqrt(18.0));
  return (y2 - low) * (y2 - high);
}

Polynomial corner_bump() {
  const Polynomial y1 = Polynomial::variable(0);
  const Polynomial y2 = Polynomial::variable(1);
  const double c2 = 1.0 / std::sqrt(18.0);
  // affine forms vanishing on the lines through the images of p1,p2 and of
  // p1,p3, oriented to be positive on the interior of the image
  const Polynomial above_p1p2 = y2 + Polynomial::from_double(c2);
  const Polynomial right_of_p1p3 =
      Polynomial::from_double(2.0 * c2) + Polynomial::from_double(std::sqrt(3.0)) * y1 - y2;
  return above_p1p2 * right_of_p1p3;
}

double harmonic_cell_energy(const Eigen::Vector3d& b, const std::string& word) {
  Eigen::Vector3d bw = b;
  double scale = 1.0;
  const auto& ext = extension_matrices();
  for (char ch : word) {
    if (ch < '1' || ch > '3') throw std::invalid_argument("cell word must use letters 1,2,3");
    bw = ext[ch - '1'] * bw;
    scale *= kResistanceScale;
  }
  return scale * tri_energy(bw);
}

void write_cells_csv(std::ostream& out, int level) {
  out << "# harmonic coordinate boundary values: b1=(-1,1,0)/sqrt(6), b2=(-1,-1,2)/sqrt(18)\n";
  out << "word,level,nu,G11,G12,G22,Z11,Z12,Z22,eig_ratio,y1_center,y2_center\n";
  for (const CellData& c : cell_enumerate(level)) {
    out << c.word << ',' << level << ',' << format_double(c.nu) << ',' << format_double(c.gram(0, 0))
        << ',' << format_double(c.gram(0, 1)) << ',' << format_double(c.gram(1, 1)) << ','
        << format_double(c.z(0, 0)) << ',' << format_double(c.z(0, 1)) << ',' << format_double(c.z(1, 1))
        << ',' << format_double(c.eig_ratio()) << ',' << format_double(c.center[0]) << ','
        << format_double(c.center[1]) << '\n';
  }
}

void write_gasket_svg(std::ostream& out, int level) {
  const VertexSet vs = coordinates_at_vertices(level);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : vs.coords) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double margin = 0.04;
  const double scale = (1.0 - 2.0 * margin) / span;
  const double x0 = 0.5 - 0.5 * scale * (xmax - xmin) - scale * xmin;
  const double y0 = 0.5 - 0.5 * scale * (ymax - ymin) - scale * ymin;
  const double radius = std::max(0.0025, 0.12 * std::pow(0.55, level));

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"720\" height=\"720\">\n";
  out << "<desc>harmonic coordinate image of the level-" << level
      << " gasket vertices; b1=(-1,1,0)/sqrt(6), b2=(-1,-1,2)/sqrt(18)</desc>\n";
  out << "<rect width=\"1\" height=\"1\" fill=\"white\"/>\n";
  char buf[160];
  for (const auto& p : vs.coords) {
    const double cx = x0 + scale * p[0];
    const double cy = 1.0 - (y0 + scale * p[1]);  // svg y grows downward
    std::snprintf(buf, sizeof(buf), "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"#20609c\"/>\n", cx, cy,
                  radius);
    out << buf;
  }
  out << "</svg>\n";
}

}  // namespace fec::gasket
