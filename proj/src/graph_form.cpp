#include "fec/graph_form.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace fec {

GraphForm::GraphForm(int vertex_count, std::vector<Edge> edges, VertexFunction mu)
    : n_(vertex_count), edges_(std::move(edges)), mu_(std::move(mu)) {
  if (n_ <= 0) throw std::invalid_argument("graph needs at least one vertex");
  if (mu_.size() != n_) throw std::invalid_argument("vertex measure size mismatch");
  if ((mu_.array() <= 0.0).any()) throw std::invalid_argument("vertex measure must be strictly positive");
  adj_.resize(static_cast<size_t>(n_));
  for (const Edge& e : edges_) {
    if (e.p < 0 || e.p >= n_ || e.q < 0 || e.q >= n_) throw std::invalid_argument("edge endpoint out of range");
    if (e.p == e.q) throw std::invalid_argument("self-loops carry no energy and are not allowed");
    if (e.c < 0.0) throw std::invalid_argument("conductance must be nonnegative");
    adj_[static_cast<size_t>(e.p)].emplace_back(e.q, e.c);
    adj_[static_cast<size_t>(e.q)].emplace_back(e.p, e.c);
  }
}

GraphForm GraphForm::parse(std::istream& in) {
  std::unordered_map<long long, int> id_map;
  std::vector<double> mu;
  struct RawEdge {
    long long a, b;
    double c;
  };
  std::vector<RawEdge> raw_edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      long long id;
      double m;
      if (!(ls >> id >> m)) throw std::runtime_error("graph file line " + std::to_string(line_no) + ": expected `v <id> <mu>`");
      if (id_map.count(id)) throw std::runtime_error("graph file line " + std::to_string(line_no) + ": duplicate vertex id");
      id_map[id] = static_cast<int>(mu.size());
      mu.push_back(m);
    } else if (tag == "e") {
      RawEdge e;
      if (!(ls >> e.a >> e.b >> e.c)) throw std::runtime_error("graph file line " + std::to_string(line_no) + ": expected `e <id1> <id2> <conductance>`");
      raw_edges.push_back(e);
    } else {
      throw std::runtime_error("graph file line " + std::to_string(line_no) + ": unknown directive `" + tag + "`");
    }
  }
  if (mu.empty()) throw std::runtime_error("graph file declares no vertices");
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const RawEdge& e : raw_edges) {
    auto a = id_map.find(e.a);
    auto b = id_map.find(e.b);
    if (a == id_map.end() || b == id_map.end()) throw std::runtime_error("graph file: edge references undeclared vertex");
    edges.push_back({a->second, b->second, e.c});
  }
  VertexFunction m = Eigen::Map<const VertexFunction>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  return GraphForm(static_cast<int>(mu.size()), std::move(edges), std::move(m));
}

GraphForm GraphForm::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return parse(in);
}

void GraphForm::check_function(const VertexFunction& f) const {
  if (f.size() != n_) throw std::invalid_argument("vertex function size mismatch");
}

double GraphForm::energy(const VertexFunction& f, const VertexFunction& g) const {
  check_function(f);
  check_function(g);
  double s = 0.0;
  for (const Edge& e : edges_) s += e.c * (f[e.p] - f[e.q]) * (g[e.p] - g[e.q]);
  return s;
}

VertexMeasure GraphForm::energy_measure(const VertexFunction& f, const VertexFunction& g) const {
  check_function(f);
  check_function(g);
  VertexMeasure gamma = VertexMeasure::Zero(n_);
  for (const Edge& e : edges_) {
    const double m = 0.5 * e.c * (f[e.p] - f[e.q]) * (g[e.p] - g[e.q]);
    gamma[e.p] += m;
    gamma[e.q] += m;
  }
  return gamma;
}

double GraphForm::energy_measure_identity_residual(const VertexFunction& f, const VertexFunction& g,
                                                   const VertexFunction& phi) const {
  check_function(phi);
  const VertexMeasure gamma = energy_measure(f, g);
  const double lhs = gamma.dot(phi);
  const VertexFunction gphi = g.cwiseProduct(phi);
  const VertexFunction fphi = f.cwiseProduct(phi);
  const VertexFunction fg = f.cwiseProduct(g);
  const double rhs = 0.5 * (energy(f, gphi) + energy(g, fphi) - energy(fg, phi));
  return std::abs(lhs - rhs);
}

VertexFunction GraphForm::generator(const VertexFunction& f) const {
  check_function(f);
  VertexFunction lf = VertexFunction::Zero(n_);
  for (const Edge& e : edges_) {
    const double d = e.c * (f[e.q] - f[e.p]);
    lf[e.p] += d;
    lf[e.q] -= d;
  }
  return lf.cwiseQuotient(mu_);
}

VertexFunction GraphForm::resolvent_g1(const VertexFunction& f) const {
  check_function(f);
  // mu (I - L) u = mu f  as a symmetric positive definite system.
  Eigen::MatrixXd m = mu_.asDiagonal();
  for (const Edge& e : edges_) {
    m(e.p, e.p) += e.c;
    m(e.q, e.q) += e.c;
    m(e.p, e.q) -= e.c;
    m(e.q, e.p) -= e.c;
  }
  Eigen::LDLT<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("resolvent solve failed");
  return solver.solve(mu_.cwiseProduct(f));
}

VertexFunction GraphForm::harmonic_solve(const std::vector<int>& boundary,
                                         const std::vector<double>& values) const {
  if (boundary.empty()) throw std::invalid_argument("harmonic problem needs a nonempty boundary");
  if (boundary.size() != values.size()) throw std::invalid_argument("boundary/value size mismatch");
  std::vector<char> is_boundary(static_cast<size_t>(n_), 0);
  VertexFunction out = VertexFunction::Zero(n_);
  for (size_t i = 0; i < boundary.size(); ++i) {
    const int p = boundary[i];
    if (p < 0 || p >= n_) throw std::invalid_argument("boundary vertex out of range");
    if (is_boundary[static_cast<size_t>(p)]) throw std::invalid_argument("duplicate boundary vertex");
    is_boundary[static_cast<size_t>(p)] = 1;
    out[p] = values[i];
  }

  // Every vertex must reach the boundary through positive conductances.
  std::vector<char> reached(static_cast<size_t>(n_), 0);
  std::deque<int> queue;
  for (int p : boundary) {
    reached[static_cast<size_t>(p)] = 1;
    queue.push_back(p);
  }
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop_front();
    for (const auto& [q, c] : adj_[static_cast<size_t>(p)]) {
      if (c > 0.0 && !reached[static_cast<size_t>(q)]) {
        reached[static_cast<size_t>(q)] = 1;
        queue.push_back(q);
      }
    }
  }
  for (int p = 0; p < n_; ++p) {
    if (!reached[static_cast<size_t>(p)]) throw std::runtime_error("underdetermined harmonic problem");
  }

  std::vector<int> interior_index(static_cast<size_t>(n_), -1);
  std::vector<int> interior;
  for (int p = 0; p < n_; ++p) {
    if (!is_boundary[static_cast<size_t>(p)]) {
      interior_index[static_cast<size_t>(p)] = static_cast<int>(interior.size());
      interior.push_back(p);
    }
  }
  if (interior.empty()) return out;

  const int k = static_cast<int>(interior.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  for (const Edge& e : edges_) {
    const int ip = interior_index[static_cast<size_t>(e.p)];
    const int iq = interior_index[static_cast<size_t>(e.q)];
    if (ip >= 0) a(ip, ip) += e.c;
    if (iq >= 0) a(iq, iq) += e.c;
    if (ip >= 0 && iq >= 0) {
      a(ip, iq) -= e.c;
      a(iq, ip) -= e.c;
    } else if (ip >= 0) {
      rhs[ip] += e.c * out[e.q];
    } else if (iq >= 0) {
      rhs[iq] += e.c * out[e.p];
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("harmonic solve failed");
  const Eigen::VectorXd u = solver.solve(rhs);
  for (int i = 0; i < k; ++i) out[interior[static_cast<size_t>(i)]] = u[i];
  return out;
}

}  // namespace fec
