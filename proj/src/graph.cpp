#include "epivax/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "epivax/error.hpp"
#include "epivax/linalg.hpp"

namespace epivax {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
      throw DomainError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") out of range for " + std::to_string(n) + " nodes");
    if (u == v) throw DomainError("self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  std::vector<std::size_t> deg(n, 0);
  for (const auto& [u, v] : edges_) {
    ++deg[u];
    ++deg[v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacent_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adjacent_[fill[u]++] = v;
    adjacent_[fill[v]++] = u;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(adjacent_.begin() + offsets_[i], adjacent_.begin() + offsets_[i + 1]);

  if (n <= kMaxDenseNodes) {
    dense_ = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : edges_) dense_(u, v) = dense_(v, u) = 1.0;
  }
}

std::span<const int> Graph::neighbors(int i) const {
  const auto b = offsets_.at(static_cast<std::size_t>(i));
  const auto e = offsets_.at(static_cast<std::size_t>(i) + 1);
  return {adjacent_.data() + b, e - b};
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = static_cast<int>(offsets_[i + 1] - offsets_[i]);
  return d;
}

const Eigen::MatrixXd& Graph::adjacency() const {
  if (!has_dense())
    throw DomainError("graph with " + std::to_string(n_) + " nodes exceeds the dense limit");
  return dense_;
}

void Graph::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += x(adjacent_[k]);
    y(static_cast<Eigen::Index>(i)) = s;
  }
}

std::vector<int> Graph::components() const {
  std::vector<int> comp(n_, -1);
  int next = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < n_; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.assign(1, static_cast<int>(s));
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : neighbors(u)) {
        if (comp[v] < 0) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

namespace {

long long parse_index(std::string_view tok, std::size_t line) {
  long long value = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0)
    throw ParseError(line, "expected a nonnegative integer, got '" + std::string(tok) + "'");
  if (value > std::numeric_limits<int>::max()) throw ParseError(line, "node index too large");
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  long long declared = -1;
  long long max_index = -1;
  bool seen_data = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const auto toks = split_ws(line);
    if (toks.empty() || toks.front().front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    if (!seen_data && toks.front() == "n") {
      if (toks.size() != 2) throw ParseError(line_no, "header must be 'n <count>'");
      declared = parse_index(toks[1], line_no);
      seen_data = true;
      continue;
    }
    seen_data = true;
    if (toks.size() != 2) throw ParseError(line_no, "expected two node indices");
    const long long u = parse_index(toks[0], line_no);
    const long long v = parse_index(toks[1], line_no);
    if (u == v) throw ParseError(line_no, "self-loop at node " + std::to_string(u));
    if (declared >= 0 && std::max(u, v) >= declared)
      throw ParseError(line_no, "node index exceeds declared count " + std::to_string(declared));
    max_index = std::max({max_index, u, v});
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    if (eol == text.size()) break;
  }
  const auto n = static_cast<std::size_t>(declared >= 0 ? declared : max_index + 1);
  return Graph(n, std::move(edges));
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

std::string serialize_edge_list(const Graph& g) {
  std::string out = "n " + std::to_string(g.num_nodes()) + "\n";
  for (const auto& [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

Eigen::VectorXd eigenvector_centrality(const Graph& g, double tol) {
  if (g.num_edges() == 0) throw DomainError("eigenvector centrality needs at least one edge");
  const auto n = g.num_nodes();
  const auto comp = g.components();
  const int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;

  std::vector<std::vector<int>> members(ncomp);
  for (std::size_t i = 0; i < n; ++i) members[comp[i]].push_back(static_cast<int>(i));

  std::vector<double> radius(ncomp, 0.0);
  std::vector<Eigen::VectorXd> perron(ncomp);
  for (int c = 0; c < ncomp; ++c) {
    const auto& nodes = members[c];
    const auto k = static_cast<Eigen::Index>(nodes.size());
    if (k < 2) continue;
    Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(k, k);
    std::vector<Eigen::Index> local(n, -1);
    for (Eigen::Index a = 0; a < k; ++a) local[nodes[a]] = a;
    for (Eigen::Index a = 0; a < k; ++a)
      for (int v : g.neighbors(nodes[a])) sub(a, local[v]) = 1.0;

    linalg::EigenPair top;
    if (k > linalg::kDenseEigenLimit) {
      top = linalg::power_iteration(sub, {.tol = std::min(tol, 1e-10) * 1e-2, .max_iter = 100000});
    } else {
      top = linalg::max_eigenpair(sub);
    }
    if (top.vector.sum() < 0.0) top.vector = -top.vector;
    top.vector = top.vector.cwiseMax(0.0);
    top.vector.normalize();
    radius[c] = top.value;
    perron[c] = std::move(top.vector);
  }

  const double lambda1 = *std::max_element(radius.begin(), radius.end());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (int c = 0; c < ncomp; ++c) {
    if (perron[c].size() == 0 || radius[c] < lambda1 * (1.0 - 1e-9)) continue;
    const double weight = perron[c].sum();
    for (std::size_t a = 0; a < members[c].size(); ++a)
      x(members[c][a]) = weight * perron[c](static_cast<Eigen::Index>(a));
  }
  x.normalize();
  return x;
}

namespace {

std::size_t uniform_below(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<std::size_t>(r % b);
}

}  // namespace

Graph barabasi_albert(std::size_t n, std::size_t attach, std::uint64_t seed) {
  if (attach == 0 || n < attach + 1)
    throw DomainError("preferential attachment needs attach >= 1 and n >= attach + 1");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::vector<int> endpoints;  // each node appears once per incident edge
  const std::size_t core = attach + 1;
  for (std::size_t u = 0; u < core; ++u)
    for (std::size_t v = u + 1; v < core; ++v) {
      edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
      endpoints.push_back(static_cast<int>(u));
      endpoints.push_back(static_cast<int>(v));
    }
  std::vector<int> targets;
  for (std::size_t u = core; u < n; ++u) {
    targets.clear();
    while (targets.size() < attach) {
      const int t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) {
      edges.emplace_back(t, static_cast<int>(u));
      endpoints.push_back(t);
      endpoints.push_back(static_cast<int>(u));
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace epivax
