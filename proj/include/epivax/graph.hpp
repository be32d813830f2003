#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace epivax {

using Edge = std::pair<int, int>;

/// Simple undirected graph over dense node ids 0..n-1.
///
/// Edges are stored canonically (u < v, sorted, deduplicated). Neighbor lists
/// are always available; the dense 0/1 adjacency matrix is built for graphs
/// up to kMaxDenseNodes nodes and is what the eigensolvers consume.
/// Immutable after construction.
class Graph {
 public:
  static constexpr std::size_t kMaxDenseNodes = 4096;

  Graph() = default;

  /// Throws DomainError on self-loops or endpoints >= n.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const int> neighbors(int i) const;
  int degree(int i) const { return static_cast<int>(neighbors(i).size()); }
  std::vector<int> degrees() const;

  bool has_dense() const noexcept { return dense_.rows() == static_cast<Eigen::Index>(n_); }
  /// Throws DomainError when the graph exceeds kMaxDenseNodes.
  const Eigen::MatrixXd& adjacency() const;

  /// y = A x using the neighbor lists.
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  /// Connected component id per node (ids in order of first appearance).
  std::vector<int> components() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<int> adjacent_;
  Eigen::MatrixXd dense_;
};

/// Parses "u v" lines; '#' starts a comment line, and an optional first
/// data line "n <count>" fixes the node count. Throws ParseError.
Graph parse_edge_list(std::string_view text);
Graph load_edge_list(const std::string& path);

/// Canonical form: "n <count>" header followed by sorted "u v" lines, u < v.
std::string serialize_edge_list(const Graph& g);

/// Dominant adjacency eigenvector, nonnegative with unit 2-norm.
///
/// Within every connected component the Perron vector is used; components
/// whose spectral radius falls short of the global one get exactly zero. When
/// several components share the dominant eigenvalue the result is the
/// normalized projection of the all-ones vector onto that eigenspace, which
/// is the limit of power iteration from the all-ones start.
/// Throws DomainError when the graph has no edges.
Eigen::VectorXd eigenvector_centrality(const Graph& g, double tol = 1e-10);

/// Seeded preferential-attachment graph: a clique on `attach + 1` nodes, then
/// each new node links to `attach` distinct existing nodes picked with
/// probability proportional to degree. Uses only std::mt19937_64 output, so
/// the result is identical across platforms.
Graph barabasi_albert(std::size_t n, std::size_t attach, std::uint64_t seed);

}  // namespace epivax
