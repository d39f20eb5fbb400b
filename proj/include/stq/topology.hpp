#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stq/lti.hpp"

namespace stq {

/// Undirected simple graph over agents 0..L-1.  Self-loops are never stored,
/// but neighborhoods include the node itself.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph() = default;
  Graph(std::size_t nodes, const std::vector<Edge>& edges);

  static Graph complete(std::size_t nodes);
  static Graph chain(std::size_t nodes);
  static Graph empty(std::size_t nodes) { return Graph(nodes, {}); }
  /// Edges wherever an off-diagonal entry of W is nonzero (either direction).
  static Graph from_support(const Matrix& W);

  std::size_t nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  bool adjacent(std::size_t i, std::size_t j) const;
  /// N_i: adjacent nodes plus i itself.
  bool in_neighborhood(std::size_t i, std::size_t j) const { return i == j || adjacent(i, j); }
  std::vector<std::size_t> neighborhood(std::size_t i) const;

 private:
  std::size_t nodes_ = 0;
  std::set<Edge> edges_;
};

bool is_connected(const Graph& g);

struct WeightReport {
  bool valid = false;
  double eta = 0.0;  // smallest weight on a supported entry
  std::string reason;
};

inline constexpr double kStochasticTolerance = 1e-12;

/// Doubly stochastic, w_ij >= eta > 0 on N_i^c, zero elsewhere.
WeightReport validate_weight_matrix(const Matrix& W, const Graph& communication);

/// A_ij may be nonzero only for i == j or (i, j) in the interconnection graph.
bool respects_interconnection(const SystemModel& model, const Graph& interconnection);

/// Spectral radius of W - (1/L) 1 1'.
double consensus_contraction(const Matrix& W);

/// Interconnection graph, communication graph and mixing weights.
struct TopologySpec {
  Graph interconnection;
  Graph communication;
  Matrix W;
};

}  // namespace stq
