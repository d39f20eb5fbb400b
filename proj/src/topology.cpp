#include "stq/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "stq/error.hpp"

namespace stq {

Graph::Graph(std::size_t nodes, const std::vector<Edge>& edges) : nodes_(nodes) {
  for (auto [a, b] : edges) {
    if (a >= nodes_ || b >= nodes_) {
      throw ConfigError("edge endpoint outside 1.." + std::to_string(nodes_));
    }
    if (a == b) {
      continue;
    }
    edges_.insert({std::min(a, b), std::max(a, b)});
  }
}

Graph Graph::complete(std::size_t nodes) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = i + 1; j < nodes; ++j) {
      edges.emplace_back(i, j);
    }
  }
  return Graph(nodes, edges);
}

Graph Graph::chain(std::size_t nodes) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    edges.emplace_back(i, i + 1);
  }
  return Graph(nodes, edges);
}

Graph Graph::from_support(const Matrix& W) {
  if (W.rows() != W.cols()) {
    throw ConfigError("weight matrix is not square");
  }
  const auto L = static_cast<std::size_t>(W.rows());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = i + 1; j < L; ++j) {
      if (W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0 ||
          W(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) != 0.0) {
        edges.emplace_back(i, j);
      }
    }
  }
  return Graph(L, edges);
}

bool Graph::adjacent(std::size_t i, std::size_t j) const {
  if (i == j) {
    return false;
  }
  return edges_.count({std::min(i, j), std::max(i, j)}) > 0;
}

std::vector<std::size_t> Graph::neighborhood(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < nodes_; ++j) {
    if (in_neighborhood(i, j)) {
      out.push_back(j);
    }
  }
  return out;
}

bool is_connected(const Graph& g) {
  if (g.nodes() == 0) {
    return false;
  }
  std::vector<bool> seen(g.nodes(), false);
  std::deque<std::size_t> frontier{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop_front();
    for (std::size_t w = 0; w < g.nodes(); ++w) {
      if (!seen[w] && g.adjacent(v, w)) {
        seen[w] = true;
        ++reached;
        frontier.push_back(w);
      }
    }
  }
  return reached == g.nodes();
}

WeightReport validate_weight_matrix(const Matrix& W, const Graph& communication) {
  const auto L = static_cast<Eigen::Index>(communication.nodes());
  if (W.rows() != L || W.cols() != L) {
    throw ConfigError("weight matrix is " + std::to_string(W.rows()) + "x" +
                      std::to_string(W.cols()) + " but the communication graph has " +
                      std::to_string(L) + " nodes");
  }
  WeightReport report;
  report.eta = std::numeric_limits<double>::infinity();
  std::ostringstream why;
  for (Eigen::Index i = 0; i < L; ++i) {
    const double row = W.row(i).sum();
    const double col = W.col(i).sum();
    if (std::abs(row - 1.0) > kStochasticTolerance) {
      why << "row " << i + 1 << " sums to " << row << "; ";
    }
    if (std::abs(col - 1.0) > kStochasticTolerance) {
      why << "column " << i + 1 << " sums to " << col << "; ";
    }
    for (Eigen::Index j = 0; j < L; ++j) {
      const double w = W(i, j);
      const bool supported = communication.in_neighborhood(static_cast<std::size_t>(i),
                                                           static_cast<std::size_t>(j));
      if (supported) {
        if (!(w > 0.0)) {
          why << "w(" << i + 1 << "," << j + 1 << ") must be positive; ";
        }
        report.eta = std::min(report.eta, w);
      } else if (w != 0.0) {
        why << "w(" << i + 1 << "," << j + 1 << ") must be zero (no channel); ";
      }
    }
  }
  report.reason = why.str();
  report.valid = report.reason.empty();
  if (!report.valid) {
    report.reason = "weight matrix not doubly stochastic with positive support: " + report.reason;
  }
  return report;
}

bool respects_interconnection(const SystemModel& model, const Graph& interconnection) {
  if (interconnection.nodes() != model.agents()) {
    throw ConfigError("interconnection graph size does not match the agent count");
  }
  for (std::size_t i = 0; i < model.agents(); ++i) {
    for (std::size_t j = 0; j < model.agents(); ++j) {
      if (interconnection.in_neighborhood(i, j)) {
        continue;
      }
      if (model.A_block(i, j).cwiseAbs().maxCoeff() != 0.0) {
        return false;
      }
    }
  }
  return true;
}

double consensus_contraction(const Matrix& W) {
  const auto L = W.rows();
  const Matrix avg = Matrix::Constant(L, L, 1.0 / static_cast<double>(L));
  return spectral_radius(W - avg);
}

}  // namespace stq
