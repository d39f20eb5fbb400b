#pragma once

#include <cstddef>
#include <vector>

#include "stq/lti.hpp"
#include "stq/topology.hpp"

namespace stq {

/// Every agent's running estimate of the global state.
///
/// Row i of estimates() is Z_i, split into L slots of n entries; slot j holds
/// agent i's belief about x_j.  After each full round the own slot and the
/// slots of communication neighbors are exact.
class EstimateBank {
 public:
  EstimateBank() = default;
  EstimateBank(std::size_t agents, std::size_t agent_state_dim);

  /// Own slot and communication-neighbor slots set from X, everything else 0.
  static EstimateBank initial(const GlobalState& X, const Graph& communication,
                              std::size_t agent_state_dim);

  std::size_t agents() const { return agents_; }
  std::size_t agent_state_dim() const { return n_; }

  Vector estimate(std::size_t i) const { return Z_.row(static_cast<Eigen::Index>(i)).transpose(); }
  auto slot(std::size_t i, std::size_t j) const {
    return Z_.row(static_cast<Eigen::Index>(i))
        .segment(static_cast<Eigen::Index>(j * n_), static_cast<Eigen::Index>(n_));
  }
  auto slot(std::size_t i, std::size_t j) {
    return Z_.row(static_cast<Eigen::Index>(i))
        .segment(static_cast<Eigen::Index>(j * n_), static_cast<Eigen::Index>(n_));
  }
  const Matrix& estimates() const { return Z_; }
  Matrix& estimates() { return Z_; }

 private:
  std::size_t agents_ = 0;
  std::size_t n_ = 0;
  Matrix Z_;
};

/// Phase 1: each agent overwrites the slots of its communication neighbors
/// (and its own) with the fresh states; other slots keep their stale values.
EstimateBank receive_neighbor_states(const EstimateBank& bank, const GlobalState& X_new,
                                     const Graph& communication);

/// Phase 2: non-neighbor slots become the W-weighted average of the
/// neighbors' phase-1 slots; neighbor slots are set to the exact states.
/// Reads only from `refreshed` and writes a new bank.
EstimateBank mix_estimates(const EstimateBank& refreshed, const Matrix& W,
                           const GlobalState& X_new, const Graph& communication);

/// One full communication round: refresh, exchange, mix.
EstimateBank tracking_round(const EstimateBank& bank, const Matrix& W, const GlobalState& X_new,
                            const Graph& communication);

/// ||Z_i - X||_2 for each agent.
std::vector<double> tracking_error(const EstimateBank& bank, const GlobalState& X);

}  // namespace stq
