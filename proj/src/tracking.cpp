#include "stq/tracking.hpp"

#include "stq/error.hpp"

namespace stq {

namespace {

void require_state(const EstimateBank& bank, const GlobalState& X, const Graph& g) {
  if (static_cast<std::size_t>(X.size()) != bank.agents() * bank.agent_state_dim() ||
      g.nodes() != bank.agents()) {
    throw ConfigError("state tracking: dimension mismatch");
  }
}

}  // namespace

EstimateBank::EstimateBank(std::size_t agents, std::size_t agent_state_dim)
    : agents_(agents),
      n_(agent_state_dim),
      Z_(Matrix::Zero(static_cast<Eigen::Index>(agents), static_cast<Eigen::Index>(agents * agent_state_dim))) {}

EstimateBank EstimateBank::initial(const GlobalState& X, const Graph& communication,
                                   std::size_t agent_state_dim) {
  EstimateBank bank(communication.nodes(), agent_state_dim);
  require_state(bank, X, communication);
  return receive_neighbor_states(bank, X, communication);
}

EstimateBank receive_neighbor_states(const EstimateBank& bank, const GlobalState& X_new,
                                     const Graph& communication) {
  require_state(bank, X_new, communication);
  const auto n = static_cast<Eigen::Index>(bank.agent_state_dim());
  EstimateBank out = bank;
  for (std::size_t i = 0; i < bank.agents(); ++i) {
    for (std::size_t j = 0; j < bank.agents(); ++j) {
      if (communication.in_neighborhood(i, j)) {
        out.slot(i, j) = X_new.segment(static_cast<Eigen::Index>(j) * n, n).transpose();
      }
    }
  }
  return out;
}

EstimateBank mix_estimates(const EstimateBank& refreshed, const Matrix& W,
                           const GlobalState& X_new, const Graph& communication) {
  require_state(refreshed, X_new, communication);
  const auto L = static_cast<Eigen::Index>(refreshed.agents());
  if (W.rows() != L || W.cols() != L) {
    throw ConfigError("state tracking: weight matrix shape does not match the agent count");
  }
  EstimateBank out(refreshed.agents(), refreshed.agent_state_dim());
  // Row i of W * Zhat is sum_k w_ik Zhat_k for every slot at once.
  out.estimates() = W * refreshed.estimates();
  const auto n = static_cast<Eigen::Index>(refreshed.agent_state_dim());
  for (std::size_t i = 0; i < refreshed.agents(); ++i) {
    for (std::size_t j = 0; j < refreshed.agents(); ++j) {
      if (communication.in_neighborhood(i, j)) {
        out.slot(i, j) = X_new.segment(static_cast<Eigen::Index>(j) * n, n).transpose();
      }
    }
  }
  return out;
}

EstimateBank tracking_round(const EstimateBank& bank, const Matrix& W, const GlobalState& X_new,
                            const Graph& communication) {
  return mix_estimates(receive_neighbor_states(bank, X_new, communication), W, X_new,
                       communication);
}

std::vector<double> tracking_error(const EstimateBank& bank, const GlobalState& X) {
  if (static_cast<std::size_t>(X.size()) != bank.agents() * bank.agent_state_dim()) {
    throw ConfigError("tracking_error: dimension mismatch");
  }
  std::vector<double> out(bank.agents());
  for (std::size_t i = 0; i < bank.agents(); ++i) {
    out[i] = (bank.estimate(i) - X).norm();
  }
  return out;
}

}  // namespace stq
