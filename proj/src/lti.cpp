#include "stq/lti.hpp"

#include <string>

#include "stq/error.hpp"

namespace stq {

namespace {

constexpr double kPsdFloor = -1e-10;

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

void require_block(const Matrix& M, std::size_t rows, std::size_t cols, const std::string& name) {
  if (static_cast<std::size_t>(M.rows()) != rows || static_cast<std::size_t>(M.cols()) != cols) {
    throw ConfigError(name + " has shape " + std::to_string(M.rows()) + "x" +
                      std::to_string(M.cols()) + ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

void require_psd(const Matrix& M, const std::string& name) {
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError(name + " is not symmetric");
  }
  if (min_symmetric_eigenvalue(M) < kPsdFloor) {
    throw ConfigError(name + " is not positive semi-definite");
  }
}

}  // namespace

SystemModel::SystemModel(std::size_t agents, std::size_t state_dim, std::size_t input_dim,
                         Matrix A, std::vector<Matrix> B_blocks, std::vector<Matrix> P_blocks,
                         std::vector<Matrix> R_blocks)
    : agents_(agents),
      n_(state_dim),
      m_(input_dim),
      A_(std::move(A)),
      B_blocks_(std::move(B_blocks)),
      P_blocks_(std::move(P_blocks)),
      R_blocks_(std::move(R_blocks)) {
  if (agents_ == 0 || n_ == 0 || m_ == 0) {
    throw ConfigError("agent count and per-agent dimensions must be positive");
  }
  require_block(A_, agents_ * n_, agents_ * n_, "A");
  if (B_blocks_.size() != agents_ || P_blocks_.size() != agents_ || R_blocks_.size() != agents_) {
    throw ConfigError("expected one B, P and R block per agent");
  }
  for (std::size_t i = 0; i < agents_; ++i) {
    const auto tag = std::to_string(i + 1);
    require_block(B_blocks_[i], n_, m_, "B_" + tag);
    require_block(P_blocks_[i], n_, n_, "P_" + tag);
    require_block(R_blocks_[i], m_, m_, "R_" + tag);
    require_psd(P_blocks_[i], "P_" + tag);
    require_psd(R_blocks_[i], "R_" + tag);
  }
  B_ = block_diagonal(B_blocks_);
  P_ = block_diagonal(P_blocks_);
  R_ = block_diagonal(R_blocks_);
}

Matrix SystemModel::A_block(std::size_t i, std::size_t j) const {
  return A_.block(idx(i * n_), idx(j * n_), idx(n_), idx(n_));
}

GainMatrix::GainMatrix(Matrix stacked, std::size_t agent_input_dim)
    : K_(std::move(stacked)), m_(agent_input_dim) {
  if (m_ == 0 || static_cast<std::size_t>(K_.rows()) % m_ != 0) {
    throw ConfigError("gain rows are not a multiple of the per-agent input dimension");
  }
  agents_ = static_cast<std::size_t>(K_.rows()) / m_;
}

GainMatrix GainMatrix::zero(const SystemModel& model) {
  return GainMatrix(Matrix::Zero(idx(model.input_dim()), idx(model.state_dim())),
                    model.agent_input_dim());
}

void GainMatrix::set_agent(std::size_t i, const Matrix& row) {
  if (row.rows() != idx(m_) || row.cols() != K_.cols()) {
    throw ConfigError("gain row for agent " + std::to_string(i + 1) + " has wrong shape");
  }
  K_.middleRows(idx(i * m_), idx(m_)) = row;
}

GlobalState step_global(const SystemModel& model, const GlobalState& X, const GlobalControl& U) {
  if (static_cast<std::size_t>(X.size()) != model.state_dim() ||
      static_cast<std::size_t>(U.size()) != model.input_dim()) {
    throw ConfigError("state/control length does not match the model");
  }
  return model.A() * X + model.B() * U;
}

double stage_cost(const SystemModel& model, std::size_t agent, const Vector& x, const Vector& u) {
  if (agent >= model.agents() || static_cast<std::size_t>(x.size()) != model.agent_state_dim() ||
      static_cast<std::size_t>(u.size()) != model.agent_input_dim()) {
    throw ConfigError("stage_cost: dimension mismatch");
  }
  return x.dot(model.P_block(agent) * x) + u.dot(model.R_block(agent) * u);
}

double spectral_radius(const Matrix& M) {
  if (M.rows() != M.cols()) {
    throw ConfigError("spectral_radius: matrix is not square");
  }
  if (M.size() == 0) {
    return 0.0;
  }
  Eigen::EigenSolver<Matrix> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectral_radius: eigen decomposition failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix closed_loop(const SystemModel& model, const GainMatrix& K) {
  if (static_cast<std::size_t>(K.stacked().rows()) != model.input_dim() ||
      static_cast<std::size_t>(K.stacked().cols()) != model.state_dim()) {
    throw ConfigError("gain matrix shape does not match the model");
  }
  return model.A() - model.B() * K.stacked();
}

bool is_stabilizing(const SystemModel& model, const GainMatrix& K) {
  const Matrix F = closed_loop(model, K);
  if (!F.allFinite()) {
    return false;
  }
  return spectral_radius(F) < 1.0 - kStabilityMargin;
}

double min_symmetric_eigenvalue(const Matrix& M) {
  const Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace stq
