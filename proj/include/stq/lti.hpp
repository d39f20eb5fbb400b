#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace stq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Stacked global state X = col(x_1, ..., x_L), length L*n.
using GlobalState = Vector;
/// Stacked global input U = col(u_1, ..., u_L), length L*m.
using GlobalControl = Vector;

/// Coupled network of L agents with n states and m inputs each.
///
/// The drift matrix couples agents through its n x n blocks A_ij; the input
/// matrix is block diagonal (agent i only actuates its own state).  Each
/// agent carries its own quadratic stage-cost weights P_i and R_i.
class SystemModel {
 public:
  SystemModel() = default;
  SystemModel(std::size_t agents, std::size_t state_dim, std::size_t input_dim, Matrix A,
              std::vector<Matrix> B_blocks, std::vector<Matrix> P_blocks,
              std::vector<Matrix> R_blocks);

  std::size_t agents() const { return agents_; }
  std::size_t agent_state_dim() const { return n_; }
  std::size_t agent_input_dim() const { return m_; }
  std::size_t state_dim() const { return agents_ * n_; }
  std::size_t input_dim() const { return agents_ * m_; }

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& B_block(std::size_t i) const { return B_blocks_.at(i); }
  const Matrix& P_block(std::size_t i) const { return P_blocks_.at(i); }
  const Matrix& R_block(std::size_t i) const { return R_blocks_.at(i); }
  Matrix A_block(std::size_t i, std::size_t j) const;

  /// Block diagonals diag(P_1..P_L) and diag(R_1..R_L).
  const Matrix& P() const { return P_; }
  const Matrix& R() const { return R_; }

  auto agent_state(const GlobalState& X, std::size_t i) const {
    return X.segment(static_cast<Eigen::Index>(i * n_), static_cast<Eigen::Index>(n_));
  }
  auto agent_input(const GlobalControl& U, std::size_t i) const {
    return U.segment(static_cast<Eigen::Index>(i * m_), static_cast<Eigen::Index>(m_));
  }

 private:
  std::size_t agents_ = 0;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  Matrix A_;
  std::vector<Matrix> B_blocks_;
  std::vector<Matrix> P_blocks_;
  std::vector<Matrix> R_blocks_;
  Matrix B_;
  Matrix P_;
  Matrix R_;
};

/// Feedback gain for all agents.  Rows [i*m, (i+1)*m) belong to agent i and
/// act on a full-length state (or estimate) z with u_i = -K_i z.
class GainMatrix {
 public:
  GainMatrix() = default;
  GainMatrix(Matrix stacked, std::size_t agent_input_dim);

  static GainMatrix zero(const SystemModel& model);

  std::size_t agents() const { return agents_; }
  std::size_t agent_input_dim() const { return m_; }
  const Matrix& stacked() const { return K_; }

  auto agent(std::size_t i) const {
    return K_.middleRows(static_cast<Eigen::Index>(i * m_), static_cast<Eigen::Index>(m_));
  }
  void set_agent(std::size_t i, const Matrix& row);

 private:
  Matrix K_;
  std::size_t m_ = 1;
  std::size_t agents_ = 0;
};

/// X(t+1) = A X(t) + B U(t).
GlobalState step_global(const SystemModel& model, const GlobalState& X, const GlobalControl& U);

/// g_i = x_i' P_i x_i + u_i' R_i u_i.
double stage_cost(const SystemModel& model, std::size_t agent, const Vector& x, const Vector& u);

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Matrix& M);

/// Closed loop A - B K for the u = -K x convention.
Matrix closed_loop(const SystemModel& model, const GainMatrix& K);

inline constexpr double kStabilityMargin = 1e-9;

/// True iff rho(A - B K) < 1 - 1e-9.
bool is_stabilizing(const SystemModel& model, const GainMatrix& K);

/// Smallest eigenvalue of the symmetric part of M.
double min_symmetric_eigenvalue(const Matrix& M);

}  // namespace stq
