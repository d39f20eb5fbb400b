#pragma once

#include <cstddef>
#include <span>

#include "stq/excitation.hpp"
#include "stq/lti.hpp"

namespace stq {

/// (Ln + m)(Ln + m + 1) / 2: free entries of a symmetric (Ln+m) matrix.
std::size_t theta_dim(std::size_t agents, std::size_t agent_state_dim, std::size_t agent_input_dim);

/// Monomials v_a v_b (a <= b) of v = [z; u], row-major over the upper triangle.
Vector quadratic_basis(const Vector& z, const Vector& u);

/// Symmetric Q-factor matrix H over [z; u] and its blocks.  The state part
/// has size Ln, the input part m.
class QFactorParams {
 public:
  QFactorParams(Matrix H, std::size_t state_dim);

  const Matrix& H() const { return H_; }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t input_dim() const { return static_cast<std::size_t>(H_.rows()) - state_dim_; }

  auto H11() const { return H_.topLeftCorner(sd(), sd()); }
  auto H12() const { return H_.topRightCorner(sd(), id()); }
  auto H21() const { return H_.bottomLeftCorner(id(), sd()); }
  auto H22() const { return H_.bottomRightCorner(id(), id()); }

 private:
  Eigen::Index sd() const { return static_cast<Eigen::Index>(state_dim_); }
  Eigen::Index id() const { return H_.rows() - sd(); }

  Matrix H_;
  std::size_t state_dim_;
};

/// theta with y' theta == v' H v: diagonal entries copied, off-diagonal doubled.
Vector pack_H_to_theta(const Matrix& H);

/// Exact inverse of pack_H_to_theta.
QFactorParams unpack_theta_to_H(const Vector& theta, std::size_t state_dim, std::size_t input_dim);

/// theta' = theta - alpha * phi * (theta' phi - g).
Vector sgd_step(const Vector& theta, const Vector& phi, double g, double alpha);

/// phi = y(t) - y(t+1).
Vector bellman_sample(const Vector& y_t, const Vector& y_next);

inline constexpr double kMaxH22Condition = 1e12;

/// Minimizer of the Q-factor over u: K_i = H22^{-1} H21, applied as u = -K_i z.
/// Throws NumericalError when H22 is singular or cond(H22) >= 1e12.
Matrix improve_policy(const QFactorParams& params);

struct BellmanSample {
  Vector phi;
  double g = 0.0;
};

/// Mean over the window of (phi' theta - g)^2.
double bellman_residual(const Vector& theta, std::span<const BellmanSample> window);

/// Mean of g^2 over the window.
double mean_squared_cost(std::span<const BellmanSample> window);

/// Extreme eigenvalues of sum phi phi' over the window.
PersistencyReport persistency_metric(std::span<const BellmanSample> window);

}  // namespace stq
