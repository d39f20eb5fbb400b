#include "stq/qfactor.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stq/error.hpp"

namespace stq {

std::size_t theta_dim(std::size_t agents, std::size_t agent_state_dim, std::size_t agent_input_dim) {
  const std::size_t v = agents * agent_state_dim + agent_input_dim;
  return v * (v + 1) / 2;
}

Vector quadratic_basis(const Vector& z, const Vector& u) {
  const Eigen::Index v = z.size() + u.size();
  Vector stacked(v);
  stacked << z, u;
  Vector y(v * (v + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < v; ++a) {
    for (Eigen::Index b = a; b < v; ++b) {
      y(k++) = stacked(a) * stacked(b);
    }
  }
  return y;
}

QFactorParams::QFactorParams(Matrix H, std::size_t state_dim)
    : H_(std::move(H)), state_dim_(state_dim) {
  if (H_.rows() != H_.cols() || static_cast<std::size_t>(H_.rows()) <= state_dim_) {
    throw ConfigError("Q-factor matrix must be square with a nonempty input block");
  }
}

Vector pack_H_to_theta(const Matrix& H) {
  if (H.rows() != H.cols()) {
    throw ConfigError("pack_H_to_theta: matrix is not square");
  }
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigError("pack_H_to_theta: matrix is not symmetric");
  }
  const Eigen::Index v = H.rows();
  Vector theta(v * (v + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < v; ++a) {
    theta(k++) = H(a, a);
    for (Eigen::Index b = a + 1; b < v; ++b) {
      theta(k++) = 2.0 * H(a, b);
    }
  }
  return theta;
}

QFactorParams unpack_theta_to_H(const Vector& theta, std::size_t state_dim, std::size_t input_dim) {
  const std::size_t v = state_dim + input_dim;
  if (static_cast<std::size_t>(theta.size()) != v * (v + 1) / 2) {
    throw ConfigError("unpack_theta_to_H: theta has length " + std::to_string(theta.size()) +
                      ", expected " + std::to_string(v * (v + 1) / 2));
  }
  const auto vi = static_cast<Eigen::Index>(v);
  Matrix H(vi, vi);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < vi; ++a) {
    H(a, a) = theta(k++);
    for (Eigen::Index b = a + 1; b < vi; ++b) {
      H(a, b) = H(b, a) = 0.5 * theta(k++);
    }
  }
  return QFactorParams(std::move(H), state_dim);
}

Vector sgd_step(const Vector& theta, const Vector& phi, double g, double alpha) {
  if (!(alpha > 0.0)) {
    throw ConfigError("SGD step size must be positive");
  }
  return theta - alpha * (theta.dot(phi) - g) * phi;
}

Vector bellman_sample(const Vector& y_t, const Vector& y_next) {
  if (y_t.size() != y_next.size()) {
    throw ConfigError("bellman_sample: basis vectors differ in length");
  }
  return y_t - y_next;
}

Matrix improve_policy(const QFactorParams& params) {
  const Matrix H22 = params.H22();
  if (!params.H().allFinite()) {
    throw NumericalError("policy improvement: Q-factor has non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> svd(H22);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (!(smallest > 0.0) || sv(0) / smallest >= kMaxH22Condition) {
    throw NumericalError("policy improvement: H22 is singular or ill-conditioned (cond = " +
                         std::to_string(smallest > 0.0 ? sv(0) / smallest
                                                       : std::numeric_limits<double>::infinity()) +
                         ")");
  }
  return H22.fullPivLu().solve(Matrix(params.H21()));
}

double bellman_residual(const Vector& theta, std::span<const BellmanSample> window) {
  if (window.empty()) {
    throw ConfigError("bellman_residual: empty window");
  }
  double sum = 0.0;
  for (const auto& s : window) {
    const double r = s.phi.dot(theta) - s.g;
    sum += r * r;
  }
  return sum / static_cast<double>(window.size());
}

double mean_squared_cost(std::span<const BellmanSample> window) {
  if (window.empty()) {
    throw ConfigError("mean_squared_cost: empty window");
  }
  double sum = 0.0;
  for (const auto& s : window) {
    sum += s.g * s.g;
  }
  return sum / static_cast<double>(window.size());
}

PersistencyReport persistency_metric(std::span<const BellmanSample> window) {
  PersistencyReport report;
  if (window.empty()) {
    report.excited = false;
    return report;
  }
  const Eigen::Index d = window.front().phi.size();
  Matrix gram = Matrix::Zero(d, d);
  for (const auto& s : window) {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(s.phi);
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  report.lambda_min = solver.eigenvalues().minCoeff();
  report.lambda_max = solver.eigenvalues().maxCoeff();
  report.samples = window.size();
  // Eigenvalue round-off scales with the largest one.
  const double floor = 1e-12 * std::max(1.0, report.lambda_max);
  report.excited = static_cast<Eigen::Index>(window.size()) >= d && report.lambda_min > floor;
  return report;
}

}  // namespace stq
