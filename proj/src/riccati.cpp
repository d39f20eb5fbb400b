#include "stq/riccati.hpp"

#include <string>

#include "stq/error.hpp"

namespace stq {

namespace {

Matrix symmetrize(const Matrix& S) { return 0.5 * (S + S.transpose()); }

}  // namespace

Matrix riccati_map(const SystemModel& model, const Matrix& S) {
  const Matrix& A = model.A();
  const Matrix& B = model.B();
  const Matrix BtS = B.transpose() * S;
  const Matrix gram = model.R() + BtS * B;
  const Matrix AtSB = A.transpose() * BtS.transpose();
  const Matrix next = A.transpose() * S * A - AtSB * gram.ldlt().solve(BtS * A) + model.P();
  return symmetrize(next);
}

RiccatiSolution solve_dare(const SystemModel& model, const RiccatiOptions& options) {
  Matrix S = model.P();
  for (std::size_t k = 1; k <= options.max_iterations; ++k) {
    Matrix next = riccati_map(model, S);
    if (!next.allFinite()) {
      break;
    }
    const double step = (next - S).norm();
    S = std::move(next);
    if (step < options.tolerance) {
      RiccatiSolution out;
      out.residual = (riccati_map(model, S) - S).norm();
      out.iterations = k;
      out.K_star = optimal_gain(model, S);
      out.S = std::move(S);
      return out;
    }
  }
  throw NumericalError(
      "Riccati recursion did not converge: (A, B) not stabilizable or ill-conditioned");
}

GainMatrix optimal_gain(const SystemModel& model, const Matrix& S) {
  const Matrix& B = model.B();
  const Matrix gram = model.R() + B.transpose() * S * B;
  Eigen::FullPivLU<Matrix> lu(gram);
  if (!lu.isInvertible()) {
    throw NumericalError("R + B'SB is singular");
  }
  return GainMatrix(lu.solve(B.transpose() * S * model.A()), model.agent_input_dim());
}

Matrix policy_cost_matrix(const SystemModel& model, const GainMatrix& K,
                          const RiccatiOptions& options) {
  if (!is_stabilizing(model, K)) {
    throw NumericalError("policy_cost_matrix: gain is not stabilizing (rho(A-BK) = " +
                         std::to_string(spectral_radius(closed_loop(model, K))) + ")");
  }
  const Matrix F = closed_loop(model, K);
  const Matrix stage = model.P() + K.stacked().transpose() * model.R() * K.stacked();
  Matrix S = model.P();
  for (std::size_t k = 0; k < options.max_iterations; ++k) {
    Matrix next = symmetrize(F.transpose() * S * F + stage);
    const double step = (next - S).norm();
    S = std::move(next);
    if (step < options.tolerance) {
      return S;
    }
  }
  throw NumericalError("policy_cost_matrix: Lyapunov iteration did not converge");
}

}  // namespace stq
