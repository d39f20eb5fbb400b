#pragma once

#include <cstddef>

#include "stq/lti.hpp"

namespace stq {

struct RiccatiOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 1'000'000;
};

struct RiccatiSolution {
  Matrix S;  // cost-to-go, X' S X
  GainMatrix K_star;
  std::size_t iterations = 0;
  double residual = 0.0;  // ||S - f(S)||_F at exit
};

/// One application of the Riccati map
///   f(S) = A'SA - A'SB (R + B'SB)^{-1} B'SA + P.
Matrix riccati_map(const SystemModel& model, const Matrix& S);

/// Fixed-point iteration of the Riccati map from S_0 = P until successive
/// iterates differ by less than the tolerance in Frobenius norm.  Throws
/// NumericalError when the cap is hit (unstabilizable or ill-conditioned).
RiccatiSolution solve_dare(const SystemModel& model, const RiccatiOptions& options = {});

/// K* = (R + B'SB)^{-1} B'SA, applied as u = -K* x.
GainMatrix optimal_gain(const SystemModel& model, const Matrix& S);

/// Closed-loop cost matrix of a fixed stabilizing gain:
///   S_K = (A-BK)' S_K (A-BK) + P + K'RK,
/// so that X(0)' S_K X(0) is the infinite-horizon cost of running u = -K x.
Matrix policy_cost_matrix(const SystemModel& model, const GainMatrix& K,
                          const RiccatiOptions& options = {});

}  // namespace stq
