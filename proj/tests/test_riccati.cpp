#include <random>

#include "doctest.h"
#include "benchmark_system.hpp"
#include "stq/error.hpp"
#include "stq/riccati.hpp"

using namespace stq;
using namespace stq::testing;

namespace {

// Sum of stage costs of u = -K x from X0 over T steps.
double rollout_cost(const SystemModel& model, const GainMatrix& K, Vector X, int T) {
  double total = 0.0;
  for (int t = 0; t < T; ++t) {
    const Vector U = -K.stacked() * X;
    total += X.dot(model.P() * X) + U.dot(model.R() * U);
    X = step_global(model, X, U);
  }
  return total;
}

}  // namespace

TEST_CASE("solve_dare trivial fixed point") {
  const auto model = scalar_network(Matrix::Zero(3, 3));
  const auto sol = solve_dare(model);
  CHECK(sol.S.isApprox(Matrix::Identity(3, 3)));
  CHECK(sol.K_star.stacked().isZero());
  CHECK(optimal_gain(model, Matrix::Identity(3, 3)).stacked().isZero());
}

TEST_CASE("scalar Riccati equation") {
  // s^2 - 0.25 s - 1 = 0 for a = 0.5, b = p = r = 1.
  const auto model = scalar_network(Matrix::Constant(1, 1, 0.5));
  const auto sol = solve_dare(model);
  CHECK(sol.S(0, 0) == doctest::Approx(1.1327822185373186).epsilon(1e-9));
  CHECK(sol.K_star.stacked()(0, 0) == doctest::Approx(0.2655644370746374).epsilon(1e-9));
  CHECK(sol.residual < 1e-10);
}

TEST_CASE("benchmark optimal gain matches the reference matrix") {
  const auto sol = solve_dare(bench_model());
  const Matrix diff = sol.K_star.stacked() - reference_K_star();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("unstabilizable pair is reported") {
  // Agent 2 has no actuation and an unstable mode.
  std::vector<Matrix> B = {Matrix::Ones(1, 1), Matrix::Zero(1, 1)};
  Matrix A(2, 2);
  A << 0.5, 0.0, 0.0, 1.5;
  SystemModel model(2, 1, 1, A, B, scalar_blocks(2, 1), scalar_blocks(2, 1));
  CHECK_THROWS_AS(solve_dare(model, {1e-10, 10000}), NumericalError);
}

TEST_CASE("policy_cost_matrix") {
  SUBCASE("zero drift and gain cost only the first step") {
    const auto model = scalar_network(Matrix::Zero(2, 2));
    CHECK(policy_cost_matrix(model, GainMatrix::zero(model)).isApprox(model.P()));
  }
  SUBCASE("rejects an unstable gain") {
    const auto model = bench_model();
    CHECK_THROWS_AS(policy_cost_matrix(model, GainMatrix(dense_K1(), 1)), NumericalError);
  }
  SUBCASE("matches a long rollout") {
    const auto model = bench_model();
    const Vector X0 = Vector::Constant(4, 0.01);
    for (const GainMatrix& K : {GainMatrix(reference_K_star(), 1), GainMatrix::zero(model)}) {
      const Matrix S = policy_cost_matrix(model, K);
      const double lyap = X0.dot(S * X0);
      CHECK(std::abs(rollout_cost(model, K, X0, 10000) - lyap) <= 1e-6 * lyap);
    }
  }
  SUBCASE("optimal gain has the least cost") {
    const auto model = bench_model();
    const auto sol = solve_dare(model);
    const Matrix S_star = policy_cost_matrix(model, sol.K_star);
    CHECK(S_star.isApprox(sol.S, 1e-8));
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    const GainMatrix other(reference_K_star() * 0.5, 1);
    const Matrix S_other = policy_cost_matrix(model, other);
    for (int k = 0; k < 20; ++k) {
      Vector X(4);
      for (int i = 0; i < 4; ++i) {
        X(i) = normal(rng);
      }
      CHECK(X.dot(S_star * X) <= X.dot(S_other * X) + 1e-12);
    }
  }
}
