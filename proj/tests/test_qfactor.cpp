#include <random>
#include <vector>

#include "doctest.h"
#include "benchmark_system.hpp"
#include "stq/error.hpp"
#include "stq/qfactor.hpp"
#include "stq/riccati.hpp"

using namespace stq;
using namespace stq::testing;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) {
    v(k++) = x;
  }
  return v;
}

Matrix random_symmetric(std::mt19937_64& rng, Eigen::Index size) {
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  Matrix M(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i; j < size; ++j) {
      M(i, j) = M(j, i) = uni(rng);
    }
  }
  return M;
}

}  // namespace

TEST_CASE("theta_dim") {
  CHECK(theta_dim(4, 1, 1) == 15);
  CHECK(theta_dim(1, 1, 1) == 3);
  CHECK(theta_dim(2, 2, 1) == 15);
}

TEST_CASE("quadratic_basis") {
  CHECK(quadratic_basis(Vector::Zero(1), Vector::Zero(1)).isZero());
  CHECK(quadratic_basis(vec({2}), vec({3})) == vec({4, 6, 9}));
  CHECK(quadratic_basis(vec({1, 2}), vec({3})) == vec({1, 2, 3, 4, 6, 9}));
}

TEST_CASE("pack_H_to_theta") {
  CHECK(pack_H_to_theta(Matrix::Identity(3, 3)) == vec({1, 0, 0, 1, 0, 1}));
  Matrix H(2, 2);
  H << 1, 2, 2, 5;
  CHECK(pack_H_to_theta(H) == vec({1, 4, 5}));
  CHECK(pack_H_to_theta(Matrix::Zero(3, 3)).isZero());
  Matrix asym = H;
  asym(0, 1) = 3;
  CHECK_THROWS_AS(pack_H_to_theta(asym), ConfigError);
}

TEST_CASE("unpack_theta_to_H") {
  const auto params = unpack_theta_to_H(vec({1, 4, 5}), 1, 1);
  Matrix H(2, 2);
  H << 1, 2, 2, 5;
  CHECK(params.H() == H);
  CHECK(params.H22()(0, 0) == 5.0);
  CHECK(params.H21()(0, 0) == 2.0);
  CHECK(unpack_theta_to_H(Vector::Zero(3), 1, 1).H().isZero());
  CHECK_THROWS_AS(unpack_theta_to_H(Vector::Zero(4), 1, 1), ConfigError);
}

TEST_CASE("sgd_step") {
  const Vector theta = vec({1, 4, 5});
  const Vector phi = vec({1, 1, 1});
  CHECK(sgd_step(theta, phi, 10.0, 0.01) == theta);
  CHECK(sgd_step(Vector::Zero(3), Vector::Unit(3, 0), 1.0, 0.01).isApprox(0.01 * Vector::Unit(3, 0)));
  CHECK(sgd_step(theta, Vector::Zero(3), 7.0, 0.01) == theta);
  CHECK_THROWS_AS(sgd_step(theta, phi, 1.0, 0.0), ConfigError);
}

TEST_CASE("bellman_sample") {
  const Vector y = vec({4, 6, 9});
  CHECK(bellman_sample(y, y).isZero());
  CHECK(bellman_sample(y, vec({1, 2, 1})) == vec({3, 4, 8}));
  CHECK(bellman_sample(y, Vector::Zero(3)) == y);
}

TEST_CASE("improve_policy") {
  CHECK(improve_policy(unpack_theta_to_H(vec({1, 0, 3}), 1, 1)).isZero());
  Matrix H(2, 2);
  H << 1, 1, 1, 2;
  CHECK(improve_policy(QFactorParams(H, 1))(0, 0) == doctest::Approx(0.5));
  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1;
  CHECK_THROWS_AS(improve_policy(QFactorParams(singular, 1)), NumericalError);
}

TEST_CASE("true Q-factor of the optimal policy recovers the optimal gain") {
  // H = [[P + A'SA, A'SB_i], [B_i'SA, R_i + B_i'SB_i]] for agent i acting
  // alone with the others following K*.
  const auto model = bench_model();
  const auto sol = solve_dare(model);
  const Matrix& S = sol.S;
  for (std::size_t i = 0; i < 4; ++i) {
    const Matrix Bi = model.B().col(static_cast<Eigen::Index>(i));
    Matrix others = sol.K_star.stacked();
    others.row(static_cast<Eigen::Index>(i)).setZero();
    const Matrix F = model.A() - model.B() * others;
    Matrix H(5, 5);
    H.topLeftCorner(4, 4) = model.P() + others.transpose() * model.R() * others + F.transpose() * S * F;
    H.topRightCorner(4, 1) = F.transpose() * S * Bi;
    H.bottomLeftCorner(1, 4) = Bi.transpose() * S * F;
    H.bottomRightCorner(1, 1) = model.R_block(i) + Bi.transpose() * S * Bi;
    const Matrix Ki = improve_policy(unpack_theta_to_H(pack_H_to_theta(H), 4, 1));
    CHECK((Ki - reference_K_star().row(static_cast<Eigen::Index>(i))).cwiseAbs().maxCoeff() < 1e-2);
  }
}

TEST_CASE("bellman_residual and mean_squared_cost") {
  std::vector<BellmanSample> window = {{vec({1, 0, 0}), 2.0}, {vec({0, 1, 0}), 3.0}};
  CHECK(bellman_residual(vec({2, 3, 0}), window) < 1e-18);
  CHECK(bellman_residual(Vector::Zero(3), window) == doctest::Approx(6.5));
  CHECK(mean_squared_cost(window) == doctest::Approx(6.5));
}

TEST_CASE("persistency_metric") {
  std::vector<BellmanSample> rank_one(10, BellmanSample{Vector::Unit(3, 0), 0.0});
  const auto flat = persistency_metric(rank_one);
  CHECK(flat.lambda_min == doctest::Approx(0.0));
  CHECK_FALSE(flat.excited);

  std::vector<BellmanSample> cycling;
  const int k = 4;
  for (int rep = 0; rep < k; ++rep) {
    for (int j = 0; j < 15; ++j) {
      cycling.push_back({Vector::Unit(15, j), 0.0});
    }
  }
  const auto full = persistency_metric(cycling);
  CHECK(full.lambda_min == doctest::Approx(k));
  CHECK(full.lambda_max == doctest::Approx(k));
  CHECK(full.excited);
}

TEST_CASE("basis reproduces the quadratic form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index sd = 1 + trial % 5;
    const Eigen::Index id = 1 + trial % 2;
    const Matrix H = random_symmetric(rng, sd + id);
    Vector z(sd);
    Vector u(id);
    for (Eigen::Index k = 0; k < sd; ++k) {
      z(k) = uni(rng);
    }
    for (Eigen::Index k = 0; k < id; ++k) {
      u(k) = uni(rng);
    }
    Vector v(sd + id);
    v << z, u;
    const double quad = v.dot(H * v);
    const double lin = quadratic_basis(z, u).dot(pack_H_to_theta(H));
    CHECK(std::abs(lin - quad) <= 1e-12 * std::max(1.0, std::abs(quad)));
    CHECK(unpack_theta_to_H(pack_H_to_theta(H), static_cast<std::size_t>(sd),
                            static_cast<std::size_t>(id)).H() == H);
  }
}

TEST_CASE("packing is linear") {
  std::mt19937_64 rng(5);
  const Matrix H1 = random_symmetric(rng, 4);
  const Matrix H2 = random_symmetric(rng, 4);
  CHECK(pack_H_to_theta(2.5 * H1 - H2).isApprox(2.5 * pack_H_to_theta(H1) - pack_H_to_theta(H2)));
}

TEST_CASE("SGD contracts toward a consistent target") {
  // With g = phi' theta_true and alpha ||phi||^2 < 2, every step moves theta
  // closer to theta_true.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Vector truth(6);
  for (int k = 0; k < 6; ++k) {
    truth(k) = uni(rng);
  }
  Vector theta = Vector::Zero(6);
  for (int step = 0; step < 200; ++step) {
    Vector phi(6);
    for (int k = 0; k < 6; ++k) {
      phi(k) = uni(rng);
    }
    const double before = (theta - truth).norm();
    theta = sgd_step(theta, phi, phi.dot(truth), 0.1);
    CHECK((theta - truth).norm() <= before + 1e-15);
  }
}
