#include "doctest.h"
#include "benchmark_system.hpp"
#include "stq/topology.hpp"

using namespace stq;
using namespace stq::testing;

TEST_CASE("validate_weight_matrix") {
  SUBCASE("benchmark weights on the chain") {
    const auto report = validate_weight_matrix(bench_W(), Graph::chain(4));
    CHECK(report.valid);
    CHECK(report.eta == doctest::Approx(0.2));
  }
  SUBCASE("identity has zero weight on edges") {
    CHECK_FALSE(validate_weight_matrix(Matrix::Identity(4, 4), Graph::chain(4)).valid);
  }
  SUBCASE("row sum 1.1") {
    Matrix W = bench_W();
    W(0, 0) = 0.6;
    const auto report = validate_weight_matrix(W, Graph::chain(4));
    CHECK_FALSE(report.valid);
    CHECK(report.reason.find("weight matrix not doubly stochastic") == 0);
  }
  SUBCASE("weight outside the neighborhood") {
    Matrix W = Matrix::Constant(4, 4, 0.25);
    CHECK_FALSE(validate_weight_matrix(W, Graph::chain(4)).valid);
    CHECK(validate_weight_matrix(W, Graph::complete(4)).valid);
  }
  SUBCASE("negative entry") {
    Matrix W = bench_W();
    W(0, 0) = 1.5;
    W(0, 1) = -0.5;
    W(1, 1) = 1.3;
    W(1, 0) = -0.5;
    CHECK_FALSE(validate_weight_matrix(W, Graph::chain(4)).valid);
  }
}

TEST_CASE("is_connected") {
  CHECK(is_connected(Graph::chain(4)));
  CHECK_FALSE(is_connected(Graph::empty(4)));
  CHECK(is_connected(Graph::complete(4)));
  CHECK_FALSE(is_connected(Graph(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("graph neighborhoods") {
  const Graph chain = Graph::chain(4);
  CHECK(chain.in_neighborhood(1, 1));
  CHECK(chain.in_neighborhood(1, 2));
  CHECK_FALSE(chain.in_neighborhood(0, 2));
  CHECK(chain.neighborhood(1) == std::vector<std::size_t>{0, 1, 2});
  CHECK(Graph(3, {{1, 1}}).edges().empty());
  CHECK(Graph::from_support(bench_W()).edges() == chain.edges());
}

TEST_CASE("respects_interconnection") {
  const auto model = bench_model();
  CHECK(respects_interconnection(model, Graph::complete(4)));
  CHECK_FALSE(respects_interconnection(model, Graph::chain(4)));
}

TEST_CASE("consensus_contraction") {
  const double rate = consensus_contraction(bench_W());
  CHECK(rate > 0.0);
  CHECK(rate < 1.0);
  CHECK(consensus_contraction(Matrix::Constant(4, 4, 0.25)) == doctest::Approx(0.0));
}
