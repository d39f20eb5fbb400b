#include <cmath>

#include "doctest.h"
#include "stq/error.hpp"
#include "stq/excitation.hpp"

using namespace stq;

TEST_CASE("decay_factor") {
  NoiseConfig config = NoiseConfig::uniform(1, 1.0, 1.0);
  CHECK(decay_factor(config, 0) == 1.0);
  CHECK(decay_factor(config, 1000) == doctest::Approx(0.9048328935585562).epsilon(1e-14));
  config.c = 1.0;
  CHECK(decay_factor(config, 12345) == 1.0);
}

TEST_CASE("sinusoid_sum") {
  CHECK(sinusoid_sum(0, 15) == 0.0);
  // Fifteen-term sum at t = 1, evaluated offline.
  CHECK(sinusoid_sum(1, 15) == doctest::Approx(0.01927385753520411).epsilon(1e-12));
}

TEST_CASE("NoiseSource") {
  SUBCASE("zero amplitudes give zero noise") {
    NoiseSource source(NoiseConfig::uniform(2, 0.0, 0.0), 1);
    for (std::size_t t = 0; t < 20; ++t) {
      CHECK(source.sample(t % 2, t, t)(0) == 0.0);
    }
  }
  SUBCASE("no uniform part at t = 0 is zero") {
    NoiseSource source(NoiseConfig::uniform(1, 1.0, 0.0), 1);
    CHECK(source.sample(0, 0, 0)(0) == 0.0);
  }
  SUBCASE("sinusoid only, t = 1, p = 0") {
    NoiseSource source(NoiseConfig::uniform(1, 1.0, 0.0), 1);
    CHECK(source.sample(0, 1, 0)(0) == doctest::Approx(0.01927385753520411).epsilon(1e-12));
  }
  SUBCASE("decay multiplies the whole signal") {
    NoiseSource a(NoiseConfig::uniform(1, 0.3, 0.5), 1);
    NoiseSource b(NoiseConfig::uniform(1, 0.3, 0.5), 1);
    const double undecayed = a.sample(0, 4, 0)(0);
    const double decayed = b.sample(0, 4, 1000)(0);
    CHECK(decayed == doctest::Approx(undecayed * std::pow(0.9999, 1000)));
  }
  SUBCASE("uniform part stays within its amplitude") {
    NoiseSource source(NoiseConfig::uniform(1, 0.0, 0.7), 3);
    for (std::size_t t = 0; t < 500; ++t) {
      CHECK(source.sample(0, t, 0).cwiseAbs().maxCoeff() <= 0.7);
    }
  }
  SUBCASE("same seed, same sequence; different seed, different sequence") {
    NoiseConfig config = NoiseConfig::uniform(2, 0.05, 0.7);
    config.seed = 42;
    NoiseSource a(config, 1);
    NoiseSource b(config, 1);
    config.seed = 43;
    NoiseSource c(config, 1);
    bool differs = false;
    for (std::size_t t = 0; t < 100; ++t) {
      const double va = a.sample(t % 2, t, t)(0);
      CHECK(va == b.sample(t % 2, t, t)(0));
      differs = differs || va != c.sample(t % 2, t, t)(0);
    }
    CHECK(differs);
  }
}

TEST_CASE("validate_noise_config") {
  CHECK_NOTHROW(validate_noise_config(NoiseConfig::uniform(4, 0.01, 0.001), 4));
  CHECK_THROWS_AS(validate_noise_config(NoiseConfig::uniform(3, 0.01, 0.001), 4), ConfigError);
  CHECK_THROWS_AS(validate_noise_config(NoiseConfig::uniform(4, -0.01, 0.001), 4), ConfigError);
  NoiseConfig growing = NoiseConfig::uniform(4, 0.01, 0.001);
  growing.c = 1.01;
  CHECK_THROWS_AS(validate_noise_config(growing, 4), ConfigError);
}
