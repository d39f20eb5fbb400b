#include "stq/excitation.hpp"

#include <cmath>

#include "stq/error.hpp"

namespace stq {

NoiseConfig NoiseConfig::uniform(std::size_t agents, double a, double b) {
  NoiseConfig config;
  config.a.assign(agents, a);
  config.b.assign(agents, b);
  return config;
}

void validate_noise_config(const NoiseConfig& config, std::size_t agents) {
  if (config.a.size() != agents || config.b.size() != agents) {
    throw ConfigError("noise amplitudes must be given for each of the " + std::to_string(agents) +
                      " agents");
  }
  for (std::size_t i = 0; i < agents; ++i) {
    if (!(config.a[i] >= 0.0) || !(config.b[i] >= 0.0)) {
      throw ConfigError("noise amplitudes must be nonnegative");
    }
  }
  if (!(config.c > 0.0 && config.c <= 1.0)) {
    throw ConfigError("noise decay base c must lie in (0, 1]");
  }
}

double decay_factor(const NoiseConfig& config, std::size_t p) {
  return std::pow(config.c, static_cast<double>(p));
}

double sinusoid_sum(std::size_t t, std::size_t omega_max) {
  const auto tt = static_cast<double>(t);
  double sum = 0.0;
  for (std::size_t w = 1; w <= omega_max; ++w) {
    const double arg = static_cast<double>(w) * tt;
    const double s = std::sin(arg);
    sum += s * s * s * std::cos(arg);
  }
  return sum;
}

NoiseSource::NoiseSource(NoiseConfig config, std::size_t agent_input_dim)
    : config_(std::move(config)), m_(agent_input_dim), rng_(config_.seed) {}

Vector NoiseSource::sample(std::size_t agent, std::size_t t, std::size_t p) {
  const double a = config_.a.at(agent);
  const double b = config_.b.at(agent);
  const double periodic = a * sinusoid_sum(t, config_.omega_max);
  const double envelope = decay_factor(config_, p);
  Vector eta(static_cast<Eigen::Index>(m_));
  for (Eigen::Index k = 0; k < eta.size(); ++k) {
    eta(k) = (b * uniform_(rng_) + periodic) * envelope;
  }
  return eta;
}

}  // namespace stq
