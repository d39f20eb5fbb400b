#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "stq/lti.hpp"

namespace stq {

enum class DecayScope {
  PerIteration,  // p restarts at every policy evaluation window
  Global,        // p is the plant time step
};

/// Decaying sinusoid-plus-uniform excitation:
///   eta_i(t) = (b_i * rand(-1,1) + a_i * sum_{w=1}^{W} sin(w t)^3 cos(w t)) * c^p
struct NoiseConfig {
  std::vector<double> a;  // sinusoid amplitude per agent
  std::vector<double> b;  // uniform amplitude per agent
  double c = 0.9999;
  std::size_t omega_max = 15;
  std::uint64_t seed = 1;
  DecayScope decay_scope = DecayScope::PerIteration;

  /// Same amplitudes for every agent.
  static NoiseConfig uniform(std::size_t agents, double a, double b);
};

void validate_noise_config(const NoiseConfig& config, std::size_t agents);

/// c^p.
double decay_factor(const NoiseConfig& config, std::size_t p);

/// sum_{w=1}^{omega_max} sin(w t)^3 cos(w t).
double sinusoid_sum(std::size_t t, std::size_t omega_max);

/// Seeded excitation source owned by one run.  Draws are consumed in call
/// order, so callers must request agents in a fixed order.
class NoiseSource {
 public:
  NoiseSource(NoiseConfig config, std::size_t agent_input_dim);

  const NoiseConfig& config() const { return config_; }

  /// Length-m noise for agent i at plant step t with decay index p.  Each
  /// input coordinate gets its own uniform draw.
  Vector sample(std::size_t agent, std::size_t t, std::size_t p);

 private:
  NoiseConfig config_;
  std::size_t m_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{-1.0, 1.0};
};

/// Lower/upper excitation levels m, M of sum phi phi' over a window.
struct PersistencyReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::size_t samples = 0;
  bool excited = false;
};

}  // namespace stq
