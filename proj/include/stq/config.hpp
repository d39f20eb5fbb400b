#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "stq/excitation.hpp"
#include "stq/learner.hpp"
#include "stq/lti.hpp"
#include "stq/topology.hpp"

namespace stq {

/// Everything needed to reproduce one learning run.
struct ExperimentConfig {
  SystemModel model;
  TopologySpec topology;
  GainMatrix K1;
  GlobalState x0;
  NoiseConfig noise;
  LearningSettings learning;
  ObservationMode mode = ObservationMode::StateTracking;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

/// Raw `section.key = value` pairs, in key order.
using ConfigEntries = std::map<std::string, std::string>;

/// Parses the line-oriented format:
///
///     # comment
///     system.A = [[0.2, 0.4], [0.4, 0.2]]
///     learning.N = 1000
///
/// Matrices are bracketed lists of rows, vectors a single bracketed list.
/// Throws ConfigError on malformed lines, duplicate keys or an empty input.
ConfigEntries parse_config_text(const std::string& text);

/// Builds and validates a config.  Missing optional keys take defaults; any
/// failed check throws ConfigError naming the violated condition.
ExperimentConfig build_config(const ConfigEntries& entries);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs every model/topology/learning check; throws ConfigError on failure.
void validate_config(const ExperimentConfig& config);

/// Shorthand names accepted by sweeps (e.g. "N" -> "learning.N").
std::string canonical_key(const std::string& key);

}  // namespace stq
