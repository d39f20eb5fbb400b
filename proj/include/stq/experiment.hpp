#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stq/config.hpp"
#include "stq/learner.hpp"
#include "stq/riccati.hpp"

namespace stq {

struct ExperimentResult {
  RiccatiSolution oracle;
  RunResult run;
};

/// Solves the Riccati oracle once, then runs policy iteration with metrics
/// measured against it.  Divergence and improvement failures are carried in
/// the result.
ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr const char* kMetricsHeader =
    "q,t,agent,gain_err,theta_delta,tracking_err,cum_cost,lambda_min,diverged";

/// CSV text for the metrics table.  Per iteration: the global row (agent 0)
/// then agents 1..L.
std::string metrics_csv(const std::vector<IterationMetrics>& records);

/// CSV text for a gain, one row per agent input, columns k1..k{Ln}.
std::string gains_csv(const GainMatrix& K);

/// Writes metrics.csv and final_gains.csv into out_dir (created if missing).
void emit_csv(const std::vector<IterationMetrics>& records, const GainMatrix& final_gain,
              const std::filesystem::path& out_dir);

/// Shortest decimal that round-trips the double.
std::string format_double(double v);

}  // namespace stq
