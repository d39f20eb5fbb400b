#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stq/excitation.hpp"
#include "stq/lti.hpp"
#include "stq/qfactor.hpp"
#include "stq/topology.hpp"
#include "stq/tracking.hpp"

namespace stq {

/// What each agent feeds into its controller and basis.
enum class ObservationMode {
  StateTracking,    // Z_i from the consensus estimator
  FullObservation,  // the true global state X
  PartialZero,      // X on the communication neighborhood, zero elsewhere
};

ObservationMode parse_mode(std::string_view text);
std::string_view mode_name(ObservationMode mode);

struct LearningSettings {
  std::size_t N = 1000;      // plant steps per policy evaluation
  double alpha = 0.01;       // SGD step
  double eps_K = 1e-4;       // stop when every ||theta_q - theta_{q-1}|| < eps_K
  std::size_t q_max = 100;   // policy improvements at most
  double divergence_guard = 1e6;
};

/// Plant and estimator state carried across evaluation windows.
struct RunState {
  GlobalState X;
  EstimateBank bank;
  std::size_t t = 0;

  static RunState initial(const GlobalState& X0, const Graph& communication,
                          std::size_t agent_state_dim);
};

/// Agent i's view of the global state under the given mode.
Vector observe(ObservationMode mode, const RunState& state, const Graph& communication,
               std::size_t agent, std::size_t agent_state_dim);

struct StepRecord {
  std::size_t t = 0;
  Vector y;
  Vector phi;
  double g = 0.0;
  Vector theta;  // after the update
};

/// Per-agent record of one evaluation window.
struct EvaluationTrace {
  std::vector<StepRecord> steps;  // only when EvaluationOptions::keep_steps
  std::vector<BellmanSample> samples;  // only when EvaluationOptions::keep_samples
  PersistencyReport persistency;
  double cumulative_cost = 0.0;
};

struct EvaluationOptions {
  bool update = true;         // false: collect data with theta frozen
  bool keep_steps = false;
  bool keep_samples = false;
};

struct EvaluationResult {
  std::vector<EvaluationTrace> traces;       // one per agent
  std::vector<double> window_end_tracking;  // ||Z_i - X|| at the last step
  double max_tracking = 0.0;                 // max over agents and steps
};

/// One policy evaluation window (N plant steps) for all agents at once.
///
/// Every step, agent i applies u_i = -K_i z_i + eta_i, the plant advances, one
/// state-tracking round runs, and theta_i moves one SGD step on
/// phi_i = y(z_i(t), u_i(t)) - y(z_i(t+1), -K_i z_i(t+1)) with target g_i(t).
/// Throws DivergenceError when ||X|| exceeds the guard or theta goes non-finite.
EvaluationResult evaluate_policy(const SystemModel& model, const TopologySpec& topology,
                                 const GainMatrix& K, ObservationMode mode, NoiseSource& noise,
                                 const LearningSettings& settings, RunState& state,
                                 std::vector<Vector>& theta, const EvaluationOptions& options = {});

enum class Termination {
  Converged,
  MaxIterations,
  Diverged,
  ImprovementFailed,
};

std::string_view termination_name(Termination reason);

struct IterationMetrics {
  std::size_t q = 0;  // 1-based policy iteration index
  std::size_t t = 0;  // plant time at the end of the window
  GainMatrix gain;    // gain after the improvement step
  std::vector<double> gain_error;  // ||K_i - K*_i||_F per agent (empty without oracle)
  double global_gain_error = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> theta_delta;
  double max_theta_delta = 0.0;
  std::vector<double> tracking_error;  // window end
  double max_tracking_error = 0.0;     // window end, max over agents
  double window_max_tracking_error = 0.0;
  std::vector<double> cumulative_cost;
  double total_cost = 0.0;
  std::vector<double> lambda_min;
  double min_lambda_min = 0.0;
  double closed_loop_radius = 0.0;
  bool diverged = false;
};

struct RunResult {
  GainMatrix initial_gain;
  GainMatrix final_gain;
  std::vector<Vector> final_theta;
  std::vector<IterationMetrics> iterations;
  std::vector<std::vector<Vector>> theta_history;  // theta at the end of each window
  Termination termination = Termination::MaxIterations;
  std::string failure;
  std::vector<std::string> warnings;
  RunState final_state;

  bool failed() const {
    return termination == Termination::Diverged || termination == Termination::ImprovementFailed;
  }
};

/// Policy iteration: evaluate with SGD, improve every agent from its own
/// theta, warm-start the next window from the previous theta.  Divergence and
/// improvement failures end the run and are reported in the result.
RunResult run_policy_iteration(const SystemModel& model, const TopologySpec& topology,
                               const GainMatrix& K1, ObservationMode mode,
                               const NoiseConfig& noise, const LearningSettings& settings,
                               const GlobalState& X0,
                               const std::optional<GainMatrix>& oracle = std::nullopt);

}  // namespace stq
