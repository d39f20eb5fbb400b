#include "stq/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stq/error.hpp"

namespace stq {

namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::size_t loudest_agent(const GlobalState& X, std::size_t agents, std::size_t n) {
  std::size_t worst = 0;
  double worst_norm = -1.0;
  for (std::size_t i = 0; i < agents; ++i) {
    const double v = X.segment(idx(i * n), idx(n)).norm();
    if (!(v <= worst_norm)) {  // NaN counts as loudest
      worst = i;
      worst_norm = v;
      if (std::isnan(v)) {
        break;
      }
    }
  }
  return worst;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double min_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

}  // namespace

ObservationMode parse_mode(std::string_view text) {
  if (text == "st" || text == "state_tracking") {
    return ObservationMode::StateTracking;
  }
  if (text == "full") {
    return ObservationMode::FullObservation;
  }
  if (text == "partial") {
    return ObservationMode::PartialZero;
  }
  throw ConfigError("unknown observation mode '" + std::string(text) +
                    "' (expected st, full or partial)");
}

std::string_view mode_name(ObservationMode mode) {
  switch (mode) {
    case ObservationMode::StateTracking:
      return "st";
    case ObservationMode::FullObservation:
      return "full";
    case ObservationMode::PartialZero:
      return "partial";
  }
  return "?";
}

std::string_view termination_name(Termination reason) {
  switch (reason) {
    case Termination::Converged:
      return "converged";
    case Termination::MaxIterations:
      return "max_iterations";
    case Termination::Diverged:
      return "diverged";
    case Termination::ImprovementFailed:
      return "improvement_failed";
  }
  return "?";
}

RunState RunState::initial(const GlobalState& X0, const Graph& communication,
                           std::size_t agent_state_dim) {
  RunState state;
  state.X = X0;
  state.bank = EstimateBank::initial(X0, communication, agent_state_dim);
  state.t = 0;
  return state;
}

Vector observe(ObservationMode mode, const RunState& state, const Graph& communication,
               std::size_t agent, std::size_t agent_state_dim) {
  switch (mode) {
    case ObservationMode::StateTracking:
      return state.bank.estimate(agent);
    case ObservationMode::FullObservation:
      return state.X;
    case ObservationMode::PartialZero: {
      Vector z = Vector::Zero(state.X.size());
      const auto n = idx(agent_state_dim);
      for (std::size_t j = 0; j < communication.nodes(); ++j) {
        if (communication.in_neighborhood(agent, j)) {
          z.segment(idx(j) * n, n) = state.X.segment(idx(j) * n, n);
        }
      }
      return z;
    }
  }
  throw ConfigError("unhandled observation mode");
}

EvaluationResult evaluate_policy(const SystemModel& model, const TopologySpec& topology,
                                 const GainMatrix& K, ObservationMode mode, NoiseSource& noise,
                                 const LearningSettings& settings, RunState& state,
                                 std::vector<Vector>& theta, const EvaluationOptions& options) {
  const std::size_t L = model.agents();
  const std::size_t n = model.agent_state_dim();
  const std::size_t d = theta_dim(L, n, model.agent_input_dim());
  if (theta.size() != L) {
    throw ConfigError("evaluate_policy: need one theta per agent");
  }
  for (const auto& th : theta) {
    if (static_cast<std::size_t>(th.size()) != d) {
      throw ConfigError("evaluate_policy: theta has wrong length");
    }
  }
  if (options.update && !(settings.alpha > 0.0)) {
    throw ConfigError("SGD step size must be positive");
  }
  const Graph& comm = topology.communication;

  EvaluationResult result;
  result.traces.resize(L);
  std::vector<Matrix> gram(L, Matrix::Zero(idx(d), idx(d)));
  std::vector<Vector> z(L);
  std::vector<Vector> u(L);

  for (std::size_t p = 0; p < settings.N; ++p) {
    const std::size_t decay_index =
        noise.config().decay_scope == DecayScope::PerIteration ? p : state.t;

    GlobalControl U(idx(model.input_dim()));
    for (std::size_t i = 0; i < L; ++i) {
      z[i] = observe(mode, state, comm, i, n);
      u[i] = -K.agent(i) * z[i] + noise.sample(i, state.t, decay_index);
      U.segment(idx(i * model.agent_input_dim()), idx(model.agent_input_dim())) = u[i];
    }

    GlobalState X_next = step_global(model, state.X, U);
    if (!X_next.allFinite() || X_next.norm() > settings.divergence_guard) {
      const std::size_t agent = loudest_agent(X_next, L, n);
      throw DivergenceError(state.t, agent,
                            "state norm exceeded the divergence guard at step " +
                                std::to_string(state.t) + " (agent " + std::to_string(agent + 1) +
                                ")");
    }

    RunState next;
    next.X = std::move(X_next);
    next.bank = tracking_round(state.bank, topology.W, next.X, comm);
    next.t = state.t + 1;

    for (std::size_t i = 0; i < L; ++i) {
      const double g = stage_cost(model, i, model.agent_state(state.X, i), u[i]);
      const Vector z_next = observe(mode, next, comm, i, n);
      const Vector u_next = -K.agent(i) * z_next;
      const Vector y = quadratic_basis(z[i], u[i]);
      const Vector phi = bellman_sample(y, quadratic_basis(z_next, u_next));
      if (options.update) {
        theta[i] = sgd_step(theta[i], phi, g, settings.alpha);
        if (!theta[i].allFinite()) {
          throw DivergenceError(state.t, i,
                                "Q-factor estimate became non-finite at step " +
                                    std::to_string(state.t) + " (agent " + std::to_string(i + 1) +
                                    ")");
        }
      }
      auto& trace = result.traces[i];
      trace.cumulative_cost += g;
      gram[i].selfadjointView<Eigen::Lower>().rankUpdate(phi);
      if (options.keep_samples) {
        trace.samples.push_back({phi, g});
      }
      if (options.keep_steps) {
        trace.steps.push_back({state.t, y, phi, g, theta[i]});
      }
    }

    state = std::move(next);
    result.max_tracking = std::max(result.max_tracking, max_of(tracking_error(state.bank, state.X)));
  }

  for (std::size_t i = 0; i < L; ++i) {
    const Matrix full = gram[i].selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(full, Eigen::EigenvaluesOnly);
    auto& report = result.traces[i].persistency;
    report.samples = settings.N;
    report.lambda_min = solver.eigenvalues().minCoeff();
    report.lambda_max = solver.eigenvalues().maxCoeff();
    report.excited = settings.N >= d && report.lambda_min > 1e-12 * std::max(1.0, report.lambda_max);
  }
  result.window_end_tracking = tracking_error(state.bank, state.X);
  return result;
}

RunResult run_policy_iteration(const SystemModel& model, const TopologySpec& topology,
                               const GainMatrix& K1, ObservationMode mode,
                               const NoiseConfig& noise_config, const LearningSettings& settings,
                               const GlobalState& X0, const std::optional<GainMatrix>& oracle) {
  const std::size_t L = model.agents();
  const std::size_t d = theta_dim(L, model.agent_state_dim(), model.agent_input_dim());
  validate_noise_config(noise_config, L);

  RunResult result;
  result.initial_gain = K1;
  result.final_gain = K1;
  result.final_theta.assign(L, Vector::Zero(idx(d)));
  result.final_state = RunState::initial(X0, topology.communication, model.agent_state_dim());
  if (settings.N < d) {
    result.warnings.push_back("N = " + std::to_string(settings.N) + " is below the " +
                              std::to_string(d) +
                              " Q-factor parameters: policy evaluation is underdetermined");
  }
  if (!is_stabilizing(model, K1)) {
    result.warnings.push_back("initial gain is not stabilizing");
  }

  NoiseSource noise(noise_config, model.agent_input_dim());
  RunState& state = result.final_state;
  std::vector<Vector>& theta = result.final_theta;
  GainMatrix K = K1;

  for (std::size_t q = 1; q <= settings.q_max; ++q) {
    IterationMetrics metrics;
    metrics.q = q;
    const std::vector<Vector> previous = theta;

    EvaluationResult eval;
    bool diverged = false;
    try {
      eval = evaluate_policy(model, topology, K, mode, noise, settings, state, theta);
    } catch (const DivergenceError& e) {
      diverged = true;
      result.termination = Termination::Diverged;
      result.failure = e.what();
    }

    if (diverged) {
      metrics.t = state.t;
      metrics.gain = K;
      metrics.diverged = true;
      metrics.tracking_error = tracking_error(state.bank, state.X);
      metrics.max_tracking_error = max_of(metrics.tracking_error);
      if (oracle) {
        for (std::size_t i = 0; i < L; ++i) {
          metrics.gain_error.push_back((K.agent(i) - oracle->agent(i)).norm());
        }
        metrics.global_gain_error = (K.stacked() - oracle->stacked()).norm();
      }
      metrics.closed_loop_radius = spectral_radius(closed_loop(model, K));
      result.iterations.push_back(std::move(metrics));
      break;
    }

    GainMatrix improved = K;
    bool improvement_failed = false;
    for (std::size_t i = 0; i < L; ++i) {
      try {
        const auto params =
            unpack_theta_to_H(theta[i], model.state_dim(), model.agent_input_dim());
        improved.set_agent(i, improve_policy(params));
      } catch (const NumericalError& e) {
        improvement_failed = true;
        result.termination = Termination::ImprovementFailed;
        result.failure = "agent " + std::to_string(i + 1) + ": " + e.what();
        break;
      }
    }
    if (!improvement_failed) {
      K = improved;
    }

    metrics.t = state.t;
    metrics.gain = K;
    for (std::size_t i = 0; i < L; ++i) {
      metrics.theta_delta.push_back((theta[i] - previous[i]).norm());
      metrics.cumulative_cost.push_back(eval.traces[i].cumulative_cost);
      metrics.lambda_min.push_back(eval.traces[i].persistency.lambda_min);
      if (oracle) {
        metrics.gain_error.push_back((K.agent(i) - oracle->agent(i)).norm());
      }
    }
    if (oracle) {
      metrics.global_gain_error = (K.stacked() - oracle->stacked()).norm();
    }
    metrics.max_theta_delta = max_of(metrics.theta_delta);
    metrics.tracking_error = eval.window_end_tracking;
    metrics.max_tracking_error = max_of(eval.window_end_tracking);
    metrics.window_max_tracking_error = eval.max_tracking;
    for (double c : metrics.cumulative_cost) {
      metrics.total_cost += c;
    }
    metrics.min_lambda_min = min_of(metrics.lambda_min);
    const Matrix F = closed_loop(model, K);
    metrics.closed_loop_radius = F.allFinite() ? spectral_radius(F)
                                               : std::numeric_limits<double>::infinity();

    result.iterations.push_back(std::move(metrics));
    result.theta_history.push_back(theta);

    if (improvement_failed) {
      break;
    }
    if (result.iterations.back().max_theta_delta < settings.eps_K) {
      result.termination = Termination::Converged;
      break;
    }
  }
  result.final_gain = K;
  return result;
}

}  // namespace stq
