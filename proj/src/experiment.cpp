#include "stq/experiment.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <system_error>

#include "stq/error.hpp"

namespace stq {

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.oracle = solve_dare(config.model);
  NoiseConfig noise = config.noise;
  noise.seed = config.seed;
  result.run = run_policy_iteration(config.model, config.topology, config.K1, config.mode, noise,
                                    config.learning, config.x0, result.oracle.K_star);
  return result;
}

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    throw NumericalError("could not format a double");
  }
  return std::string(buf, ptr);
}

namespace {

double at(const std::vector<double>& v, std::size_t i) {
  return i < v.size() ? v[i] : std::numeric_limits<double>::quiet_NaN();
}

void append_row(std::string& out, std::size_t q, std::size_t t, std::size_t agent,
                double gain_err, double theta_delta, double tracking, double cost,
                double lambda_min, bool diverged) {
  out += std::to_string(q);
  out += ',';
  out += std::to_string(t);
  out += ',';
  out += std::to_string(agent);
  for (double v : {gain_err, theta_delta, tracking, cost, lambda_min}) {
    out += ',';
    out += format_double(v);
  }
  out += diverged ? ",1\n" : ",0\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace

std::string metrics_csv(const std::vector<IterationMetrics>& records) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const auto& r : records) {
    append_row(out, r.q, r.t, 0, r.global_gain_error, r.max_theta_delta, r.max_tracking_error,
               r.total_cost, r.min_lambda_min, r.diverged);
    const std::size_t L = r.gain.agents();
    for (std::size_t i = 0; i < L; ++i) {
      append_row(out, r.q, r.t, i + 1, at(r.gain_error, i), at(r.theta_delta, i),
                 at(r.tracking_error, i), at(r.cumulative_cost, i), at(r.lambda_min, i),
                 r.diverged);
    }
  }
  return out;
}

std::string gains_csv(const GainMatrix& K) {
  const Matrix& M = K.stacked();
  const std::size_t m = K.agent_input_dim();
  std::string out = "agent";
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    out += ",k" + std::to_string(c + 1);
  }
  out += '\n';
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    out += std::to_string(static_cast<std::size_t>(r) / m + 1);
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      out += ',';
      out += format_double(M(r, c));
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<IterationMetrics>& records, const GainMatrix& final_gain,
              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "metrics.csv", metrics_csv(records));
  write_file(out_dir / "final_gains.csv",
             records.empty() ? gains_csv(GainMatrix(Matrix(0, final_gain.stacked().cols()),
                                                    final_gain.agent_input_dim()))
                             : gains_csv(final_gain));
}

}  // namespace stq
