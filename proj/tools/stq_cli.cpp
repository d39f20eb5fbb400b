// Command-line driver: seeded runs, parameter sweeps and the Riccati oracle.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stq/config.hpp"
#include "stq/error.hpp"
#include "stq/experiment.hpp"

namespace {

struct RunOptions {
  std::string config;
  std::string mode;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string out_dir = "out";
  std::size_t max_iters = 0;
  std::string sweep;
};

stq::ConfigEntries read_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw stq::ConfigError("cannot open configuration file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return stq::parse_config_text(buffer.str());
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    parts.push_back(part);
  }
  return parts;
}

struct Outcome {
  std::string label;
  std::string summary;
  std::vector<std::string> warnings;
  bool failed = false;
};

Outcome execute(const stq::ConfigEntries& entries, const std::filesystem::path& out_dir,
                const std::string& label) {
  Outcome outcome;
  outcome.label = label;
  const auto config = stq::build_config(entries);
  const auto result = stq::run_experiment(config);
  stq::emit_csv(result.run.iterations, result.run.final_gain, out_dir);

  outcome.warnings = result.run.warnings;
  outcome.failed = result.run.failed();
  std::ostringstream s;
  s << (label.empty() ? "" : label + ": ") << "mode=" << stq::mode_name(config.mode)
    << " iterations=" << result.run.iterations.size()
    << " termination=" << stq::termination_name(result.run.termination);
  if (!result.run.iterations.empty()) {
    s << " gain_err=" << stq::format_double(result.run.iterations.back().global_gain_error);
  }
  if (!result.run.failure.empty()) {
    s << " (" << result.run.failure << ")";
  }
  s << " -> " << out_dir.string();
  outcome.summary = s.str();
  return outcome;
}

int run_command(const RunOptions& opt) {
  stq::ConfigEntries entries = read_entries(opt.config);
  if (!opt.mode.empty()) {
    entries["learning.mode"] = opt.mode;
  }
  if (opt.seed_set) {
    entries["run.seed"] = std::to_string(opt.seed);
  }
  if (opt.max_iters > 0) {
    entries["learning.q_max"] = std::to_string(opt.max_iters);
  }
  entries.erase("run.out_dir");

  std::vector<Outcome> outcomes;
  if (opt.sweep.empty()) {
    outcomes.push_back(execute(entries, opt.out_dir, ""));
  } else {
    const auto eq = opt.sweep.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == opt.sweep.size()) {
      throw stq::ConfigError("--sweep expects <param>=<v1,v2,...>");
    }
    const std::string param = opt.sweep.substr(0, eq);
    const std::string key = stq::canonical_key(param);
    const auto values = split(opt.sweep.substr(eq + 1), ',');
    std::vector<std::future<Outcome>> jobs;
    for (const auto& value : values) {
      stq::ConfigEntries variant = entries;
      variant[key] = value;
      const std::string label = param + "=" + value;
      const std::filesystem::path dir = std::filesystem::path(opt.out_dir) / (param + "_" + value);
      jobs.push_back(std::async(std::launch::async, [variant, dir, label] {
        return execute(variant, dir, label);
      }));
    }
    for (auto& job : jobs) {
      outcomes.push_back(job.get());
    }
  }

  int status = 0;
  for (const auto& o : outcomes) {
    for (const auto& w : o.warnings) {
      std::cerr << "warning: " << (o.label.empty() ? "" : o.label + ": ") << w << "\n";
    }
    std::cout << o.summary << "\n";
    if (o.failed) {
      status = 3;
    }
  }
  return status;
}

int riccati_command(const std::string& path) {
  const auto config = stq::load_config(path);
  const auto sol = stq::solve_dare(config.model);
  std::cout << "iterations " << sol.iterations << "\n";
  std::cout << stq::gains_csv(sol.K_star);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed Q-learning for networked LQR with consensus state tracking"};
  app.require_subcommand(1);

  RunOptions opt;
  auto* run = app.add_subcommand("run", "run policy iteration and write CSV metrics");
  run->add_option("--config", opt.config, "configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", opt.mode, "observation mode")
      ->check(CLI::IsMember({"st", "full", "partial"}));
  auto* seed = run->add_option("--seed", opt.seed, "PRNG seed");
  run->add_option("--out-dir", opt.out_dir, "output directory");
  run->add_option("--max-iters", opt.max_iters, "cap on policy iterations");
  run->add_option("--sweep", opt.sweep, "param=v1,v2,... (N, alpha, c, a, b, seed, or section.key)");

  std::string riccati_config;
  auto* riccati = app.add_subcommand("riccati", "print the optimal gain for a configuration");
  riccati->add_option("--config", riccati_config, "configuration file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  opt.seed_set = seed->count() > 0;

  try {
    if (*run) {
      return run_command(opt);
    }
    return riccati_command(riccati_config);
  } catch (const stq::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
