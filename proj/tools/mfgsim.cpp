// Copyright 2026 The mfpsrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch driver: `mfgsim run` executes a scenario and exports traces,
// `mfgsim verify` checks the exported run for a mean-field equilibrium.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mfg/equilibrium.hpp"
#include "mfg/scenario.hpp"
#include "mfg/simulator.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 scenario invalid, 4 runtime, 5 verification failed.
constexpr int kExitUsage = 2;
constexpr int kExitScenario = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitVerifyFailed = 5;

int env_threads() {
  const char* v = std::getenv("MFPSRL_THREADS");
  if (!v) return 1;
  int t = std::atoi(v);
  return t > 0 ? t : 1;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<int> episodes, std::optional<int> agents,
            std::optional<std::uint64_t> seed, std::optional<double> epsilon,
            std::optional<int> window, bool retain_models) {
  mfg::Scenario sc;
  try {
    sc = mfg::load_scenario(scenario_path);
  } catch (const mfg::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitScenario;
  }
  if (episodes) sc.config.num_episodes = *episodes;
  if (agents) sc.config.num_agents = *agents;
  if (seed) sc.config.seed = *seed;
  if (epsilon) sc.config.convergence_epsilon = *epsilon;
  if (window) sc.config.convergence_window = *window;
  if (retain_models) sc.config.retain_models = true;
  sc.config.threads = env_threads();
  if (sc.config.num_episodes < 1 || sc.config.num_agents < 2 ||
      sc.config.convergence_window < 1 ||
      sc.config.convergence_window > sc.config.num_episodes) {
    std::cerr << "usage error: need episodes >= window >= 1 and agents >= 2\n";
    return kExitUsage;
  }

  try {
    auto start = std::chrono::steady_clock::now();
    mfg::RunResult result = mfg::run(sc.config, sc.spec);
    mfg::export_results(result, sc.spec, sc.config, sc.name, out_dir);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (result.convergence_episode)
      std::cout << "converged at episode " << *result.convergence_episode << "\n";
    else
      std::cout << "no convergence detected within " << sc.config.num_episodes
                << " episodes\n";
    std::cout << "wrote results to " << out_dir << "\n";
    std::printf("# wall time: %.2fs\n", secs);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_verify(const std::string& run_dir, double tol) {
  mfg::LoadedRun loaded;
  try {
    loaded = mfg::load_run_dir(run_dir);
  } catch (const mfg::ArtifactError& e) {
    std::cerr << "artifact error: " << e.what() << "\n";
    return kExitScenario;
  }
  try {
    mfg::MfeReport rep = mfg::verify_mfe(loaded.spec, loaded.final_policy, loaded.alpha_hat,
                                         loaded.spec.initial_dist, tol);
    std::printf("policy_in_best_response_set: %s\n",
                rep.policy_in_best_response_set ? "yes" : "no");
    std::printf("policy_gap (exploitability): %.9g\n", rep.policy_gap);
    std::printf("state_flow_residual: %.9g\n", rep.state_flow_residual);
    std::printf("induced_alpha_residual: %.9g\n", rep.induced_alpha_residual);
    std::printf("tolerance: %.9g\n", rep.tolerance);
    std::printf("mfe: %s\n", rep.is_mfe ? "PASS" : "FAIL");
    return rep.is_mfe ? 0 : kExitVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field game simulator with posterior-sampling learners"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, run_dir;
  std::optional<int> episodes, agents, window;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  bool retain_models = false;
  double tol = 0.05;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and export traces");
  run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--episodes", episodes, "Override episode count");
  run_cmd->add_option("--agents", agents, "Override agent count");
  run_cmd->add_option("--seed", seed, "Override master seed");
  run_cmd->add_option("--epsilon", epsilon, "Override convergence epsilon");
  run_cmd->add_option("--window", window, "Override convergence window");
  run_cmd->add_flag("--retain-models", retain_models,
                    "Keep per-episode sampled models for the value-gap diagnostic");

  auto* verify_cmd = app.add_subcommand("verify", "Verify an exported run for an MFE");
  verify_cmd->add_option("--run", run_dir, "Run output directory")->required();
  verify_cmd->add_option("--tol", tol, "Equilibrium tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (run_cmd->parsed())
    return cmd_run(scenario_path, out_dir, episodes, agents, seed, epsilon, window,
                   retain_models);
  return cmd_verify(run_dir, tol);
}
