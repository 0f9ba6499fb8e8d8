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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mfg/equilibrium.hpp"
#include "mfg/game.hpp"
#include "mfg/simulator.hpp"

namespace mfg {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ArtifactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  GameSpec spec;
  SimConfig config;
  std::string name;
};

// Parses and validates a JSON scenario file. The game block is either an
// explicit table spec or one of the named generators: "random",
// "security_investment", "demand_response". Throws ScenarioError naming the
// offending field.
Scenario load_scenario(const std::filesystem::path& path);

// Built-in desk-scale instances.
GameSpec make_security_investment_spec();
GameSpec make_demand_response_spec();
GameSpec make_random_spec(int num_states, int num_actions, int horizon, double discount,
                          std::uint64_t seed);

// Writes alpha_trace.csv, state_trace.csv, convergence.json, value_gap.csv,
// policy_final.csv, run_meta.json into `dir` (creating it). Deterministic
// byte-for-byte for a given run.
void export_results(const RunResult& run, const GameSpec& spec, const SimConfig& config,
                    const std::string& scenario_name, const std::filesystem::path& dir);

struct LoadedRun {
  GameSpec spec;
  SimConfig config;
  std::vector<ActionDist> alpha_hat;
  Policy final_policy;
  std::optional<int> convergence_episode;
};

// Reads back the artifacts cmd_verify needs. Throws ArtifactError when files
// are missing or malformed.
LoadedRun load_run_dir(const std::filesystem::path& dir);

}  // namespace mfg
