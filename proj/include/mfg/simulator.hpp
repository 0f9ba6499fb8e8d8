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

#include <cstdint>
#include <optional>
#include <vector>

#include "mfg/game.hpp"
#include "mfg/learner.hpp"
#include "mfg/planner.hpp"

namespace mfg {

struct SimConfig {
  int num_agents = 2;
  int num_episodes = 1;
  std::uint64_t seed = 0;
  double convergence_epsilon = 0.05;
  int convergence_window = 10;
  double prior_strength = 1.0;
  bool reward_learning = false;
  bool retain_models = false;   // keep agent 0's sampled model and policy per episode
  bool carry_over_states = false; // states persist across episode boundaries
  int threads = 1;              // planning-phase parallelism
};

struct RunResult {
  // alpha_trace[k][j], state_dist_trace[k][j]; episodes and steps 0-based here,
  // 1-based in exports.
  std::vector<std::vector<ActionDist>> alpha_trace;
  std::vector<std::vector<StateDist>> state_dist_trace;
  std::vector<Policy> policy_trace; // agent 0's policy per episode
  std::vector<double> mean_return;  // per-episode mean discounted return over agents
  std::optional<int> convergence_episode; // 1-based K_epsilon
  std::vector<ActionDist> alpha_hat; // per-step average over the final window
  std::vector<StateDist> f_hat;
  Policy final_policy;       // agent 0's last policy
  int final_policy_agreement = 0; // agents whose last policy equals final_policy
  std::vector<SampledModel> sampled_models; // agent 0, when retain_models
};

struct AgentEpisodeLog {
  std::vector<StepRecord> steps;
};

struct EpisodeResult {
  std::vector<ActionDist> alpha;   // per step, over the full population
  std::vector<StateDist> state_dist;
  std::vector<AgentEpisodeLog> logs; // per agent
};

// One synchronous episode: at each step every agent picks its greedy action
// from its own Q-table, the empirical action distribution over all n agents
// is formed, and every agent transitions through the true coupled kernel.
// Policies are frozen for the whole episode. `states` is updated in place;
// `rngs` holds one exclusive stream per agent.
EpisodeResult run_episode(const GameSpec& spec, const std::vector<QTable>& q_tables,
                          std::vector<int>& states, std::vector<Rng>& rngs);

// Full learning run: n posterior-sampling agents, K episodes, fully
// reproducible from config.seed.
RunResult run(const SimConfig& config, const GameSpec& spec);

// Smallest 1-based episode k such that every episode in (k, k+W] stays within
// epsilon (per-step L1) of episode k.
std::optional<int> detect_convergence(const std::vector<std::vector<ActionDist>>& alpha_trace,
                                      double epsilon, int window);

}  // namespace mfg
