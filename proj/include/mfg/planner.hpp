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
#include <span>
#include <vector>

#include "mfg/game.hpp"

namespace mfg {

// Finite-horizon planning model: one transition row per (step, state, action)
// plus a reward table. Built either from the true game under an explicit
// per-step population action distribution, or from an agent's sampled model
// (whose rows are step-independent).
struct PlanningModel {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  double discount = 0.0;
  bool step_dependent = false;
  std::vector<double> kernels; // [(j)*S*A*S + ...] if step_dependent, else [S*A*S]
  std::vector<double> reward;  // [(s*A + a)*S + s']
  std::vector<std::vector<int>> feasible_actions; // empty = all feasible

  std::span<const double> row(int step, int s, int a) const {
    std::size_t base = (static_cast<std::size_t>(s) * num_actions + a) * num_states;
    if (step_dependent)
      base += static_cast<std::size_t>(step) * num_states * num_actions * num_states;
    return {kernels.data() + base, static_cast<std::size_t>(num_states)};
  }
  double r(int s, int a, int s2) const {
    return reward[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
  }
  double rbar(int step, int s, int a) const;
  const std::vector<int>& actions_at(int s) const;
};

// Materializes per-step mixture kernels from the true game and alpha_seq
// (one ActionDist per step).
PlanningModel make_planning_model(const GameSpec& spec,
                                  std::span<const ActionDist> alpha_seq);

/// Per-step action values Q_j(s,a), steps 0..tau-1. Infeasible entries hold
/// -infinity and are excluded from maxima.
struct QTable {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> values; // [(j*S + s)*A + a]

  double& at(int step, int s, int a) {
    return values[(static_cast<std::size_t>(step) * num_states + s) * num_actions + a];
  }
  double at(int step, int s, int a) const {
    return values[(static_cast<std::size_t>(step) * num_states + s) * num_actions + a];
  }
  double max_value(int step, int s) const;
  // Smallest action index attaining the max (lower-myopic choice).
  int greedy_action(int step, int s) const;
};

/// Deterministic oblivious policy: action(s, j) depends only on own state and
/// episode step.
struct Policy {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<int> actions; // [j*S + s]

  int& at(int step, int s) { return actions[static_cast<std::size_t>(step) * num_states + s]; }
  int at(int step, int s) const { return actions[static_cast<std::size_t>(step) * num_states + s]; }
  bool operator==(const Policy&) const = default;
};

struct ValueTable {
  int num_states = 0;
  int horizon = 0;
  std::vector<double> values; // [j*S + s]

  double& at(int step, int s) { return values[static_cast<std::size_t>(step) * num_states + s]; }
  double at(int step, int s) const { return values[static_cast<std::size_t>(step) * num_states + s]; }
};

// Exact finite-horizon dynamic programming:
//   Q_{tau-1}(s,a) = rbar(s,a)
//   Q_l(s,a)       = rbar(s,a) + gamma * sum_s' p(s'|s,a) max_a' Q_{l+1}(s',a')
QTable backward_induction(const PlanningModel& model);
QTable backward_induction(const GameSpec& spec, std::span<const ActionDist> alpha_seq);

// Greedy policy with ties broken to the smallest action index.
Policy lower_myopic_policy(const QTable& q);

// Exact evaluation of a fixed policy by the backward recursion.
ValueTable policy_value(const PlanningModel& model, const Policy& policy);
ValueTable policy_value(const GameSpec& spec, const Policy& policy,
                        std::span<const ActionDist> alpha_seq);

struct BruteForceResult {
  ValueTable optimal_value;       // pointwise max over all policies
  std::vector<Policy> optimal_set; // all policies attaining it everywhere
};

// Enumerates every deterministic oblivious policy (|A|^(|S|*tau) of them,
// capped), evaluates each exactly, and returns the pointwise-max value table
// together with the full set of policies attaining it at every (s, step)
// within 1e-12. Test oracle for backward_induction.
BruteForceResult brute_force_optimal(const PlanningModel& model,
                                     std::uint64_t enumeration_cap = 1'000'000);

}  // namespace mfg
