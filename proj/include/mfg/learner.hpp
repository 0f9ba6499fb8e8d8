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

#include <vector>

#include "mfg/game.hpp"
#include "mfg/planner.hpp"
#include "mfg/rng.hpp"

namespace mfg {

struct StepRecord {
  int state;
  int action;
  double reward;
  int next_state;
};

/// Append-only per-agent observation log.
using History = std::vector<StepRecord>;

// Dirichlet posterior over each transition row p(.|s,a), conditioned on the
// agent's own observations only (the population action is marginalized into
// the counts). Optionally pins deterministic rewards at first observation.
class Belief {
 public:
  Belief(int num_states, int num_actions, double prior_strength);

  void update(int s, int a, double r, int next_state);
  void update(const StepRecord& rec) { update(rec.state, rec.action, rec.reward, rec.next_state); }

  double count(int s, int a, int s2) const {
    return counts_[index(s, a, s2)];
  }
  std::span<const double> count_row(int s, int a) const {
    return {counts_.data() + index(s, a, 0), static_cast<std::size_t>(num_states_)};
  }
  std::vector<double> posterior_mean(int s, int a) const;

  bool reward_observed(int s, int a, int s2) const { return reward_seen_[index(s, a, s2)]; }
  double reward_estimate(int s, int a, int s2) const;

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double prior_strength() const { return prior_strength_; }

 private:
  std::size_t index(int s, int a, int s2) const {
    return (static_cast<std::size_t>(s) * num_actions_ + a) * num_states_ + s2;
  }
  int num_states_;
  int num_actions_;
  double prior_strength_;
  std::vector<double> counts_;
  std::vector<double> reward_values_;
  std::vector<char> reward_seen_;
};

/// One posterior draw of the full transition model, ready for planning.
struct SampledModel {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  double discount = 0.0;
  std::vector<double> rows;   // p_hat(s'|s,a), flattened [(s*A + a)*S + s']
  std::vector<double> reward; // true table, or belief estimate

  PlanningModel planning_model(const std::vector<std::vector<int>>& feasible = {}) const;
};

// Draws each row independently from Dirichlet(counts). Never mutates the
// belief. Rewards come from the true spec unless learn_rewards is set, in
// which case unobserved triples fall back to the 0.5 prior mean.
SampledModel sample_model(const Belief& belief, const GameSpec& spec_skeleton, Rng& rng,
                          bool learn_rewards = false);

// Greedy action at (s, step), smallest maximizing index. Same choice as
// lower_myopic_policy(q).at(step, s).
int act(const QTable& q, int s, int step);

}  // namespace mfg
