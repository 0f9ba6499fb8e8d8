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

#include "mfg/learner.hpp"

#include <algorithm>
#include <stdexcept>

namespace mfg {

Belief::Belief(int num_states, int num_actions, double prior_strength)
    : num_states_(num_states),
      num_actions_(num_actions),
      prior_strength_(prior_strength) {
  if (num_states < 1 || num_actions < 1)
    throw std::invalid_argument("belief dimensions must be positive");
  if (!(prior_strength > 0.0))
    throw std::invalid_argument("prior strength must be positive");
  std::size_t n = static_cast<std::size_t>(num_states) * num_actions * num_states;
  counts_.assign(n, prior_strength);
  reward_values_.assign(n, 0.0);
  reward_seen_.assign(n, 0);
}

void Belief::update(int s, int a, double r, int next_state) {
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("reward out of [0,1]");
  std::size_t i = index(s, a, next_state);
  counts_[i] += 1.0;
  if (!reward_seen_[i]) {
    reward_values_[i] = r;
    reward_seen_[i] = 1;
  }
}

std::vector<double> Belief::posterior_mean(int s, int a) const {
  auto row = count_row(s, a);
  std::vector<double> mean(row.begin(), row.end());
  double total = 0.0;
  for (double c : mean) total += c;
  for (double& c : mean) c /= total;
  return mean;
}

double Belief::reward_estimate(int s, int a, int s2) const {
  std::size_t i = index(s, a, s2);
  return reward_seen_[i] ? reward_values_[i] : 0.5;
}

PlanningModel SampledModel::planning_model(const std::vector<std::vector<int>>& feasible) const {
  PlanningModel m;
  m.num_states = num_states;
  m.num_actions = num_actions;
  m.horizon = horizon;
  m.discount = discount;
  m.step_dependent = false;
  m.kernels = rows;
  m.reward = reward;
  m.feasible_actions = feasible;
  return m;
}

SampledModel sample_model(const Belief& belief, const GameSpec& spec_skeleton, Rng& rng,
                          bool learn_rewards) {
  const int S = belief.num_states();
  const int A = belief.num_actions();
  SampledModel m;
  m.num_states = S;
  m.num_actions = A;
  m.horizon = spec_skeleton.horizon;
  m.discount = spec_skeleton.discount;
  m.rows.resize(static_cast<std::size_t>(S) * A * S);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      auto row = sample_dirichlet(belief.count_row(s, a), rng);
      std::copy(row.begin(), row.end(),
                m.rows.begin() + (static_cast<std::size_t>(s) * A + a) * S);
    }
  if (learn_rewards) {
    m.reward.resize(static_cast<std::size_t>(S) * A * S);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        for (int s2 = 0; s2 < S; ++s2)
          m.reward[(static_cast<std::size_t>(s) * A + a) * S + s2] =
              belief.reward_estimate(s, a, s2);
  } else {
    m.reward = spec_skeleton.reward;
  }
  return m;
}

int act(const QTable& q, int s, int step) { return q.greedy_action(step, s); }

}  // namespace mfg
