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

#include <span>
#include <string>
#include <vector>

#include "mfg/mean_field.hpp"
#include "mfg/rng.hpp"

namespace mfg {

// Per-population-action base transition kernels. The effective kernel is the
// mixture p(s'|s,a,alpha) = sum_b alpha(b) * P_b(s'|s,a), which is 1-Lipschitz
// in alpha under the L1 norm and reduces to a plain MDP when all base kernels
// coincide.
struct TransitionCoupling {
  // kernels[b] is an |S|*|A| x |S| row-stochastic matrix, flattened as
  // [(s*A + a)*S + s'].
  std::vector<std::vector<double>> base_kernels;
};

// The true game model: finite state/action spaces, episodic horizon, known
// reward table on [0,1], and population-coupled transition dynamics.
struct GameSpec {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;       // steps per episode
  double discount = 0.0; // in [0,1)
  StateDist initial_dist;
  std::vector<double> reward; // r(s,a,s'), flattened [(s*A + a)*S + s']
  TransitionCoupling coupling;
  std::vector<std::vector<int>> feasible_actions; // empty = all feasible

  double r(int s, int a, int s2) const {
    return reward[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
  }
  std::span<const double> base_row(int b, int s, int a) const {
    const auto& k = coupling.base_kernels[b];
    return {k.data() + (static_cast<std::size_t>(s) * num_actions + a) * num_states,
            static_cast<std::size_t>(num_states)};
  }
  const std::vector<int>& actions_at(int s) const;
  bool feasible(int s, int a) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_spec(const GameSpec& spec);

// Throws std::invalid_argument listing all violations if the spec is invalid.
void require_valid(const GameSpec& spec);

// Effective transition row p(.|s,a,alpha) = sum_b alpha(b) * P_b(.|s,a).
std::vector<double> transition_kernel(const GameSpec& spec, int s, int a,
                                      const ActionDist& alpha);

// rbar(s,a,alpha) = sum_s' p(s'|s,a,alpha) * r(s,a,s').
double expected_reward(const GameSpec& spec, int s, int a, const ActionDist& alpha);

struct TransitionSample {
  int next_state;
  double reward;
};

TransitionSample sample_transition(const GameSpec& spec, int s, int a,
                                   const ActionDist& alpha, Rng& rng);

}  // namespace mfg
