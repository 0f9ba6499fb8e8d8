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

#include <optional>
#include <span>
#include <vector>

namespace mfg {

inline constexpr double kSimplexTol = 1e-9;

/// Probability distribution over the action set (the population's empirical
/// action profile).
struct ActionDist {
  std::vector<double> probs;

  static ActionDist point_mass(int action, int num_actions);
  static ActionDist uniform(int num_actions);
  int size() const { return static_cast<int>(probs.size()); }
  double operator()(int a) const { return probs[a]; }
  bool valid(double tol = kSimplexTol) const;
};

/// Probability distribution over the state set.
struct StateDist {
  std::vector<double> probs;

  static StateDist point_mass(int state, int num_states);
  static StateDist uniform(int num_states);
  int size() const { return static_cast<int>(probs.size()); }
  double operator()(int s) const { return probs[s]; }
  bool valid(double tol = kSimplexTol) const;
};

bool is_distribution(std::span<const double> probs, double tol = kSimplexTol);

double l1_distance(std::span<const double> d1, std::span<const double> d2);
double l1_distance(const ActionDist& d1, const ActionDist& d2);
double l1_distance(const StateDist& d1, const StateDist& d2);

// Fraction of agents playing each action, optionally excluding one agent.
ActionDist empirical_action_dist(std::span<const int> actions, int num_actions,
                                 std::optional<int> exclude = std::nullopt);

// Fraction of agents occupying each state, optionally excluding one agent.
StateDist empirical_state_dist(std::span<const int> states, int num_states,
                               std::optional<int> exclude = std::nullopt);

struct GameSpec;
struct Policy;

// Action distribution induced by playing `policy` at step `j` (0-based) when
// the population is spread over states according to `f`:
//   alpha(a) = sum over states s with policy(s,j)=a of f(s).
ActionDist induced_action_dist(const Policy& policy, const StateDist& f, int step);

// Propagates the initial state distribution forward through the coupled
// dynamics under `policy` and the per-step population action distributions.
// Returns f_1..f_tau (f_1 = rho).
std::vector<StateDist> forward_state_flow(const GameSpec& spec, const Policy& policy,
                                          std::span<const ActionDist> alpha_seq,
                                          const StateDist& rho);

}  // namespace mfg
