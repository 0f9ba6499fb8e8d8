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

#include "mfg/mean_field.hpp"

#include <cmath>
#include <stdexcept>

#include "mfg/game.hpp"
#include "mfg/planner.hpp"

namespace mfg {

namespace {

std::vector<double> point_mass_vec(int index, int n) {
  if (index < 0 || index >= n) throw std::invalid_argument("point mass index out of range");
  std::vector<double> p(n, 0.0);
  p[index] = 1.0;
  return p;
}

std::vector<double> counts_to_dist(std::span<const int> values, int dim,
                                   std::optional<int> exclude) {
  if (values.empty()) throw std::invalid_argument("empty agent list");
  std::vector<double> counts(dim, 0.0);
  int counted = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (exclude && static_cast<int>(i) == *exclude) continue;
    int v = values[i];
    if (v < 0 || v >= dim) throw std::invalid_argument("value out of range");
    counts[v] += 1.0;
    ++counted;
  }
  if (counted == 0) throw std::invalid_argument("exclusion leaves no agents");
  for (double& c : counts) c /= counted;
  return counts;
}

}  // namespace

ActionDist ActionDist::point_mass(int action, int num_actions) {
  return {point_mass_vec(action, num_actions)};
}
ActionDist ActionDist::uniform(int num_actions) {
  return {std::vector<double>(num_actions, 1.0 / num_actions)};
}
bool ActionDist::valid(double tol) const { return is_distribution(probs, tol); }

StateDist StateDist::point_mass(int state, int num_states) {
  return {point_mass_vec(state, num_states)};
}
StateDist StateDist::uniform(int num_states) {
  return {std::vector<double>(num_states, 1.0 / num_states)};
}
bool StateDist::valid(double tol) const { return is_distribution(probs, tol); }

bool is_distribution(std::span<const double> probs, double tol) {
  if (probs.empty()) return false;
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= tol;
}

double l1_distance(std::span<const double> d1, std::span<const double> d2) {
  if (d1.size() != d2.size()) throw std::invalid_argument("dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < d1.size(); ++i) total += std::abs(d1[i] - d2[i]);
  return total;
}

double l1_distance(const ActionDist& d1, const ActionDist& d2) {
  return l1_distance(std::span<const double>(d1.probs), d2.probs);
}
double l1_distance(const StateDist& d1, const StateDist& d2) {
  return l1_distance(std::span<const double>(d1.probs), d2.probs);
}

ActionDist empirical_action_dist(std::span<const int> actions, int num_actions,
                                 std::optional<int> exclude) {
  return {counts_to_dist(actions, num_actions, exclude)};
}

StateDist empirical_state_dist(std::span<const int> states, int num_states,
                               std::optional<int> exclude) {
  return {counts_to_dist(states, num_states, exclude)};
}

ActionDist induced_action_dist(const Policy& policy, const StateDist& f, int step) {
  if (step < 0 || step >= policy.horizon) throw std::invalid_argument("step out of range");
  if (f.size() != policy.num_states) throw std::invalid_argument("dimension mismatch");
  std::vector<double> alpha(policy.num_actions, 0.0);
  for (int s = 0; s < policy.num_states; ++s) alpha[policy.at(step, s)] += f(s);
  return {std::move(alpha)};
}

std::vector<StateDist> forward_state_flow(const GameSpec& spec, const Policy& policy,
                                          std::span<const ActionDist> alpha_seq,
                                          const StateDist& rho) {
  if (static_cast<int>(alpha_seq.size()) != spec.horizon)
    throw std::invalid_argument("alpha_seq must have one entry per step");
  if (rho.size() != spec.num_states) throw std::invalid_argument("dimension mismatch");
  std::vector<StateDist> flow;
  flow.reserve(spec.horizon);
  flow.push_back(rho);
  for (int j = 0; j + 1 < spec.horizon; ++j) {
    std::vector<double> next(spec.num_states, 0.0);
    for (int s = 0; s < spec.num_states; ++s) {
      double mass = flow[j](s);
      if (mass == 0.0) continue;
      auto row = transition_kernel(spec, s, policy.at(j, s), alpha_seq[j]);
      for (int s2 = 0; s2 < spec.num_states; ++s2) next[s2] += mass * row[s2];
    }
    flow.push_back({std::move(next)});
  }
  return flow;
}

}  // namespace mfg
