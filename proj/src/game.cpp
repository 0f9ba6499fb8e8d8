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

#include "mfg/game.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace mfg {

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

const std::vector<int>& all_actions(int num_actions) {
  static std::vector<std::vector<int>> cache;
  if (static_cast<int>(cache.size()) <= num_actions) {
    cache.resize(num_actions + 1);
  }
  auto& v = cache[num_actions];
  if (v.empty() && num_actions > 0) {
    v.resize(num_actions);
    std::iota(v.begin(), v.end(), 0);
  }
  return v;
}

}  // namespace

const std::vector<int>& GameSpec::actions_at(int s) const {
  if (feasible_actions.empty()) return all_actions(num_actions);
  return feasible_actions[s];
}

bool GameSpec::feasible(int s, int a) const {
  if (feasible_actions.empty()) return a >= 0 && a < num_actions;
  const auto& fa = feasible_actions[s];
  return std::find(fa.begin(), fa.end(), a) != fa.end();
}

ValidationReport validate_spec(const GameSpec& spec) {
  ValidationReport rep;
  auto add = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

  if (spec.num_states < 1) add("num_states must be positive");
  if (spec.num_actions < 1) add("num_actions must be positive");
  if (spec.horizon < 1) add("horizon must be >= 1");
  if (spec.discount < 0.0 || spec.discount >= 1.0) add("discount must lie in [0,1)");
  if (spec.num_states < 1 || spec.num_actions < 1) return rep;

  const int S = spec.num_states;
  const int A = spec.num_actions;

  if (static_cast<int>(spec.initial_dist.probs.size()) != S) {
    add("initial_dist has wrong dimension");
  } else if (!spec.initial_dist.valid()) {
    add("initial_dist is not a distribution over S");
  }

  if (static_cast<std::size_t>(S) * A * S != spec.reward.size()) {
    add("reward table has wrong dimension");
  } else {
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        for (int s2 = 0; s2 < S; ++s2) {
          double v = spec.r(s, a, s2);
          if (v < 0.0 || v > 1.0)
            add(fmt("reward out of [0,1] at (s=%d,a=%d,s'=%d): %g", s, a, s2, v));
        }
  }

  if (static_cast<int>(spec.coupling.base_kernels.size()) != A) {
    add("coupling must provide one base kernel per action");
  } else {
    for (int b = 0; b < A; ++b) {
      if (spec.coupling.base_kernels[b].size() != static_cast<std::size_t>(S) * A * S) {
        add(fmt("base kernel %d has wrong dimension", b));
        continue;
      }
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
          if (!is_distribution(spec.base_row(b, s, a)))
            add(fmt("kernel row is not a distribution at (b=%d,s=%d,a=%d)", b, s, a));
    }
  }

  if (!spec.feasible_actions.empty()) {
    if (static_cast<int>(spec.feasible_actions.size()) != S) {
      add("feasible_actions has wrong dimension");
    } else {
      for (int s = 0; s < S; ++s) {
        if (spec.feasible_actions[s].empty())
          add(fmt("feasible action set empty at state %d", s));
        for (int a : spec.feasible_actions[s])
          if (a < 0 || a >= A) add(fmt("infeasible action index %d at state %d", a, s));
      }
    }
  }
  return rep;
}

void require_valid(const GameSpec& spec) {
  auto rep = validate_spec(spec);
  if (rep.ok()) return;
  std::string msg = "invalid GameSpec:";
  for (const auto& v : rep.violations) msg += "\n  " + v;
  throw std::invalid_argument(msg);
}

std::vector<double> transition_kernel(const GameSpec& spec, int s, int a,
                                      const ActionDist& alpha) {
  if (!spec.feasible(s, a))
    throw std::invalid_argument(fmt("action %d infeasible in state %d", a, s));
  std::vector<double> row(spec.num_states, 0.0);
  for (int b = 0; b < spec.num_actions; ++b) {
    double w = alpha(b);
    if (w == 0.0) continue;
    auto base = spec.base_row(b, s, a);
    for (int s2 = 0; s2 < spec.num_states; ++s2) row[s2] += w * base[s2];
  }
  return row;
}

double expected_reward(const GameSpec& spec, int s, int a, const ActionDist& alpha) {
  auto row = transition_kernel(spec, s, a, alpha);
  double out = 0.0;
  for (int s2 = 0; s2 < spec.num_states; ++s2) out += row[s2] * spec.r(s, a, s2);
  return out;
}

TransitionSample sample_transition(const GameSpec& spec, int s, int a,
                                   const ActionDist& alpha, Rng& rng) {
  auto row = transition_kernel(spec, s, a, alpha);
  int s2 = sample_categorical(row, rng);
  return {s2, spec.r(s, a, s2)};
}

}  // namespace mfg
