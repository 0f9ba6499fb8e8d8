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

#include "mfg/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mfg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kValueTol = 1e-12;

const std::vector<int>& all_actions_cached(int num_actions) {
  static std::vector<std::vector<int>> cache;
  if (static_cast<int>(cache.size()) <= num_actions) cache.resize(num_actions + 1);
  auto& v = cache[num_actions];
  if (v.empty() && num_actions > 0) {
    v.resize(num_actions);
    std::iota(v.begin(), v.end(), 0);
  }
  return v;
}

}  // namespace

double PlanningModel::rbar(int step, int s, int a) const {
  auto p = row(step, s, a);
  double out = 0.0;
  for (int s2 = 0; s2 < num_states; ++s2) out += p[s2] * r(s, a, s2);
  return out;
}

const std::vector<int>& PlanningModel::actions_at(int s) const {
  if (feasible_actions.empty()) return all_actions_cached(num_actions);
  return feasible_actions[s];
}

PlanningModel make_planning_model(const GameSpec& spec,
                                  std::span<const ActionDist> alpha_seq) {
  if (static_cast<int>(alpha_seq.size()) != spec.horizon)
    throw std::invalid_argument("alpha_seq must have one entry per step");
  PlanningModel m;
  m.num_states = spec.num_states;
  m.num_actions = spec.num_actions;
  m.horizon = spec.horizon;
  m.discount = spec.discount;
  m.step_dependent = true;
  m.reward = spec.reward;
  m.feasible_actions = spec.feasible_actions;
  const std::size_t block =
      static_cast<std::size_t>(spec.num_states) * spec.num_actions * spec.num_states;
  m.kernels.resize(block * spec.horizon);
  for (int j = 0; j < spec.horizon; ++j) {
    if (!alpha_seq[j].valid()) throw std::invalid_argument("invalid alpha in sequence");
    for (int s = 0; s < spec.num_states; ++s)
      for (int a : spec.actions_at(s)) {
        auto mixed = transition_kernel(spec, s, a, alpha_seq[j]);
        std::copy(mixed.begin(), mixed.end(),
                  m.kernels.begin() + j * block +
                      (static_cast<std::size_t>(s) * spec.num_actions + a) * spec.num_states);
      }
  }
  return m;
}

double QTable::max_value(int step, int s) const {
  double best = kNegInf;
  for (int a = 0; a < num_actions; ++a) best = std::max(best, at(step, s, a));
  return best;
}

int QTable::greedy_action(int step, int s) const {
  int best_a = 0;
  double best = kNegInf;
  for (int a = 0; a < num_actions; ++a) {
    double v = at(step, s, a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  return best_a;
}

QTable backward_induction(const PlanningModel& model) {
  QTable q;
  q.num_states = model.num_states;
  q.num_actions = model.num_actions;
  q.horizon = model.horizon;
  q.values.assign(static_cast<std::size_t>(model.horizon) * model.num_states *
                      model.num_actions,
                  kNegInf);
  std::vector<double> next_v(model.num_states, 0.0);
  for (int j = model.horizon - 1; j >= 0; --j) {
    for (int s = 0; s < model.num_states; ++s)
      for (int a : model.actions_at(s)) {
        double v = model.rbar(j, s, a);
        if (j + 1 < model.horizon) {
          auto p = model.row(j, s, a);
          double cont = 0.0;
          for (int s2 = 0; s2 < model.num_states; ++s2) cont += p[s2] * next_v[s2];
          v += model.discount * cont;
        }
        q.at(j, s, a) = v;
      }
    for (int s = 0; s < model.num_states; ++s) next_v[s] = q.max_value(j, s);
  }
  return q;
}

QTable backward_induction(const GameSpec& spec, std::span<const ActionDist> alpha_seq) {
  return backward_induction(make_planning_model(spec, alpha_seq));
}

Policy lower_myopic_policy(const QTable& q) {
  Policy pi;
  pi.num_states = q.num_states;
  pi.num_actions = q.num_actions;
  pi.horizon = q.horizon;
  pi.actions.resize(static_cast<std::size_t>(q.horizon) * q.num_states);
  for (int j = 0; j < q.horizon; ++j)
    for (int s = 0; s < q.num_states; ++s) pi.at(j, s) = q.greedy_action(j, s);
  return pi;
}

ValueTable policy_value(const PlanningModel& model, const Policy& policy) {
  if (policy.num_states != model.num_states || policy.horizon != model.horizon)
    throw std::invalid_argument("policy does not match model dimensions");
  ValueTable v;
  v.num_states = model.num_states;
  v.horizon = model.horizon;
  v.values.assign(static_cast<std::size_t>(model.horizon) * model.num_states, 0.0);
  for (int j = model.horizon - 1; j >= 0; --j)
    for (int s = 0; s < model.num_states; ++s) {
      int a = policy.at(j, s);
      const auto& feas = model.actions_at(s);
      if (std::find(feas.begin(), feas.end(), a) == feas.end())
        throw std::invalid_argument("policy selects infeasible action");
      double val = model.rbar(j, s, a);
      if (j + 1 < model.horizon) {
        auto p = model.row(j, s, a);
        double cont = 0.0;
        for (int s2 = 0; s2 < model.num_states; ++s2) cont += p[s2] * v.at(j + 1, s2);
        val += model.discount * cont;
      }
      v.at(j, s) = val;
    }
  return v;
}

ValueTable policy_value(const GameSpec& spec, const Policy& policy,
                        std::span<const ActionDist> alpha_seq) {
  return policy_value(make_planning_model(spec, alpha_seq), policy);
}

BruteForceResult brute_force_optimal(const PlanningModel& model,
                                     std::uint64_t enumeration_cap) {
  const int cells = model.horizon * model.num_states;
  // Per-cell feasible choices, in index order.
  std::vector<const std::vector<int>*> choices(cells);
  double log_count = 0.0;
  for (int j = 0; j < model.horizon; ++j)
    for (int s = 0; s < model.num_states; ++s) {
      choices[j * model.num_states + s] = &model.actions_at(s);
      log_count += std::log(static_cast<double>(model.actions_at(s).size()));
    }
  if (log_count > std::log(static_cast<double>(enumeration_cap)))
    throw std::invalid_argument("policy enumeration cap exceeded");

  auto for_each_policy = [&](auto&& visit) {
    Policy pi;
    pi.num_states = model.num_states;
    pi.num_actions = model.num_actions;
    pi.horizon = model.horizon;
    pi.actions.resize(cells);
    std::vector<int> cursor(cells, 0);
    for (int c = 0; c < cells; ++c) pi.actions[c] = (*choices[c])[0];
    while (true) {
      visit(pi, policy_value(model, pi));
      // Odometer increment over the per-cell choice lists.
      int c = cells - 1;
      for (; c >= 0; --c) {
        if (++cursor[c] < static_cast<int>(choices[c]->size())) {
          pi.actions[c] = (*choices[c])[cursor[c]];
          break;
        }
        cursor[c] = 0;
        pi.actions[c] = (*choices[c])[0];
      }
      if (c < 0) return;
    }
  };

  BruteForceResult out;
  out.optimal_value.num_states = model.num_states;
  out.optimal_value.horizon = model.horizon;
  out.optimal_value.values.assign(cells, kNegInf);
  auto& best = out.optimal_value.values;
  for_each_policy([&](const Policy&, const ValueTable& v) {
    for (int c = 0; c < cells; ++c) best[c] = std::max(best[c], v.values[c]);
  });
  for_each_policy([&](const Policy& pol, const ValueTable& v) {
    for (int c = 0; c < cells; ++c)
      if (v.values[c] < best[c] - kValueTol) return;
    out.optimal_set.push_back(pol);
  });
  return out;
}

}  // namespace mfg
