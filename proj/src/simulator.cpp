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

#include "mfg/simulator.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace mfg {

namespace {

// Stream ids: agent i uses streams (2i, 2i+1) for model sampling and
// environment noise; stream 2n seeds the initial-state draw.
constexpr std::uint64_t kModelStream = 0;
constexpr std::uint64_t kEnvStream = 1;

void parallel_over_agents(int n, int threads, auto&& body) {
  if (threads <= 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

EpisodeResult run_episode(const GameSpec& spec, const std::vector<QTable>& q_tables,
                          std::vector<int>& states, std::vector<Rng>& rngs) {
  const int n = static_cast<int>(states.size());
  if (static_cast<int>(q_tables.size()) != n || static_cast<int>(rngs.size()) != n)
    throw std::invalid_argument("agent vectors must have equal length");
  EpisodeResult ep;
  ep.alpha.reserve(spec.horizon);
  ep.state_dist.reserve(spec.horizon);
  ep.logs.resize(n);
  std::vector<int> actions(n);
  for (int j = 0; j < spec.horizon; ++j) {
    ep.state_dist.push_back(empirical_state_dist(states, spec.num_states));
    for (int i = 0; i < n; ++i) actions[i] = act(q_tables[i], states[i], j);
    ep.alpha.push_back(empirical_action_dist(actions, spec.num_actions));
    const ActionDist& alpha = ep.alpha.back();
    for (int i = 0; i < n; ++i) {
      auto [s2, r] = sample_transition(spec, states[i], actions[i], alpha, rngs[i]);
      ep.logs[i].steps.push_back({states[i], actions[i], r, s2});
      states[i] = s2;
    }
  }
  return ep;
}

std::optional<int> detect_convergence(const std::vector<std::vector<ActionDist>>& alpha_trace,
                                      double epsilon, int window) {
  if (alpha_trace.empty()) throw std::invalid_argument("empty trace");
  const int K = static_cast<int>(alpha_trace.size());
  for (int k = 0; k + window < K; ++k) {
    bool stable = true;
    for (int k2 = k + 1; k2 <= k + window && stable; ++k2)
      for (std::size_t j = 0; j < alpha_trace[k].size() && stable; ++j)
        stable = l1_distance(alpha_trace[k2][j], alpha_trace[k][j]) < epsilon;
    if (stable) return k + 1; // 1-based
  }
  return std::nullopt;
}

RunResult run(const SimConfig& config, const GameSpec& spec) {
  require_valid(spec);
  if (config.num_agents < 2) throw std::invalid_argument("need at least 2 agents");
  if (config.num_episodes < 1) throw std::invalid_argument("need at least 1 episode");
  if (config.convergence_window < 1 || config.convergence_window > config.num_episodes)
    throw std::invalid_argument("window must satisfy 1 <= W <= K");
  if (!(config.convergence_epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");

  const int n = config.num_agents;
  std::vector<Rng> model_rngs, env_rngs;
  model_rngs.reserve(n);
  env_rngs.reserve(n);
  for (int i = 0; i < n; ++i) {
    model_rngs.push_back(make_rng(config.seed, 2 * static_cast<std::uint64_t>(i) + kModelStream));
    env_rngs.push_back(make_rng(config.seed, 2 * static_cast<std::uint64_t>(i) + kEnvStream));
  }
  Rng init_rng = make_rng(config.seed, 2 * static_cast<std::uint64_t>(n));

  std::vector<Belief> beliefs(n, Belief(spec.num_states, spec.num_actions, config.prior_strength));
  std::vector<int> states(n);
  auto resample_states = [&] {
    for (int i = 0; i < n; ++i)
      states[i] = sample_categorical(spec.initial_dist.probs, init_rng);
  };
  resample_states();

  RunResult result;
  result.alpha_trace.reserve(config.num_episodes);
  result.state_dist_trace.reserve(config.num_episodes);

  std::vector<QTable> q_tables(n);
  std::vector<Policy> last_policies(n);
  std::vector<SampledModel> models(n);

  for (int k = 0; k < config.num_episodes; ++k) {
    // Plan: each agent samples a model from its posterior and solves it.
    parallel_over_agents(n, config.threads, [&](int i) {
      models[i] = sample_model(beliefs[i], spec, model_rngs[i], config.reward_learning);
      q_tables[i] = backward_induction(models[i].planning_model(spec.feasible_actions));
      last_policies[i] = lower_myopic_policy(q_tables[i]);
    });
    if (config.retain_models) {
      result.sampled_models.push_back(models[0]);
    }
    result.policy_trace.push_back(last_policies[0]);

    if (!config.carry_over_states && k > 0) resample_states();
    EpisodeResult ep = run_episode(spec, q_tables, states, env_rngs);

    double total_return = 0.0;
    for (int i = 0; i < n; ++i) {
      double g = 1.0;
      for (const auto& rec : ep.logs[i].steps) {
        beliefs[i].update(rec);
        total_return += g * rec.reward;
        g *= spec.discount;
      }
    }
    result.mean_return.push_back(total_return / n);
    result.alpha_trace.push_back(std::move(ep.alpha));
    result.state_dist_trace.push_back(std::move(ep.state_dist));
  }

  result.convergence_episode =
      detect_convergence(result.alpha_trace, config.convergence_epsilon, config.convergence_window);

  // Window-averaged final distributions.
  const int W = config.convergence_window;
  const int K = config.num_episodes;
  for (int j = 0; j < spec.horizon; ++j) {
    std::vector<double> a(spec.num_actions, 0.0), f(spec.num_states, 0.0);
    for (int k = K - W; k < K; ++k) {
      for (int x = 0; x < spec.num_actions; ++x) a[x] += result.alpha_trace[k][j](x) / W;
      for (int s = 0; s < spec.num_states; ++s) f[s] += result.state_dist_trace[k][j](s) / W;
    }
    result.alpha_hat.push_back({std::move(a)});
    result.f_hat.push_back({std::move(f)});
  }

  result.final_policy = last_policies[0];
  for (const auto& p : last_policies)
    if (p == result.final_policy) ++result.final_policy_agreement;
  return result;
}

}  // namespace mfg
