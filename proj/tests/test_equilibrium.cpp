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

#include <doctest.h>

#include <cmath>

#include "mfg/equilibrium.hpp"
#include "mfg/mean_field.hpp"
#include "mfg/scenario.hpp"
#include "test_util.hpp"

using namespace mfg;

namespace {

// Exact self-consistent (policy, alpha) pair for a null-coupling spec: solve
// the MDP once (alpha is irrelevant), then read alpha off the induced flow.
std::pair<Policy, std::vector<ActionDist>> exact_null_coupling_solution(const GameSpec& spec) {
  auto alpha0 = testutil::uniform_alpha_seq(spec.horizon, spec.num_actions);
  auto br = best_response_policy(spec, alpha0);
  auto flow = forward_state_flow(spec, br.policy, alpha0, spec.initial_dist);
  std::vector<ActionDist> alpha;
  for (int j = 0; j < spec.horizon; ++j)
    alpha.push_back(induced_action_dist(br.policy, flow[j], j));
  return {br.policy, alpha};
}

}  // namespace

TEST_CASE("best_response_policy: dominant action wins under any alpha") {
  auto spec = testutil::dominant_action_spec(3, 2, 4, 0.9, 1);
  for (int b = 0; b < 2; ++b) {
    auto br = best_response_policy(
        spec, std::vector<ActionDist>(4, ActionDist::point_mass(b, 2)));
    for (int a : br.policy.actions) CHECK(a == 1);
  }
}

TEST_CASE("best_response_policy is in the brute-force optimal set") {
  for (int trial = 0; trial < 10; ++trial) {
    auto spec = make_random_spec(2, 2, 3, 0.8, 300 + trial);
    auto alpha = testutil::uniform_alpha_seq(3, 2);
    auto br = best_response_policy(spec, alpha);
    auto oracle = brute_force_optimal(make_planning_model(spec, alpha));
    bool found = false;
    for (const auto& p : oracle.optimal_set) found = found || p == br.policy;
    CHECK(found);
  }
}

TEST_CASE("best_response_policy ignores alpha under null coupling") {
  auto spec = testutil::null_coupling_spec();
  auto a = best_response_policy(spec, testutil::uniform_alpha_seq(5, 2));
  auto b = best_response_policy(
      spec, std::vector<ActionDist>(5, ActionDist::point_mass(0, 2)));
  CHECK(a.policy == b.policy);
}

TEST_CASE("verify_mfe: exact null-coupling solution passes at 1e-9") {
  auto spec = testutil::null_coupling_spec();
  auto [policy, alpha] = exact_null_coupling_solution(spec);
  auto rep = verify_mfe(spec, policy, alpha, spec.initial_dist, 1e-9);
  CHECK(rep.is_mfe);
  CHECK(rep.policy_gap <= 1e-9);
  CHECK(rep.induced_alpha_residual <= 1e-9);

  SUBCASE("suboptimal policy fails the best-response condition") {
    Policy bad = policy;
    for (int& a : bad.actions) a = 1 - a;
    auto bad_rep = verify_mfe(spec, bad, alpha, spec.initial_dist, 1e-9);
    CHECK(bad_rep.policy_gap > 0.0);
    CHECK_FALSE(bad_rep.is_mfe);
  }
  SUBCASE("perturbed alpha fails the induced-distribution condition") {
    auto bad_alpha = alpha;
    std::swap(bad_alpha[1].probs[0], bad_alpha[1].probs[1]);
    if (l1_distance(bad_alpha[1], alpha[1]) > 0.0) {
      auto bad_rep = verify_mfe(spec, policy, bad_alpha, spec.initial_dist, 1e-9);
      CHECK(bad_rep.induced_alpha_residual > 0.0);
      CHECK_FALSE(bad_rep.is_mfe);
    }
  }
  SUBCASE("monotone in tolerance") {
    auto tight = verify_mfe(spec, policy, alpha, spec.initial_dist, 1e-12);
    auto loose = verify_mfe(spec, policy, alpha, spec.initial_dist, 1e-3);
    if (tight.is_mfe) CHECK(loose.is_mfe);
  }
}

TEST_CASE("exploitability: zero for the best response, positive gap measured exactly") {
  auto spec = testutil::dominant_action_spec(2, 2, 1, 0.0, 1);
  auto alpha = testutil::uniform_alpha_seq(1, 2);
  auto br = best_response_policy(spec, alpha);
  CHECK(exploitability(spec, br.policy, alpha) <= 1e-12);

  Policy dominated{2, 2, 1, {0, 0}};
  CHECK(exploitability(spec, dominated, alpha) == doctest::Approx(1.0));
}

TEST_CASE("exploitability is nonnegative on random policies") {
  Rng rng = make_rng(13, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto spec = make_random_spec(3, 2, 3, 0.7, 600 + trial);
    Policy pi;
    pi.num_states = 3;
    pi.num_actions = 2;
    pi.horizon = 3;
    for (int c = 0; c < 9; ++c) pi.actions.push_back(static_cast<int>(rng() % 2));
    CHECK(exploitability(spec, pi, testutil::uniform_alpha_seq(3, 2)) >= -1e-12);
  }
}

TEST_CASE("value_gap_trace: true model and optimal policy give zero gaps") {
  auto spec = testutil::null_coupling_spec(3);
  auto alpha = testutil::uniform_alpha_seq(3, 2);
  auto br = best_response_policy(spec, alpha);

  RunResult run;
  run.alpha_hat = alpha;
  SampledModel truth;
  truth.num_states = 3;
  truth.num_actions = 2;
  truth.horizon = 3;
  truth.discount = spec.discount;
  truth.reward = spec.reward;
  truth.rows = spec.coupling.base_kernels[0]; // null coupling: mixture == base
  for (int k = 0; k < 6; ++k) {
    run.sampled_models.push_back(truth);
    run.policy_trace.push_back(br.policy);
  }
  auto trace = value_gap_trace(run, spec, 0.05);
  REQUIRE(trace.gap.size() == 6);
  for (double g : trace.gap) CHECK(g == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace.envelope_violations.empty());
  CHECK(trace.prefix_sum.back() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("value_gap_trace: gaps bounded by tau and envelope well-formed") {
  auto spec = testutil::null_coupling_spec(4);
  SimConfig cfg;
  cfg.num_agents = 5;
  cfg.num_episodes = 30;
  cfg.convergence_window = 5;
  cfg.seed = 21;
  cfg.retain_models = true;
  auto result = run(cfg, spec);
  auto trace = value_gap_trace(result, spec, 0.05);
  REQUIRE(trace.gap.size() == 30);
  for (double g : trace.gap) {
    CHECK(g >= 0.0);
    CHECK(g <= spec.horizon);
  }
  for (std::size_t k = 0; k < trace.azuma_envelope.size(); ++k)
    CHECK(trace.azuma_envelope[k] ==
          doctest::Approx(spec.horizon * std::sqrt(2.0 * (k + 1) * std::log(1.0 / 0.05))));
  CHECK_THROWS_AS(value_gap_trace(RunResult{}, spec, 0.05), std::invalid_argument);
}
