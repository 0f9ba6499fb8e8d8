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

#include "mfg/planner.hpp"
#include "mfg/scenario.hpp"
#include "test_util.hpp"

using namespace mfg;

namespace {

GameSpec single_state_spec(double reward, double discount, int horizon) {
  GameSpec spec;
  spec.num_states = 1;
  spec.num_actions = 1;
  spec.horizon = horizon;
  spec.discount = discount;
  spec.initial_dist.probs = {1.0};
  spec.reward = {reward};
  spec.coupling.base_kernels = {{1.0}};
  return spec;
}

}  // namespace

TEST_CASE("backward_induction: tau=1 reduces to expected reward") {
  auto spec = testutil::null_coupling_spec(1);
  auto alpha = testutil::uniform_alpha_seq(1, 2);
  auto q = backward_induction(spec, alpha);
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a)
      CHECK(q.at(0, s, a) == doctest::Approx(expected_reward(spec, s, a, alpha[0])));
}

TEST_CASE("backward_induction: single-state hand unrolling") {
  auto spec = single_state_spec(0.5, 0.9, 2);
  auto q = backward_induction(spec, testutil::uniform_alpha_seq(2, 1));
  CHECK(q.at(1, 0, 0) == doctest::Approx(0.5));
  CHECK(q.at(0, 0, 0) == doctest::Approx(0.95));
}

TEST_CASE("backward_induction agrees with brute force on random instances") {
  for (int trial = 0; trial < 20; ++trial) {
    auto spec = make_random_spec(2, 2, 3, trial % 2 ? 0.9 : 0.0, 500 + trial);
    auto model = make_planning_model(spec, testutil::uniform_alpha_seq(3, 2));
    auto q = backward_induction(model);
    auto oracle = brute_force_optimal(model);
    for (int j = 0; j < 3; ++j)
      for (int s = 0; s < 2; ++s)
        CHECK(std::abs(q.max_value(j, s) - oracle.optimal_value.at(j, s)) < 1e-12);
    auto greedy = lower_myopic_policy(q);
    bool in_set = false;
    for (const auto& p : oracle.optimal_set) in_set = in_set || p == greedy;
    CHECK(in_set);
  }
}

TEST_CASE("lower_myopic_policy breaks ties to the smallest index") {
  QTable q;
  q.num_states = 1;
  q.num_actions = 3;
  q.horizon = 1;
  q.values = {0.5, 0.5, 0.3};
  CHECK(lower_myopic_policy(q).at(0, 0) == 0);
  q.values = {0.1, 0.9, 0.0};
  CHECK(lower_myopic_policy(q).at(0, 0) == 1);
  q.values = {0.4, 0.4, 0.4};
  CHECK(lower_myopic_policy(q).at(0, 0) == 0);
}

TEST_CASE("policy_value: optimal policy attains the optimal value") {
  auto spec = testutil::null_coupling_spec();
  auto alpha = testutil::uniform_alpha_seq(spec.horizon, 2);
  auto model = make_planning_model(spec, alpha);
  auto q = backward_induction(model);
  auto v = policy_value(model, lower_myopic_policy(q));
  for (int j = 0; j < spec.horizon; ++j)
    for (int s = 0; s < spec.num_states; ++s)
      CHECK(std::abs(v.at(j, s) - q.max_value(j, s)) < 1e-12);
}

TEST_CASE("policy_value: zero rewards and geometric sum") {
  auto zero = single_state_spec(0.0, 0.9, 4);
  Policy pi{1, 1, 4, {0, 0, 0, 0}};
  auto v0 = policy_value(zero, pi, testutil::uniform_alpha_seq(4, 1));
  for (double x : v0.values) CHECK(x == 0.0);

  auto ones = single_state_spec(1.0, 0.5, 3);
  Policy pi3{1, 1, 3, {0, 0, 0}};
  auto v = policy_value(ones, pi3, testutil::uniform_alpha_seq(3, 1));
  CHECK(v.at(0, 0) == doctest::Approx(1.75));
}

TEST_CASE("DP consistency: Bellman residual vanishes for arbitrary policies") {
  Rng rng = make_rng(31, 0);
  for (int trial = 0; trial < 25; ++trial) {
    auto spec = make_random_spec(3, 2, 4, 0.8, 900 + trial);
    std::vector<double> ones(2, 1.0);
    std::vector<ActionDist> alpha;
    for (int j = 0; j < 4; ++j) alpha.push_back({sample_dirichlet(ones, rng)});
    Policy pi;
    pi.num_states = 3;
    pi.num_actions = 2;
    pi.horizon = 4;
    for (int c = 0; c < 12; ++c) pi.actions.push_back(static_cast<int>(rng() % 2));
    auto model = make_planning_model(spec, alpha);
    auto v = policy_value(model, pi);
    for (int j = 0; j < 4; ++j)
      for (int s = 0; s < 3; ++s) {
        int a = pi.at(j, s);
        double rhs = model.rbar(j, s, a);
        if (j + 1 < 4) {
          auto p = model.row(j, s, a);
          for (int s2 = 0; s2 < 3; ++s2) rhs += spec.discount * p[s2] * v.at(j + 1, s2);
        }
        CHECK(std::abs(v.at(j, s) - rhs) < 1e-12);
      }
  }
}

TEST_CASE("Q and V respect the geometric bounds") {
  auto spec = make_random_spec(3, 3, 5, 0.9, 77);
  auto q = backward_induction(spec, testutil::uniform_alpha_seq(5, 3));
  for (int j = 0; j < 5; ++j) {
    double bound = (1.0 - std::pow(spec.discount, 5 - j)) / (1.0 - spec.discount);
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 3; ++a) {
        CHECK(q.at(j, s, a) >= 0.0);
        CHECK(q.at(j, s, a) <= bound + 1e-12);
        CHECK(q.at(j, s, a) <= 5 - j + 1e-12);
      }
  }
}

TEST_CASE("raising a reward never lowers any Q value") {
  auto spec = make_random_spec(2, 2, 3, 0.7, 123);
  auto alpha = testutil::uniform_alpha_seq(3, 2);
  auto q_before = backward_induction(spec, alpha);
  auto bumped = spec;
  bumped.reward[3] = std::min(1.0, bumped.reward[3] + 0.3);
  auto q_after = backward_induction(bumped, alpha);
  for (std::size_t i = 0; i < q_before.values.size(); ++i)
    CHECK(q_after.values[i] >= q_before.values[i] - 1e-12);
}

TEST_CASE("brute_force_optimal: dominant action yields a singleton set") {
  auto spec = testutil::dominant_action_spec(2, 2, 2, 0.5, 1);
  auto model = make_planning_model(spec, testutil::uniform_alpha_seq(2, 2));
  auto res = brute_force_optimal(model);
  REQUIRE(res.optimal_set.size() == 1);
  for (int a : res.optimal_set[0].actions) CHECK(a == 1);
}

TEST_CASE("brute_force_optimal: set is never empty; cap is enforced") {
  auto spec = make_random_spec(2, 2, 2, 0.3, 55);
  auto model = make_planning_model(spec, testutil::uniform_alpha_seq(2, 2));
  CHECK_FALSE(brute_force_optimal(model).optimal_set.empty());
  CHECK_THROWS_AS(brute_force_optimal(model, 8), std::invalid_argument);
}

TEST_CASE("feasible-action restriction is honored end to end") {
  auto spec = testutil::dominant_action_spec(2, 2, 2, 0.5, 1);
  spec.feasible_actions = {{0}, {0, 1}}; // dominant action forbidden in state 0
  auto model = make_planning_model(spec, testutil::uniform_alpha_seq(2, 2));
  auto q = backward_induction(model);
  auto pi = lower_myopic_policy(q);
  CHECK(pi.at(0, 0) == 0);
  CHECK(pi.at(0, 1) == 1);
  auto res = brute_force_optimal(model);
  bool found = false;
  for (const auto& p : res.optimal_set) found = found || p == pi;
  CHECK(found);
}
