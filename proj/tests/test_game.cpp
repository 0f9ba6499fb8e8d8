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

#include "mfg/game.hpp"
#include "mfg/scenario.hpp"
#include "test_util.hpp"

using namespace mfg;

namespace {

GameSpec tiny_spec() {
  GameSpec spec;
  spec.num_states = 2;
  spec.num_actions = 2;
  spec.horizon = 3;
  spec.discount = 0.9;
  spec.initial_dist.probs = {0.5, 0.5};
  spec.reward.assign(8, 0.5);
  std::vector<double> half(8, 0.5);
  spec.coupling.base_kernels = {half, half};
  return spec;
}

}  // namespace

TEST_CASE("validate_spec accepts a well-formed spec") {
  CHECK(validate_spec(tiny_spec()).ok());
}

TEST_CASE("validate_spec flags a non-stochastic kernel row") {
  auto spec = tiny_spec();
  spec.coupling.base_kernels[1][2] = 0.4; // row (b=1,s=0,a=1) now sums to 0.9
  auto rep = validate_spec(spec);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].find("b=1") != std::string::npos);
  CHECK(rep.violations[0].find("s=0") != std::string::npos);
  CHECK(rep.violations[0].find("a=1") != std::string::npos);
}

TEST_CASE("validate_spec flags rewards outside [0,1]") {
  auto spec = tiny_spec();
  spec.reward[1] = 1.5; // r(0,0,1)
  auto rep = validate_spec(spec);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].find("reward out of [0,1]") != std::string::npos);
}

TEST_CASE("validate_spec flags bad initial distribution and discount") {
  auto spec = tiny_spec();
  spec.initial_dist.probs = {0.7, 0.7};
  spec.discount = 1.0;
  auto rep = validate_spec(spec);
  CHECK(rep.violations.size() == 2);
}

TEST_CASE("transition_kernel: point-mass alpha selects the base row") {
  GameSpec spec = tiny_spec();
  spec.coupling.base_kernels[0] = {1, 0, 1, 0, 1, 0, 1, 0};
  spec.coupling.base_kernels[1] = {0, 1, 0, 1, 0, 1, 0, 1};
  auto row = transition_kernel(spec, 0, 0, ActionDist::point_mass(1, 2));
  CHECK(row[0] == 0.0);
  CHECK(row[1] == 1.0);

  SUBCASE("uniform alpha mixes the rows") {
    auto mixed = transition_kernel(spec, 0, 0, ActionDist::uniform(2));
    CHECK(mixed[0] == doctest::Approx(0.5));
    CHECK(mixed[1] == doctest::Approx(0.5));
  }
}

TEST_CASE("transition_kernel: identical base kernels ignore alpha") {
  auto spec = testutil::null_coupling_spec();
  auto a = transition_kernel(spec, 1, 0, ActionDist::point_mass(0, 2));
  auto b = transition_kernel(spec, 1, 0, ActionDist{{0.25, 0.75}});
  CHECK(a == b);
}

TEST_CASE("transition_kernel rejects infeasible actions") {
  auto spec = tiny_spec();
  spec.feasible_actions = {{0}, {0, 1}};
  CHECK_THROWS_AS(transition_kernel(spec, 0, 1, ActionDist::uniform(2)),
                  std::invalid_argument);
}

TEST_CASE("expected_reward examples") {
  SUBCASE("constant reward table") {
    auto spec = tiny_spec(); // r == 0.5 everywhere
    CHECK(expected_reward(spec, 0, 1, ActionDist::uniform(2)) == doctest::Approx(0.5));
  }
  SUBCASE("hand dot product") {
    auto spec = tiny_spec();
    spec.coupling.base_kernels[0] = {0.2, 0.8, 0.2, 0.8, 0.2, 0.8, 0.2, 0.8};
    spec.coupling.base_kernels[1] = spec.coupling.base_kernels[0];
    spec.reward = {1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0};
    CHECK(expected_reward(spec, 0, 0, ActionDist::uniform(2)) == doctest::Approx(0.2));
  }
  SUBCASE("deterministic kernel picks out one reward") {
    auto spec = tiny_spec();
    spec.coupling.base_kernels[0] = {0, 1, 0, 1, 0, 1, 0, 1};
    spec.coupling.base_kernels[1] = spec.coupling.base_kernels[0];
    spec.reward[1] = 0.75; // r(0,0,1)
    CHECK(expected_reward(spec, 0, 0, ActionDist::uniform(2)) == doctest::Approx(0.75));
  }
}

TEST_CASE("mixture is 1-Lipschitz in alpha (L1)") {
  Rng rng = make_rng(42, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto spec = make_random_spec(3, 3, 2, 0.5, 1000 + trial);
    std::vector<double> ones(3, 1.0);
    ActionDist a1{sample_dirichlet(ones, rng)}, a2{sample_dirichlet(ones, rng)};
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 3; ++a) {
        auto p1 = transition_kernel(spec, s, a, a1);
        auto p2 = transition_kernel(spec, s, a, a2);
        CHECK(l1_distance(p1, p2) <= l1_distance(a1, a2) + 1e-12);
        CHECK(is_distribution(p1));
      }
  }
}

TEST_CASE("sample_transition is deterministic under a fixed seed") {
  auto spec = testutil::null_coupling_spec();
  auto alpha = ActionDist::uniform(2);
  Rng r1 = make_rng(99, 0), r2 = make_rng(99, 0);
  for (int i = 0; i < 200; ++i) {
    auto a = sample_transition(spec, 1, 1, alpha, r1);
    auto b = sample_transition(spec, 1, 1, alpha, r2);
    CHECK(a.next_state == b.next_state);
    CHECK(a.reward == b.reward);
    CHECK(a.reward == spec.r(1, 1, a.next_state));
  }
}

TEST_CASE("sample_transition matches its row empirically") {
  GameSpec spec = tiny_spec();
  spec.coupling.base_kernels[0] = {0.3, 0.7, 0.3, 0.7, 0.3, 0.7, 0.3, 0.7};
  spec.coupling.base_kernels[1] = spec.coupling.base_kernels[0];
  Rng rng = make_rng(7, 0);
  const int N = 100000;
  std::vector<double> freq(2, 0.0);
  for (int i = 0; i < N; ++i)
    freq[sample_transition(spec, 0, 0, ActionDist::uniform(2), rng).next_state] += 1.0 / N;
  CHECK(l1_distance(freq, std::vector<double>{0.3, 0.7}) < 0.01);
}
