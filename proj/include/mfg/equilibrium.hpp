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
#include <vector>

#include "mfg/planner.hpp"
#include "mfg/simulator.hpp"

namespace mfg {

// Mean-field equilibrium check on a candidate (policy, alpha) pair against
// the true game: the policy must be a best response to alpha, and alpha must
// be reproduced by pushing the induced state flow back through the policy.
struct MfeReport {
  bool policy_in_best_response_set = false;
  bool is_mfe = false;
  double policy_gap = 0.0;            // exploitability, discounted-reward units
  double state_flow_residual = 0.0;   // max_j L1(f_hat_j, forward-flow f_j)
  double induced_alpha_residual = 0.0; // max_j L1(alpha_hat_j, induced alpha_j)
  double tolerance = 0.0;
};

struct BestResponse {
  Policy policy;
  QTable q;
};

// Lower-myopic member of the optimal oblivious strategy set for the true game
// under the population distribution alpha_hat.
BestResponse best_response_policy(const GameSpec& spec,
                                  std::span<const ActionDist> alpha_hat);

// max over (s, step) of V_opt_j(s|alpha_hat) - V_policy_j(s|alpha_hat); zero
// iff the policy is optimal at every state and step.
double exploitability(const GameSpec& spec, const Policy& policy,
                      std::span<const ActionDist> alpha_hat);

MfeReport verify_mfe(const GameSpec& spec, const Policy& policy,
                     std::span<const ActionDist> alpha_hat, const StateDist& rho,
                     double tol);

struct ValueGapTrace {
  std::vector<double> gap;          // g_k = max_s |V*_1(s) - V^{M_k}_{pi_k,1}(s)|
  std::vector<double> prefix_sum;
  std::vector<double> azuma_envelope; // tau * sqrt(2 m log(1/delta))
  std::vector<int> envelope_violations; // 1-based episode indices
  double delta = 0.0;
  double cesaro_first_half = 0.0;   // mean gap over the first half of episodes
  double cesaro_second_half = 0.0;
};

// Per-episode gap between the optimal value on the true game and the value of
// the episode's policy on the episode's sampled model, both under the final
// alpha_hat. Requires the run to have retained sampled models.
ValueGapTrace value_gap_trace(const RunResult& run, const GameSpec& spec, double delta);

}  // namespace mfg
