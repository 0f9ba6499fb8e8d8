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

#include "mfg/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mfg {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr double kValueGapDelta = 0.05;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json read_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ArtifactError(std::string("cannot open ") + what + ": " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ArtifactError(std::string("parse failure in ") + path.string() + ": " + e.what());
  }
  return j;
}

std::size_t triple_index(const GameSpec& g, int s, int a, int s2) {
  return (static_cast<std::size_t>(s) * g.num_actions + a) * g.num_states + s2;
}

json spec_to_json(const GameSpec& spec) {
  json g;
  g["num_states"] = spec.num_states;
  g["num_actions"] = spec.num_actions;
  g["horizon"] = spec.horizon;
  g["discount"] = spec.discount;
  g["initial_dist"] = spec.initial_dist.probs;
  auto nest = [&spec](const std::vector<double>& flat) {
    json out = json::array();
    for (int s = 0; s < spec.num_states; ++s) {
      json per_a = json::array();
      for (int a = 0; a < spec.num_actions; ++a) {
        json row = json::array();
        for (int s2 = 0; s2 < spec.num_states; ++s2)
          row.push_back(flat[triple_index(spec, s, a, s2)]);
        per_a.push_back(std::move(row));
      }
      out.push_back(std::move(per_a));
    }
    return out;
  };
  g["reward"] = nest(spec.reward);
  json kernels = json::array();
  for (const auto& k : spec.coupling.base_kernels) kernels.push_back(nest(k));
  g["base_kernels"] = std::move(kernels);
  if (!spec.feasible_actions.empty()) g["feasible_actions"] = spec.feasible_actions;
  return g;
}

std::vector<double> flatten_table(const json& nested, const char* field, int S, int A) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(S) * A * S);
  if (static_cast<int>(nested.size()) != S)
    throw ScenarioError(std::string(field) + ": expected one entry per state");
  for (const auto& per_a : nested) {
    if (static_cast<int>(per_a.size()) != A)
      throw ScenarioError(std::string(field) + ": expected one row per action");
    for (const auto& row : per_a) {
      if (static_cast<int>(row.size()) != S)
        throw ScenarioError(std::string(field) + ": row has wrong length");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
  }
  return flat;
}

GameSpec spec_from_json(const json& g) {
  GameSpec spec;
  try {
    spec.num_states = g.at("num_states").get<int>();
    spec.num_actions = g.at("num_actions").get<int>();
    spec.horizon = g.at("horizon").get<int>();
    spec.discount = g.at("discount").get<double>();
    spec.initial_dist.probs = g.at("initial_dist").get<std::vector<double>>();
    spec.reward = flatten_table(g.at("reward"), "reward", spec.num_states, spec.num_actions);
    const auto& kernels = g.at("base_kernels");
    if (static_cast<int>(kernels.size()) != spec.num_actions)
      throw ScenarioError("base_kernels: expected one kernel per action");
    for (const auto& k : kernels)
      spec.coupling.base_kernels.push_back(
          flatten_table(k, "base_kernels", spec.num_states, spec.num_actions));
    if (g.contains("feasible_actions"))
      spec.feasible_actions = g.at("feasible_actions").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("game block: ") + e.what());
  }
  return spec;
}

// Splits `mass` between moving one step toward `target` and staying put.
void shift_row(std::vector<double>& row, int s, int target, double move_prob) {
  int next = s < target ? s + 1 : (s > target ? s - 1 : s);
  row[next] += move_prob;
  row[s] += 1.0 - move_prob;
}

}  // namespace

GameSpec make_security_investment_spec() {
  // States: 0 = compromised, 1 = basic, 2 = secure. Actions: 0 = skip, 1 = invest.
  // When most of the population invests (b = 1) attacks are rare and both
  // maintenance and recovery succeed more often.
  GameSpec spec;
  spec.num_states = 3;
  spec.num_actions = 2;
  spec.horizon = 5;
  spec.discount = 0.9;
  spec.initial_dist.probs = {0.5, 0.3, 0.2};
  const int S = 3, A = 2;
  spec.reward.resize(static_cast<std::size_t>(S) * A * S);
  const double payoff[3] = {0.3, 0.6, 0.9};
  const double invest_cost = 0.05;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      for (int s2 = 0; s2 < S; ++s2)
        spec.reward[triple_index(spec, s, a, s2)] = payoff[s2] - invest_cost * a;

  for (int b = 0; b < A; ++b) {
    std::vector<double> kernel(static_cast<std::size_t>(S) * A * S, 0.0);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        std::vector<double> row(S, 0.0);
        if (a == 1) {
          // Invest: climb toward secure; easier in a safe environment.
          shift_row(row, s, 2, b == 1 ? 0.9 : 0.6);
          if (b == 0) {
            // Residual attack risk even while investing.
            double leak = s > 0 ? 0.1 : 0.0;
            if (leak > 0.0) {
              for (double& p : row) p *= 1.0 - leak;
              row[s - 1] += leak;
            }
          }
        } else {
          // No investment: decay toward compromised, faster under attack.
          shift_row(row, s, 0, b == 1 ? 0.4 : 0.6);
        }
        std::copy(row.begin(), row.end(),
                  kernel.begin() + (static_cast<std::size_t>(s) * A + a) * S);
      }
    spec.coupling.base_kernels.push_back(std::move(kernel));
  }
  return spec;
}

GameSpec make_demand_response_spec() {
  // States: price level 0 (low) .. 2 (high). Actions: consumption level 0..2.
  // The price drifts toward the population's mean consumption level; one
  // agent's own consumption nudges it only slightly.
  GameSpec spec;
  spec.num_states = 3;
  spec.num_actions = 3;
  spec.horizon = 4;
  spec.discount = 0.8;
  spec.initial_dist.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const int S = 3, A = 3;
  spec.reward.resize(static_cast<std::size_t>(S) * A * S);
  const double comfort[3] = {0.0, 0.25, 0.5};
  const double price_cost[3] = {0.0, 0.2, 0.45};
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      for (int s2 = 0; s2 < S; ++s2)
        spec.reward[triple_index(spec, s, a, s2)] = comfort[a] + 0.45 - price_cost[s2];

  for (int b = 0; b < A; ++b) {
    std::vector<double> kernel(static_cast<std::size_t>(S) * A * S, 0.0);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        std::vector<double> toward_b(S, 0.0), toward_a(S, 0.0);
        shift_row(toward_b, s, b, 0.8);
        shift_row(toward_a, s, a, 0.8);
        for (int s2 = 0; s2 < S; ++s2) {
          kernel[(static_cast<std::size_t>(s) * A + a) * S + s2] =
              0.85 * toward_b[s2] + 0.15 * toward_a[s2];
        }
      }
    spec.coupling.base_kernels.push_back(std::move(kernel));
  }
  return spec;
}

GameSpec make_random_spec(int num_states, int num_actions, int horizon, double discount,
                          std::uint64_t seed) {
  if (num_states < 1 || num_actions < 1 || horizon < 1)
    throw ScenarioError("random generator: dimensions must be positive");
  GameSpec spec;
  spec.num_states = num_states;
  spec.num_actions = num_actions;
  spec.horizon = horizon;
  spec.discount = discount;
  spec.initial_dist = StateDist::uniform(num_states);
  Rng rng = make_rng(seed, 0xabcdef);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(num_states) * num_actions * num_states;
  spec.reward.resize(n);
  for (double& r : spec.reward) r = unif(rng);
  std::vector<double> ones(num_states, 1.0);
  for (int b = 0; b < num_actions; ++b) {
    std::vector<double> kernel(n);
    for (int s = 0; s < num_states; ++s)
      for (int a = 0; a < num_actions; ++a) {
        auto row = sample_dirichlet(ones, rng);
        std::copy(row.begin(), row.end(),
                  kernel.begin() + (static_cast<std::size_t>(s) * num_actions + a) * num_states);
      }
    spec.coupling.base_kernels.push_back(std::move(kernel));
  }
  return spec;
}

Scenario load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw ScenarioError("scenario file not found: " + path.string());
  json j;
  try {
    j = read_json_file(path, "scenario");
  } catch (const ArtifactError& e) {
    throw ScenarioError(e.what());
  }

  Scenario sc;
  try {
    const auto& g = j.at("game");
    std::string type = g.value("type", "explicit");
    sc.name = type;
    if (type == "explicit") {
      sc.spec = spec_from_json(g);
    } else if (type == "random") {
      sc.spec = make_random_spec(g.at("num_states").get<int>(), g.at("num_actions").get<int>(),
                                 g.at("horizon").get<int>(), g.at("discount").get<double>(),
                                 g.at("seed").get<std::uint64_t>());
    } else if (type == "security_investment") {
      sc.spec = make_security_investment_spec();
    } else if (type == "demand_response") {
      sc.spec = make_demand_response_spec();
    } else {
      throw ScenarioError("unknown game type: " + type);
    }
    if (g.contains("horizon") && type != "explicit" && type != "random")
      sc.spec.horizon = g.at("horizon").get<int>();
    if (g.contains("discount") && type != "explicit" && type != "random")
      sc.spec.discount = g.at("discount").get<double>();

    const auto& s = j.at("sim");
    sc.config.num_agents = s.at("agents").get<int>();
    sc.config.num_episodes = s.at("episodes").get<int>();
    sc.config.seed = s.at("seed").get<std::uint64_t>();
    sc.config.convergence_epsilon = s.value("epsilon", 0.05);
    sc.config.convergence_window = s.value("window", 10);
    sc.config.prior_strength = s.value("prior_strength", 1.0);
    sc.config.reward_learning = s.value("reward_learning", false);
    sc.config.retain_models = s.value("retain_models", false);
    sc.config.carry_over_states = s.value("carry_over_states", false);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario ") + path.string() + ": " + e.what());
  }

  auto rep = validate_spec(sc.spec);
  if (!rep.ok()) {
    std::string msg = "scenario " + path.string() + " fails validation:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw ScenarioError(msg);
  }
  if (sc.config.num_agents < 2) throw ScenarioError("sim.agents must be >= 2");
  if (sc.config.num_episodes < 1) throw ScenarioError("sim.episodes must be >= 1");
  if (sc.config.convergence_window < 1 ||
      sc.config.convergence_window > sc.config.num_episodes)
    throw ScenarioError("sim.window must satisfy 1 <= W <= episodes");
  if (!(sc.config.convergence_epsilon > 0.0)) throw ScenarioError("sim.epsilon must be > 0");
  if (!(sc.config.prior_strength > 0.0)) throw ScenarioError("sim.prior_strength must be > 0");
  return sc;
}

namespace {

json config_to_json(const SimConfig& c) {
  return {{"agents", c.num_agents},
          {"episodes", c.num_episodes},
          {"seed", c.seed},
          {"epsilon", c.convergence_epsilon},
          {"window", c.convergence_window},
          {"prior_strength", c.prior_strength},
          {"reward_learning", c.reward_learning},
          {"retain_models", c.retain_models},
          {"carry_over_states", c.carry_over_states}};
}

SimConfig config_from_json(const json& s) {
  SimConfig c;
  c.num_agents = s.at("agents").get<int>();
  c.num_episodes = s.at("episodes").get<int>();
  c.seed = s.at("seed").get<std::uint64_t>();
  c.convergence_epsilon = s.at("epsilon").get<double>();
  c.convergence_window = s.at("window").get<int>();
  c.prior_strength = s.at("prior_strength").get<double>();
  c.reward_learning = s.at("reward_learning").get<bool>();
  c.retain_models = s.at("retain_models").get<bool>();
  c.carry_over_states = s.at("carry_over_states").get<bool>();
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

void export_results(const RunResult& run, const GameSpec& spec, const SimConfig& config,
                    const std::string& scenario_name, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    std::ostringstream csv;
    csv << "episode,step,action,probability\n";
    for (std::size_t k = 0; k < run.alpha_trace.size(); ++k)
      for (std::size_t j = 0; j < run.alpha_trace[k].size(); ++j)
        for (int a = 0; a < run.alpha_trace[k][j].size(); ++a)
          csv << (k + 1) << ',' << (j + 1) << ',' << a << ','
              << fmt_double(run.alpha_trace[k][j](a)) << '\n';
    write_text(dir / "alpha_trace.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "episode,step,state,probability\n";
    for (std::size_t k = 0; k < run.state_dist_trace.size(); ++k)
      for (std::size_t j = 0; j < run.state_dist_trace[k].size(); ++j)
        for (int s = 0; s < run.state_dist_trace[k][j].size(); ++s)
          csv << (k + 1) << ',' << (j + 1) << ',' << s << ','
              << fmt_double(run.state_dist_trace[k][j](s)) << '\n';
    write_text(dir / "state_trace.csv", csv.str());
  }
  {
    json conv;
    conv["K_epsilon"] =
        run.convergence_episode ? json(*run.convergence_episode) : json(nullptr);
    conv["epsilon"] = config.convergence_epsilon;
    conv["window"] = config.convergence_window;
    json alpha = json::array(), f = json::array();
    for (const auto& d : run.alpha_hat) alpha.push_back(d.probs);
    for (const auto& d : run.f_hat) f.push_back(d.probs);
    conv["alpha_hat"] = std::move(alpha);
    conv["f_hat"] = std::move(f);
    write_text(dir / "convergence.json", conv.dump(2) + "\n");
  }
  {
    std::ostringstream csv;
    csv << "episode,gap,prefix_sum,azuma_envelope\n";
    if (!run.sampled_models.empty()) {
      ValueGapTrace trace = value_gap_trace(run, spec, kValueGapDelta);
      for (std::size_t k = 0; k < trace.gap.size(); ++k)
        csv << (k + 1) << ',' << fmt_double(trace.gap[k]) << ','
            << fmt_double(trace.prefix_sum[k]) << ','
            << fmt_double(trace.azuma_envelope[k]) << '\n';
    }
    write_text(dir / "value_gap.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "state,step,action\n";
    for (int s = 0; s < run.final_policy.num_states; ++s)
      for (int j = 0; j < run.final_policy.horizon; ++j)
        csv << s << ',' << (j + 1) << ',' << run.final_policy.at(j, s) << '\n';
    write_text(dir / "policy_final.csv", csv.str());
  }
  {
    json meta;
    meta["version"] = kVersion;
    meta["scenario"] = scenario_name;
    meta["seed"] = config.seed;
    meta["config"] = config_to_json(config);
    meta["game"] = spec_to_json(spec);
    meta["num_actions"] = spec.num_actions;
    meta["final_policy_agreement"] = run.final_policy_agreement;
    write_text(dir / "run_meta.json", meta.dump(2) + "\n");
  }
}

LoadedRun load_run_dir(const std::filesystem::path& dir) {
  LoadedRun out;
  json meta = read_json_file(dir / "run_meta.json", "run metadata");
  json conv = read_json_file(dir / "convergence.json", "convergence report");
  try {
    out.spec = spec_from_json(meta.at("game"));
    out.config = config_from_json(meta.at("config"));
    for (const auto& row : conv.at("alpha_hat"))
      out.alpha_hat.push_back({row.get<std::vector<double>>()});
    if (!conv.at("K_epsilon").is_null())
      out.convergence_episode = conv.at("K_epsilon").get<int>();
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("corrupt run artifacts in ") + dir.string() + ": " +
                        e.what());
  } catch (const ScenarioError& e) {
    throw ArtifactError(std::string("corrupt run metadata in ") + dir.string() + ": " +
                        e.what());
  }

  std::ifstream in(dir / "policy_final.csv");
  if (!in) throw ArtifactError("missing policy_final.csv in " + dir.string());
  out.final_policy.num_states = out.spec.num_states;
  out.final_policy.num_actions = out.spec.num_actions;
  out.final_policy.horizon = out.spec.horizon;
  out.final_policy.actions.assign(
      static_cast<std::size_t>(out.spec.horizon) * out.spec.num_states, 0);
  std::string line;
  std::getline(in, line); // header
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int s, j, a;
    if (std::sscanf(line.c_str(), "%d,%d,%d", &s, &j, &a) != 3)
      throw ArtifactError("malformed policy_final.csv row: " + line);
    if (s < 0 || s >= out.spec.num_states || j < 1 || j > out.spec.horizon)
      throw ArtifactError("policy_final.csv index out of range: " + line);
    out.final_policy.at(j - 1, s) = a;
    ++rows;
  }
  if (rows != out.spec.num_states * out.spec.horizon)
    throw ArtifactError("policy_final.csv has wrong row count");
  if (static_cast<int>(out.alpha_hat.size()) != out.spec.horizon)
    throw ArtifactError("alpha_hat has wrong number of steps");
  return out;
}

}  // namespace mfg
