// Copyright 2026 The lobsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOBSIM_HARNESS_HPP_
#define LOBSIM_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lobsim/environment.hpp"
#include "lobsim/policy.hpp"

namespace lobsim {

struct StepRecord {
  Observation observation{};  // what the policy saw
  int action = 0;
  Decimal reward;
  bool done = false;
  StepInfo info;
};

struct EpisodeRecord {
  std::uint64_t seed = 0;
  EpisodeParams params;
  std::vector<StepRecord> steps;
  Observation final_observation{};
  std::vector<TradeLogEntry> rl_log;
  std::vector<TradeLogEntry> twap_log;
  std::vector<std::size_t> rl_visited;  // populated when auditing
  std::vector<std::size_t> twap_visited;
  bool truncated = false;
  Decimal total_reward;
};

// Runs one episode to completion. Parameters are sampled from the config
// with `seed` unless `fixed` is given. Deterministic in (config, policy,
// seed).
EpisodeRecord RunEpisode(const EnvironmentConfig& config, HistoryPtr history,
                         Policy& policy, std::uint64_t seed,
                         const EpisodeParams* fixed = nullptr);

// Dates (YYYY-MM-DD) for one train/eval split.
struct EvalWindow {
  std::vector<std::string> train_days;
  std::vector<std::string> eval_days;

  bool operator==(const EvalWindow&) const = default;
};

// Sliding windows stepping by eval_len: the eval period of window k is the
// train period of window k+1 when train_len == eval_len.
std::vector<EvalWindow> MakeWindows(std::span<const std::string> dates,
                                    int train_len, int eval_len);

struct EpisodeSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  TimestampMs start_time = 0;
  Side direction = Side::kBuy;
  Quantity volume;
  Decimal total_reward;
  bool truncated = false;
  Quantity rl_executed;
  Quantity twap_executed;
  std::size_t steps = 0;

  bool operator==(const EpisodeSummary&) const = default;
};

struct RewardStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

// Mean and standard deviation of total rewards in record order.
RewardStats ComputeRewardStats(std::span<const EpisodeSummary> episodes);

struct EvalReport {
  std::optional<EvalWindow> window;
  std::string policy;
  std::uint64_t master_seed = 0;
  std::size_t n_episodes = 0;
  double mean_reward = 0.0;
  double std_reward = 0.0;
  std::vector<EpisodeSummary> episodes;
};

// Runs n_episodes with seeds DeriveSeed(master_seed, i). When `window` is
// set, start days are restricted to its eval days. Episodes may run on
// `workers` threads; results do not depend on the worker count.
EvalReport EvaluatePolicy(const EnvironmentConfig& config, HistoryPtr history,
                          const PolicyFactory& policy, std::size_t n_episodes,
                          std::uint64_t master_seed, int workers = 1,
                          const std::optional<EvalWindow>& window = {});

// Iterate-and-evaluate protocol over consecutive windows: one report per
// window, each evaluated on the window's eval days.
std::vector<EvalReport> RunWindowProtocol(const EnvironmentConfig& config,
                                          HistoryPtr history,
                                          const PolicyFactory& policy,
                                          std::span<const EvalWindow> windows,
                                          std::size_t n_episodes,
                                          std::uint64_t master_seed,
                                          int workers = 1);

enum class ConformanceCheck { kReproducibility, kDuplicity, kRounding };

std::string_view ToString(ConformanceCheck check);
ConformanceCheck ParseConformanceCheck(std::string_view text);

struct CheckResult {
  ConformanceCheck check = ConformanceCheck::kReproducibility;
  bool passed = false;
  std::string detail;
  // Reproducibility: index of the first differing trade-log entry.
  std::optional<std::size_t> first_divergence;
  // Rounding with delete_vol: volume dropped at bounds, per algo.
  std::optional<Quantity> expected_shortfall;
};

struct ConformanceReport {
  std::uint64_t seed = 0;
  EpisodeParams params;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

struct ConformanceOptions {
  // Re-run reproducibility on a copy of the history whose second half of the
  // episode window is shifted by one tick.
  bool inject_fault = false;
  std::string policy = "random";
};

ConformanceReport RunConformance(std::span<const ConformanceCheck> checks,
                                 const EnvironmentConfig& config,
                                 HistoryPtr history, std::uint64_t seed,
                                 const ConformanceOptions& options = {});

}  // namespace lobsim

#endif  // LOBSIM_HARNESS_HPP_
