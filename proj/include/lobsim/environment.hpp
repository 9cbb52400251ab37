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

#ifndef LOBSIM_ENVIRONMENT_HPP_
#define LOBSIM_ENVIRONMENT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobsim/broker.hpp"
#include "lobsim/data_feed.hpp"
#include "lobsim/execution_algo.hpp"
#include "lobsim/market_types.hpp"

namespace lobsim {

inline constexpr std::size_t kObservedSnapshots = 5;
inline constexpr std::size_t kObservedLevels = 5;
// 5 snapshots x (5 bid + 5 ask levels) x (price, volume), plus the bucket
// volume left fraction and the limit orders left in the bucket.
inline constexpr std::size_t kObservationSize =
    kObservedSnapshots * kObservedLevels * 2 * 2 + 2;
static_assert(kObservationSize == 102);

using Observation = std::array<double, kObservationSize>;

enum class RewardMode {
  kVwapDifference,  // per-unit VWAP difference
  kVolumeWeighted,  // VWAP difference times the bucket's executed volume
};

std::string_view ToString(RewardMode mode);
RewardMode ParseRewardMode(std::string_view text);

struct EpisodeParams {
  TimestampMs start_time = 0;
  std::int64_t exec_time_ms = 300'000;
  Side direction = Side::kBuy;
  Quantity volume = Quantity::Parse("100");
  // start_time and exec_time_ms above take precedence over the copies here.
  ScheduleParams schedule;
  std::uint64_t seed = 0;

  bool operator==(const EpisodeParams&) const = default;
};

// Ranges the environment samples episode parameters from on a seeded reset.
struct EpisodeSampler {
  std::vector<std::string> days;  // eligible days; empty means every day
  std::vector<std::int64_t> exec_time_ms{300'000};
  std::vector<Quantity> volumes{Quantity::Parse("100")};
  std::optional<Side> direction;  // nullopt: fair coin per episode
  std::vector<int> n_buckets{10};
  std::vector<int> slices_per_bucket{9};
  std::vector<std::int64_t> bound_jitter_ms{0};
  std::vector<std::vector<Decimal>> bucket_weights{{}};
  bool delete_vol = false;
  // Data kept free after the horizon for the final bound's market order.
  std::int64_t end_slack_ms = 10'000;
};

struct EnvironmentConfig {
  std::vector<Decimal> action_factors{Decimal::Parse("0.8"),
                                      Decimal::Parse("1"),
                                      Decimal::Parse("1.2")};
  RewardMode reward_mode = RewardMode::kVwapDifference;
  EpisodeSampler sampler;
  // Record snapshot visits for duplicity audits.
  bool audit = false;
};

struct StepInfo {
  int bucket = -1;  // bucket settled during this step, -1 otherwise
  bool bucket_closed = false;
  bool truncated = false;
  bool empty_bucket = false;  // one side had no trades in the settled bucket
  std::optional<Decimal> rl_vwap;
  std::optional<Decimal> twap_vwap;
  Quantity rl_executed;    // cumulative over the episode
  Quantity twap_executed;  // cumulative over the episode
};

struct StepResult {
  Observation observation{};
  Decimal reward;
  bool done = false;
  StepInfo info;
};

// Bucket reward: VWAP(rl) - VWAP(twap) when selling, negated when
// buying. Throws InvalidState when either side has no trades in the bucket.
Decimal BucketReward(std::span<const TradeLogEntry> rl_log,
                     std::span<const TradeLogEntry> twap_log, int bucket,
                     Side direction,
                     RewardMode mode = RewardMode::kVwapDifference);

// Price relative to the snapshot's mid: p / mid - 1, evaluated exactly in
// fixed point and converted to double once.
double NormalizedPrice(Decimal price, const LobSnapshot& latest);

// Observation from the most recent five snapshots of `feed` and the RL
// algo's bucket state.
Observation BuildObservation(const HistoricalFeed& feed,
                             const ExecutionAlgo& rl_algo);

// Episodic reset/step wrapper: an RL-controlled algo and a TWAP benchmark
// follow the same schedule over the same history; actions scale the RL
// algo's limit-order volumes and rewards compare the two at bucket bounds.
class Environment {
 public:
  static constexpr std::string_view kRlId = "rl";
  static constexpr std::string_view kTwapId = "twap";

  Environment(HistoryPtr history, EnvironmentConfig config);

  Observation Reset(const EpisodeParams& params);
  // Samples parameters from the config's sampler.
  Observation Reset(std::uint64_t seed);
  StepResult Step(int action);

  EpisodeParams SampleParams(std::uint64_t seed) const;

  int action_count() const {
    return static_cast<int>(config_.action_factors.size());
  }
  bool done() const { return done_; }
  bool active() const { return active_; }
  const EpisodeParams& params() const { return params_; }
  const EnvironmentConfig& config() const { return config_; }
  const Broker& broker() const { return broker_; }
  const HistoryPtr& history() const { return history_; }
  // Index of the step the next action will drive.
  int step_index() const { return step_index_; }

 private:
  Observation Observe() const;

  HistoryPtr history_;
  EnvironmentConfig config_;
  Broker broker_;
  EpisodeParams params_;
  bool active_ = false;
  bool done_ = false;
  int step_index_ = 0;
};

}  // namespace lobsim

#endif  // LOBSIM_ENVIRONMENT_HPP_
