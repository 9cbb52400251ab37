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

#include "lobsim/environment.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "lobsim/errors.hpp"
#include "lobsim/rng.hpp"

namespace lobsim {

std::string_view ToString(RewardMode mode) {
  return mode == RewardMode::kVwapDifference ? "vwap_difference"
                                             : "volume_weighted";
}

RewardMode ParseRewardMode(std::string_view text) {
  if (text == "vwap_difference") return RewardMode::kVwapDifference;
  if (text == "volume_weighted") return RewardMode::kVolumeWeighted;
  throw InvalidArgument("unknown reward mode '" + std::string(text) + "'");
}

Decimal BucketReward(std::span<const TradeLogEntry> rl_log,
                     std::span<const TradeLogEntry> twap_log, int bucket,
                     Side direction, RewardMode mode) {
  const std::vector<Fill> rl = BucketFills(rl_log, bucket);
  const std::vector<Fill> twap = BucketFills(twap_log, bucket);
  if (rl.empty() || twap.empty()) {
    throw InvalidState("bucket " + std::to_string(bucket) +
                       " has no trades for one of the algos");
  }
  Decimal diff = Vwap(rl) - Vwap(twap);
  if (direction == Side::kBuy) diff = -diff;
  if (mode == RewardMode::kVolumeWeighted) {
    Quantity executed;
    for (const Fill& f : rl) executed += f.quantity;
    diff = MultiplyToIncrement(diff, executed.value(), Decimal::FromUnits(1),
                               RoundingMode::kNearest);
  }
  return diff;
}

double NormalizedPrice(Decimal price, const LobSnapshot& latest) {
  // p / mid - 1 == (2p - (bid + ask)) / (bid + ask), all in exact units
  const std::int64_t two_mid =
      latest.best_bid().units() + latest.best_ask().units();
  return static_cast<double>(2 * price.units() - two_mid) /
         static_cast<double>(two_mid);
}

Observation BuildObservation(const HistoricalFeed& feed,
                             const ExecutionAlgo& rl_algo) {
  std::array<const LobSnapshot*, kObservedSnapshots> window{};
  feed.RecentWindow(window);
  const LobSnapshot& latest = *window.back();
  const double lot = static_cast<double>(feed.history().spec.lot_size.units());

  Observation obs{};
  std::size_t k = 0;
  auto put_level = [&](const Level& level) {
    obs[k++] = NormalizedPrice(level.price.value(), latest);
    obs[k++] = static_cast<double>(level.quantity.units()) / lot;
  };
  for (const LobSnapshot* s : window) {
    for (std::size_t i = 0; i < kObservedLevels; ++i) put_level(s->bids[i]);
    for (std::size_t i = 0; i < kObservedLevels; ++i) put_level(s->asks[i]);
  }

  const int bucket = rl_algo.current_bucket();
  double left_fraction = 0.0;
  if (bucket < static_cast<int>(rl_algo.bucket_volumes().size())) {
    const Quantity bucket_volume =
        rl_algo.bucket_volumes()[static_cast<std::size_t>(bucket)];
    left_fraction = static_cast<double>(rl_algo.bucket_remaining().units()) /
                    static_cast<double>(bucket_volume.units());
  }
  obs[k++] = left_fraction;
  obs[k++] = static_cast<double>(rl_algo.LimitOrdersRemainingInBucket());
  return obs;
}

Environment::Environment(HistoryPtr history, EnvironmentConfig config)
    : history_(std::move(history)), config_(std::move(config)),
      broker_(history_) {
  if (config_.action_factors.empty()) {
    throw InvalidArgument("action factor set is empty");
  }
  for (Decimal f : config_.action_factors) {
    if (!f.is_positive()) throw InvalidArgument("action factors must be positive");
  }
}

EpisodeParams Environment::SampleParams(std::uint64_t seed) const {
  const EpisodeSampler& s = config_.sampler;
  DeterministicRng rng(seed);
  auto pick = [&](const auto& options, const char* what) {
    if (options.empty()) {
      throw InvalidArgument(std::string("sampler has no choices for ") + what);
    }
    return options[static_cast<std::size_t>(
        rng.UniformInt(0, static_cast<std::int64_t>(options.size()) - 1))];
  };

  EpisodeParams p;
  p.seed = seed;
  p.exec_time_ms = pick(s.exec_time_ms, "exec_time_ms");
  p.volume = pick(s.volumes, "volumes");
  p.direction = s.direction ? *s.direction
                            : (rng.Bernoulli(0.5) ? Side::kBuy : Side::kSell);
  p.schedule.n_buckets = pick(s.n_buckets, "n_buckets");
  p.schedule.slices_per_bucket = pick(s.slices_per_bucket, "slices_per_bucket");
  p.schedule.bound_jitter_ms = pick(s.bound_jitter_ms, "bound_jitter_ms");
  p.schedule.bucket_weights = pick(s.bucket_weights, "bucket_weights");
  p.schedule.delete_vol = s.delete_vol;

  // Days on which at least one start time leaves room for the horizon.
  const auto& snaps = history_->snapshots;
  struct Candidate {
    std::size_t begin;
    std::size_t end;  // exclusive bound on feasible start indices
  };
  std::vector<Candidate> candidates;
  for (const DayRange& d : history_->days) {
    if (!s.days.empty() &&
        std::find(s.days.begin(), s.days.end(), d.date) == s.days.end()) {
      continue;
    }
    if (d.begin == d.end) continue;
    const TimestampMs latest_start =
        snaps[d.end - 1].timestamp - p.exec_time_ms - s.end_slack_ms;
    auto last = std::upper_bound(
        snaps.begin() + static_cast<std::ptrdiff_t>(d.begin),
        snaps.begin() + static_cast<std::ptrdiff_t>(d.end), latest_start,
        [](TimestampMs v, const LobSnapshot& x) { return v < x.timestamp; });
    const auto end = static_cast<std::size_t>(last - snaps.begin());
    if (end > d.begin) candidates.push_back({d.begin, end});
  }
  if (candidates.empty()) {
    throw InvalidArgument("no day in the history fits an execution of " +
                          std::to_string(p.exec_time_ms) + " ms");
  }
  const Candidate& day = pick(candidates, "days");
  const auto idx = static_cast<std::size_t>(rng.UniformInt(
      static_cast<std::int64_t>(day.begin),
      static_cast<std::int64_t>(day.end) - 1));
  p.start_time = snaps[idx].timestamp;
  return p;
}

Observation Environment::Reset(std::uint64_t seed) {
  return Reset(SampleParams(seed));
}

Observation Environment::Reset(const EpisodeParams& params) {
  const auto& snaps = history_->snapshots;
  if (params.start_time < snaps.front().timestamp ||
      params.start_time + params.exec_time_ms > snaps.back().timestamp) {
    throw InvalidArgument("execution window [" +
                          std::to_string(params.start_time) + ", +" +
                          std::to_string(params.exec_time_ms) +
                          " ms] is not covered by the loaded history");
  }
  EpisodeParams p = params;
  p.schedule.start_time = p.start_time;
  p.schedule.exec_time_ms = p.exec_time_ms;

  const MarketSpec& spec = history_->spec;
  std::vector<ExecutionAlgo> algos;
  algos.push_back(ExecutionAlgo::BuildTwap(std::string(kRlId), p.schedule,
                                           p.volume, p.direction, spec, p.seed));
  algos.push_back(ExecutionAlgo::BuildTwap(std::string(kTwapId), p.schedule,
                                           p.volume, p.direction, spec, p.seed));
  broker_.Reset(p.start_time, std::move(algos), config_.audit);
  params_ = std::move(p);
  active_ = true;
  done_ = false;
  step_index_ = 0;
  return Observe();
}

Observation Environment::Observe() const {
  return BuildObservation(broker_.feed(kRlId), broker_.algo(kRlId));
}

StepResult Environment::Step(int action) {
  if (!active_ || done_) {
    throw InvalidState(done_ ? "step called after the episode finished"
                             : "step called before reset");
  }
  if (action < 0 || action >= action_count()) {
    throw InvalidArgument("action " + std::to_string(action) +
                          " outside [0, " + std::to_string(action_count()) +
                          ")");
  }
  const AlgoEvent* pending = broker_.PendingEvent();
  if (pending == nullptr || pending->kind != EventKind::kLimitOrder) {
    throw InvalidState("no pending limit order to act on");
  }

  ExecutionAlgo& rl = broker_.mutable_algo(kRlId);
  rl.ApplyVolumeFactor(rl.event_cursor(),
                       config_.action_factors[static_cast<std::size_t>(action)]);
  broker_.SimulateNextEvent();

  StepResult result;
  const AlgoEvent* next = broker_.PendingEvent();
  if (!broker_.truncated() && next != nullptr &&
      next->kind == EventKind::kBucketBound) {
    const int bucket = next->bucket;
    broker_.SimulateNextEvent();
    result.info.bucket = bucket;
    result.info.bucket_closed = true;
    if (!broker_.truncated()) {
      const auto rl_fills = BucketFills(broker_.trade_log(kRlId), bucket);
      const auto twap_fills = BucketFills(broker_.trade_log(kTwapId), bucket);
      if (!rl_fills.empty()) result.info.rl_vwap = Vwap(rl_fills);
      if (!twap_fills.empty()) result.info.twap_vwap = Vwap(twap_fills);
      if (rl_fills.empty() || twap_fills.empty()) {
        result.info.empty_bucket = true;
      } else {
        result.reward =
            BucketReward(broker_.trade_log(kRlId), broker_.trade_log(kTwapId),
                         bucket, params_.direction, config_.reward_mode);
      }
    }
  }
  ++step_index_;

  result.info.truncated = broker_.truncated();
  const ExecutionAlgo& twap = broker_.algo(kTwapId);
  result.info.rl_executed = rl.total_volume() - rl.remaining_volume();
  result.info.twap_executed = twap.total_volume() - twap.remaining_volume();
  next = broker_.PendingEvent();
  done_ = result.info.truncated || next == nullptr;
  if (!done_) broker_.AdvanceTo(next->time);
  result.done = done_;
  result.observation = Observe();
  return result;
}

}  // namespace lobsim
