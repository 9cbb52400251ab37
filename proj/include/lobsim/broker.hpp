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

#ifndef LOBSIM_BROKER_HPP_
#define LOBSIM_BROKER_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobsim/data_feed.hpp"
#include "lobsim/execution_algo.hpp"
#include "lobsim/market_types.hpp"

namespace lobsim {

// Result of simulating one order or one schedule event for one algo. The
// entries it produced are trade_log(algo_id)[log_begin, log_end).
struct EventOutcome {
  std::string algo_id;
  std::optional<AlgoEvent> event;
  std::size_t log_begin = 0;
  std::size_t log_end = 0;
  // Limit orders: volume left unfilled when the order stopped.
  // Market orders: volume left unfilled at end of data.
  Quantity residual;
  // Bucket residual discarded at a bound (delete_vol only).
  Quantity dropped;
  // Feed ran out before the order could finish.
  bool truncated = false;
};

// Simulates child-order executions for several execution algos over the same
// immutable history. Each algo gets its own lane: a private feed cursor and
// trade log. Lanes advance in lock-step over identical event times and never
// affect each other.
class Broker {
 public:
  explicit Broker(HistoryPtr history);

  // Clears all logs, positions every lane's feed on the first snapshot at or
  // after `start_time` and installs `algos`, which must share one event
  // timeline. Throws OutOfRange when start_time is past the data.
  void Reset(TimestampMs start_time, std::vector<ExecutionAlgo> algos,
             bool audit = false);

  // A limit order repriced one tick inside the same-side best quote
  // on every snapshot, matched against the following snapshot, until filled
  // or `until` is reached. Unfilled volume is carried per the schedule.
  EventOutcome SimulateLimitOrder(std::string_view algo_id, Quantity volume,
                                  TimestampMs until);

  // A market order walking successive snapshots until filled.
  EventOutcome SimulateMarketOrder(std::string_view algo_id, Quantity volume);

  // Pops and simulates the pending schedule event of every lane.
  std::vector<EventOutcome> SimulateNextEvent();

  // Simulates every pending event with time < until, then advances the
  // broker clock to `until`.
  std::map<std::string, std::vector<TradeLogEntry>> SimulateUntil(
      TimestampMs until);

  const ExecutionAlgo& algo(std::string_view algo_id) const;
  ExecutionAlgo& mutable_algo(std::string_view algo_id);
  const HistoricalFeed& feed(std::string_view algo_id) const;
  const std::vector<TradeLogEntry>& trade_log(std::string_view algo_id) const;
  std::span<const TradeLogEntry> entries(const EventOutcome& outcome) const;
  std::vector<std::string> algo_ids() const;

  // Fast-forwards every lane's cursor to the latest snapshot at or before t.
  void AdvanceTo(TimestampMs t);

  // Next event shared by all lanes, or nullptr when the schedule is done.
  const AlgoEvent* PendingEvent() const;
  TimestampMs current_time() const { return current_time_; }
  bool truncated() const { return truncated_; }
  const HistoryPtr& history() const { return history_; }

 private:
  struct Lane {
    ExecutionAlgo algo;
    HistoricalFeed feed;
    std::vector<TradeLogEntry> log;
  };

  Lane& lane(std::string_view algo_id);
  const Lane& lane(std::string_view algo_id) const;
  EventOutcome ProcessEvent(Lane& lane);
  void Append(Lane& lane, TimestampMs t, LogMessage message, Price price,
              Quantity volume, OrderKind kind);

  HistoryPtr history_;
  std::vector<Lane> lanes_;
  TimestampMs current_time_ = 0;
  bool truncated_ = false;
};

// Limit price for a repriced passive order: one tick below the best bid for
// buys, one tick above the best ask for sells.
Price PassiveLimitPrice(const LobSnapshot& snapshot, Side side,
                        const MarketSpec& spec);

// `timestamp_ms,algo_id,message,price,volume,kind` records, one per line.
std::string SerializeTradeLog(std::span<const TradeLogEntry> log);

// Sum of traded volume in a log.
Quantity ExecutedVolume(std::span<const TradeLogEntry> log);

// Trades of one bucket as fills.
std::vector<Fill> BucketFills(std::span<const TradeLogEntry> log, int bucket);

}  // namespace lobsim

#endif  // LOBSIM_BROKER_HPP_
