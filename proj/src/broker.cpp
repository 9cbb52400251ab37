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

#include "lobsim/broker.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "lobsim/errors.hpp"
#include "lobsim/lob.hpp"

namespace lobsim {

Price PassiveLimitPrice(const LobSnapshot& snapshot, Side side,
                        const MarketSpec& spec) {
  if (side == Side::kBuy) {
    Price p = snapshot.best_bid() - spec.tick_size;
    if (!p.is_positive()) p = spec.tick_size;
    return Price(RoundToIncrement(p.value(), spec.tick_size.value(),
                                  RoundingMode::kDown));
  }
  const Price p = snapshot.best_ask() + spec.tick_size;
  return Price(RoundToIncrement(p.value(), spec.tick_size.value(),
                                RoundingMode::kUp));
}

Broker::Broker(HistoryPtr history) : history_(std::move(history)) {
  if (!history_ || history_->snapshots.empty()) {
    throw InvalidArgument("broker requires a non-empty history");
  }
}

void Broker::Reset(TimestampMs start_time, std::vector<ExecutionAlgo> algos,
                   bool audit) {
  if (algos.empty()) throw InvalidArgument("broker needs at least one algo");
  for (std::size_t i = 0; i < algos.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (algos[i].id() == algos[j].id()) {
        throw InvalidArgument("duplicate algo id " + algos[i].id());
      }
    }
    const auto& a = algos[i].events();
    const auto& b = algos[0].events();
    const bool same_timeline =
        a.size() == b.size() &&
        std::equal(a.begin(), a.end(), b.begin(),
                   [](const AlgoEvent& x, const AlgoEvent& y) {
                     return x.time == y.time && x.kind == y.kind;
                   });
    if (!same_timeline) {
      throw InvalidArgument("algo " + algos[i].id() +
                            " does not share the event timeline");
    }
  }
  std::vector<Lane> lanes;
  lanes.reserve(algos.size());
  for (ExecutionAlgo& algo : algos) {
    HistoricalFeed feed(history_);
    feed.set_audit(audit);
    feed.ResetTo(start_time);
    lanes.push_back(Lane{std::move(algo), std::move(feed), {}});
  }
  lanes_ = std::move(lanes);
  current_time_ = lanes_.front().feed.current().timestamp;
  truncated_ = false;
}

Broker::Lane& Broker::lane(std::string_view algo_id) {
  for (Lane& l : lanes_) {
    if (l.algo.id() == algo_id) return l;
  }
  throw InvalidArgument("unknown algo id " + std::string(algo_id));
}

const Broker::Lane& Broker::lane(std::string_view algo_id) const {
  for (const Lane& l : lanes_) {
    if (l.algo.id() == algo_id) return l;
  }
  throw InvalidArgument("unknown algo id " + std::string(algo_id));
}

const ExecutionAlgo& Broker::algo(std::string_view algo_id) const {
  return lane(algo_id).algo;
}

ExecutionAlgo& Broker::mutable_algo(std::string_view algo_id) {
  return lane(algo_id).algo;
}

const HistoricalFeed& Broker::feed(std::string_view algo_id) const {
  return lane(algo_id).feed;
}

const std::vector<TradeLogEntry>& Broker::trade_log(
    std::string_view algo_id) const {
  return lane(algo_id).log;
}

std::span<const TradeLogEntry> Broker::entries(
    const EventOutcome& outcome) const {
  const auto& log = trade_log(outcome.algo_id);
  return std::span<const TradeLogEntry>(log).subspan(
      outcome.log_begin, outcome.log_end - outcome.log_begin);
}

std::vector<std::string> Broker::algo_ids() const {
  std::vector<std::string> ids;
  for (const Lane& l : lanes_) ids.push_back(l.algo.id());
  return ids;
}

const AlgoEvent* Broker::PendingEvent() const {
  if (lanes_.empty()) return nullptr;
  return lanes_.front().algo.PeekNextEvent();
}

void Broker::AdvanceTo(TimestampMs t) {
  for (Lane& l : lanes_) l.feed.AdvanceTo(t);
  current_time_ = std::max(current_time_, t);
}

void Broker::Append(Lane& lane, TimestampMs t, LogMessage message, Price price,
                    Quantity volume, OrderKind kind) {
  lane.log.push_back(TradeLogEntry{t, lane.algo.id(), message, price, volume,
                                   kind, lane.algo.current_bucket()});
}

EventOutcome Broker::SimulateLimitOrder(std::string_view algo_id,
                                        Quantity volume, TimestampMs until) {
  Lane& l = lane(algo_id);
  ExecutionAlgo& algo = l.algo;
  const Side side = algo.direction();
  const MarketSpec& spec = history_->spec;

  EventOutcome out;
  out.algo_id = algo.id();
  out.log_begin = l.log.size();
  if (!volume.is_positive()) {
    throw InvalidArgument("limit order volume must be positive");
  }

  Quantity left = volume;
  TimestampMs t = l.feed.current().timestamp;
  Price price;
  bool placed = false;
  while (left.is_positive() && t < until) {
    price = PassiveLimitPrice(l.feed.current(), side, spec);
    Append(l, t, LogMessage::kPlacement, price, left, OrderKind::kLimit);
    placed = true;
    const LobSnapshot* next = l.feed.NextSnapshot();
    if (next == nullptr) {
      out.truncated = true;
      break;
    }
    t = next->timestamp;
    const FillReport report = ExecuteRestingLimitAgainstSnapshot(
        Order::Limit(side, price, left), *next);
    const Quantity filled = report.filled();
    if (filled.is_positive()) {
      Append(l, t, LogMessage::kTrade, price, filled, OrderKind::kLimit);
      left -= filled;
      algo.RecordFill(filled);
    }
  }
  out.residual = left;
  if (left.is_positive() && !out.truncated) {
    if (placed) {
      Append(l, t, LogMessage::kCancellation, price, left, OrderKind::kLimit);
    }
    algo.CarryOverResidual(left);
  }
  truncated_ = truncated_ || out.truncated;
  out.log_end = l.log.size();
  return out;
}

EventOutcome Broker::SimulateMarketOrder(std::string_view algo_id,
                                         Quantity volume) {
  Lane& l = lane(algo_id);
  ExecutionAlgo& algo = l.algo;
  const Side side = algo.direction();

  EventOutcome out;
  out.algo_id = algo.id();
  out.log_begin = l.log.size();
  if (!volume.is_positive()) {
    throw InvalidArgument("market order volume must be positive");
  }
  Append(l, l.feed.current().timestamp, LogMessage::kBucketMarketSubmit,
         BestQuote(l.feed.current(), Opposite(side)), volume,
         OrderKind::kMarket);
  Quantity left = volume;
  while (left.is_positive()) {
    const LobSnapshot* next = l.feed.NextSnapshot();
    if (next == nullptr) {
      out.truncated = true;
      break;
    }
    const FillReport report =
        ExecuteMarketAgainstSnapshot(Order::Market(side, left), *next);
    for (const Fill& f : report.trades) {
      Append(l, next->timestamp, LogMessage::kTrade, f.price, f.quantity,
             OrderKind::kMarket);
      algo.RecordFill(f.quantity);
    }
    left = report.residual_volume;
  }
  out.residual = left;
  truncated_ = truncated_ || out.truncated;
  out.log_end = l.log.size();
  return out;
}

EventOutcome Broker::ProcessEvent(Lane& l) {
  ExecutionAlgo& algo = l.algo;
  const std::optional<AlgoEvent> event = algo.PopNextEvent();
  if (!event) throw InvalidState("schedule already complete");
  const std::size_t event_index = algo.event_cursor() - 1;
  l.feed.AdvanceTo(event->time);

  EventOutcome out;
  if (event->kind == EventKind::kLimitOrder) {
    const Quantity volume = algo.SubmittableVolume(event_index);
    // Every bucket ends in a bound, so a limit event always has a successor.
    const TimestampMs until = algo.PeekNextEvent()->time;
    if (volume.is_positive()) {
      out = SimulateLimitOrder(algo.id(), volume, until);
    } else {
      out.algo_id = algo.id();
      out.log_begin = out.log_end = l.log.size();
    }
  } else {
    const Quantity left = algo.bucket_remaining();
    const bool drop = algo.params().delete_vol;
    if (left.is_positive() && !drop) {
      out = SimulateMarketOrder(algo.id(), left);
    } else {
      out.algo_id = algo.id();
      out.log_begin = l.log.size();
      if (left.is_positive()) {
        Append(l, l.feed.current().timestamp, LogMessage::kCancellation,
               BestQuote(l.feed.current(), Opposite(algo.direction())), left,
               OrderKind::kMarket);
      }
      out.log_end = l.log.size();
    }
    out.dropped = algo.CloseBucket(drop);
  }
  out.event = event;
  return out;
}

std::vector<EventOutcome> Broker::SimulateNextEvent() {
  const AlgoEvent* pending = PendingEvent();
  if (pending == nullptr) throw InvalidState("schedule already complete");
  const TimestampMs t = pending->time;
  std::vector<EventOutcome> outcomes;
  outcomes.reserve(lanes_.size());
  for (Lane& l : lanes_) outcomes.push_back(ProcessEvent(l));
  current_time_ = std::max(current_time_, t);
  return outcomes;
}

std::map<std::string, std::vector<TradeLogEntry>> Broker::SimulateUntil(
    TimestampMs until) {
  std::map<std::string, std::vector<TradeLogEntry>> produced;
  for (const Lane& l : lanes_) produced[l.algo.id()];
  while (const AlgoEvent* pending = PendingEvent()) {
    if (pending->time >= until || truncated_) break;
    for (const EventOutcome& o : SimulateNextEvent()) {
      const auto span = entries(o);
      auto& dst = produced[o.algo_id];
      dst.insert(dst.end(), span.begin(), span.end());
    }
  }
  current_time_ = std::max(current_time_, until);
  return produced;
}

std::string SerializeTradeLog(std::span<const TradeLogEntry> log) {
  std::string out;
  out.reserve(log.size() * 48);
  for (const TradeLogEntry& e : log) {
    out += std::to_string(e.timestamp);
    out += ',';
    out += e.owner;
    out += ',';
    out += ToString(e.message);
    out += ',';
    out += e.price.ToString();
    out += ',';
    out += e.volume.ToString();
    out += ',';
    out += ToString(e.kind);
    out += '\n';
  }
  return out;
}

Quantity ExecutedVolume(std::span<const TradeLogEntry> log) {
  Quantity total;
  for (const TradeLogEntry& e : log) {
    if (e.message == LogMessage::kTrade) total += e.volume;
  }
  return total;
}

std::vector<Fill> BucketFills(std::span<const TradeLogEntry> log, int bucket) {
  std::vector<Fill> fills;
  for (const TradeLogEntry& e : log) {
    if (e.message == LogMessage::kTrade && e.bucket == bucket) {
      fills.push_back({e.price, e.volume});
    }
  }
  return fills;
}

}  // namespace lobsim
