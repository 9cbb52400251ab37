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

#ifndef LOBSIM_EXECUTION_ALGO_HPP_
#define LOBSIM_EXECUTION_ALGO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lobsim/decimal.hpp"
#include "lobsim/market_types.hpp"

namespace lobsim {

enum class EventKind { kLimitOrder, kBucketBound };

std::string_view ToString(EventKind kind);

struct AlgoEvent {
  TimestampMs time = 0;
  EventKind kind = EventKind::kLimitOrder;
  int bucket = 0;
  int slice = 0;  // meaningful for limit orders only

  bool operator==(const AlgoEvent&) const = default;
};

struct ScheduleParams {
  TimestampMs start_time = 0;
  std::int64_t exec_time_ms = 300'000;
  int n_buckets = 10;
  int slices_per_bucket = 9;
  // Half-width of the uniform jitter applied to interior bucket bounds.
  std::int64_t bound_jitter_ms = 0;
  // Relative bucket weights; empty means uniform (plain TWAP).
  std::vector<Decimal> bucket_weights;
  // Drop unexecuted bucket volume at the bound instead of market-ordering it.
  bool delete_vol = false;

  void Validate() const;
  bool operator==(const ScheduleParams&) const = default;
};

// TWAP bucket schedule plus the execution bookkeeping shared by the TWAP
// benchmark and the RL-controlled algo. Events are laid out bucket by bucket
// as `slices_per_bucket` limit orders followed by one bucket bound.
class ExecutionAlgo {
 public:
  static ExecutionAlgo BuildTwap(std::string algo_id,
                                 const ScheduleParams& params,
                                 Quantity total_volume, Side direction,
                                 const MarketSpec& spec, std::uint64_t seed);

  // Rebuilds the schedule from scratch; only the id survives.
  void Reset(const ScheduleParams& params, Quantity total_volume,
             Side direction, std::uint64_t seed);

  // Sets the volume of limit event `event_index` to
  // round_nearest(base * factor) + carried residual.
  void ApplyVolumeFactor(std::size_t event_index, Decimal factor);

  // Returns the event at the cursor and advances; nullopt once complete.
  std::optional<AlgoEvent> PopNextEvent();
  const AlgoEvent* PeekNextEvent() const;
  // The event most recently popped.
  const AlgoEvent* CurrentEvent() const;

  // Folds an unfilled limit residual into the next event: a following limit
  // order in the same bucket absorbs it; at a bucket bound it simply stays in
  // bucket_remaining for the bound's market order.
  void CarryOverResidual(Quantity residual);

  // Volume a limit order submitted at `event_index` should carry: its
  // scheduled volume capped by what is left of the bucket.
  Quantity SubmittableVolume(std::size_t event_index) const;

  // Records an execution against the current bucket.
  void RecordFill(Quantity quantity);

  // Settles the current bucket at its bound and opens the next one. Returns
  // the volume dropped (non-zero only with delete_vol).
  Quantity CloseBucket(bool dropped_residual);

  const std::string& id() const { return id_; }
  Side direction() const { return direction_; }
  const MarketSpec& spec() const { return spec_; }
  const ScheduleParams& params() const { return params_; }
  Quantity total_volume() const { return total_volume_; }
  Quantity remaining_volume() const { return remaining_volume_; }
  Quantity bucket_remaining() const { return bucket_remaining_; }
  int current_bucket() const { return current_bucket_; }
  std::size_t event_cursor() const { return event_cursor_; }
  const std::vector<AlgoEvent>& events() const { return events_; }
  const std::vector<Quantity>& bucket_volumes() const { return bucket_volumes_; }
  // One entry per limit-order event, in schedule order.
  const std::vector<Quantity>& volumes_per_trade() const {
    return volumes_per_trade_;
  }
  const std::vector<Quantity>& base_volumes() const { return base_volumes_; }

  // Index into volumes_per_trade for a limit event; throws InvalidArgument
  // for out-of-range indices and bucket bounds.
  std::size_t LimitOrdinal(std::size_t event_index) const;

  // Limit orders of the current bucket not yet popped.
  int LimitOrdersRemainingInBucket() const;

  bool operator==(const ExecutionAlgo&) const = default;

 private:
  ExecutionAlgo() = default;

  std::string id_;
  MarketSpec spec_;
  ScheduleParams params_;
  Side direction_ = Side::kBuy;
  Quantity total_volume_;
  Quantity remaining_volume_;
  Quantity bucket_remaining_;
  int current_bucket_ = 0;
  std::size_t event_cursor_ = 0;
  std::vector<AlgoEvent> events_;
  std::vector<Quantity> bucket_volumes_;
  std::vector<Quantity> base_volumes_;
  std::vector<Quantity> scaled_volumes_;
  std::vector<Quantity> carried_volumes_;
  std::vector<Quantity> volumes_per_trade_;
};

// Schedule as (time, kind, volume) lines, for golden files. Bound volume is
// the bucket volume.
std::string SerializeSchedule(const ExecutionAlgo& algo);

}  // namespace lobsim

#endif  // LOBSIM_EXECUTION_ALGO_HPP_
