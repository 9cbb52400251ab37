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

#include "lobsim/execution_algo.hpp"

#include <string>
#include <utility>

#include "lobsim/errors.hpp"
#include "lobsim/rng.hpp"

namespace lobsim {

std::string_view ToString(EventKind kind) {
  return kind == EventKind::kLimitOrder ? "limit_order" : "bucket_bound";
}

void ScheduleParams::Validate() const {
  if (n_buckets < 1) throw InvalidArgument("n_buckets must be >= 1");
  if (slices_per_bucket < 1) {
    throw InvalidArgument("slices_per_bucket must be >= 1");
  }
  if (exec_time_ms <= 0) throw InvalidArgument("exec_time_ms must be positive");
  const std::int64_t bucket_ms = exec_time_ms / n_buckets;
  if (bucket_ms < slices_per_bucket) {
    throw InvalidArgument("buckets too short for the number of slices");
  }
  if (bound_jitter_ms < 0 || 2 * bound_jitter_ms >= bucket_ms) {
    throw InvalidArgument(
        "bound jitter must be non-negative and below half a bucket");
  }
  if (!bucket_weights.empty()) {
    if (bucket_weights.size() != static_cast<std::size_t>(n_buckets)) {
      throw InvalidArgument("bucket_weights must have one entry per bucket");
    }
    for (Decimal w : bucket_weights) {
      if (!w.is_positive()) {
        throw InvalidArgument("bucket weights must be positive");
      }
    }
  }
}

ExecutionAlgo ExecutionAlgo::BuildTwap(std::string algo_id,
                                       const ScheduleParams& params,
                                       Quantity total_volume, Side direction,
                                       const MarketSpec& spec,
                                       std::uint64_t seed) {
  spec.Validate();
  ExecutionAlgo algo;
  algo.id_ = std::move(algo_id);
  algo.spec_ = spec;
  algo.Reset(params, total_volume, direction, seed);
  return algo;
}

void ExecutionAlgo::Reset(const ScheduleParams& params, Quantity total_volume,
                          Side direction, std::uint64_t seed) {
  params.Validate();
  if (!total_volume.is_positive() ||
      !total_volume.value().IsMultipleOf(spec_.lot_size.value())) {
    throw InvalidArgument("total volume must be a positive multiple of the lot");
  }
  const int n = params.n_buckets;
  const int slices = params.slices_per_bucket;
  const std::int64_t lot = spec_.lot_size.units();
  const std::int64_t total_lots = total_volume.units() / lot;
  if (total_lots < static_cast<std::int64_t>(n) * slices) {
    throw InvalidArgument("volume " + total_volume.ToString() +
                          " too small to give every slice one lot");
  }

  // Bucket bounds: nominal even split, interior bounds jittered, final bound
  // pinned to the horizon.
  DeterministicRng rng(seed);
  std::vector<TimestampMs> bounds(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    TimestampMs b = params.start_time +
                    static_cast<TimestampMs>(static_cast<Int128>(params.exec_time_ms) *
                                             (k + 1) / n);
    if (k + 1 < n && params.bound_jitter_ms > 0) {
      b += rng.UniformInt(-params.bound_jitter_ms, params.bound_jitter_ms);
    }
    bounds[static_cast<std::size_t>(k)] = b;
  }

  // Bucket volumes in lots, proportional to weight, rounded down; the last
  // bucket absorbs the remainder.
  std::vector<std::int64_t> weights;
  if (params.bucket_weights.empty()) {
    weights.assign(static_cast<std::size_t>(n), 1);
  } else {
    for (Decimal w : params.bucket_weights) weights.push_back(w.units());
  }
  Int128 weight_sum = 0;
  for (std::int64_t w : weights) weight_sum += w;
  std::vector<std::int64_t> bucket_lots(static_cast<std::size_t>(n));
  std::int64_t assigned = 0;
  for (int k = 0; k + 1 < n; ++k) {
    bucket_lots[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(
        static_cast<Int128>(total_lots) * weights[static_cast<std::size_t>(k)] /
        weight_sum);
    assigned += bucket_lots[static_cast<std::size_t>(k)];
  }
  bucket_lots.back() = total_lots - assigned;
  for (int k = 0; k < n; ++k) {
    if (bucket_lots[static_cast<std::size_t>(k)] < slices) {
      throw InvalidArgument("bucket " + std::to_string(k) +
                            " volume too small to give every slice one lot");
    }
  }

  params_ = params;
  direction_ = direction;
  total_volume_ = total_volume;
  remaining_volume_ = total_volume;
  current_bucket_ = 0;
  event_cursor_ = 0;
  events_.clear();
  bucket_volumes_.clear();
  base_volumes_.clear();
  events_.reserve(static_cast<std::size_t>(n) * (slices + 1));
  for (int k = 0; k < n; ++k) {
    const TimestampMs begin =
        k == 0 ? params.start_time : bounds[static_cast<std::size_t>(k - 1)];
    const TimestampMs end = bounds[static_cast<std::size_t>(k)];
    const std::int64_t lots = bucket_lots[static_cast<std::size_t>(k)];
    bucket_volumes_.push_back(Quantity::FromUnits(lots * lot));
    const std::int64_t slice_lots = lots / slices;
    for (int j = 0; j < slices; ++j) {
      events_.push_back({begin + (end - begin) * j / slices,
                         EventKind::kLimitOrder, k, j});
      const std::int64_t this_lots =
          j + 1 < slices ? slice_lots : lots - slice_lots * (slices - 1);
      base_volumes_.push_back(Quantity::FromUnits(this_lots * lot));
    }
    events_.push_back({end, EventKind::kBucketBound, k, 0});
  }
  scaled_volumes_ = base_volumes_;
  volumes_per_trade_ = base_volumes_;
  carried_volumes_.assign(base_volumes_.size(), Quantity());
  bucket_remaining_ = bucket_volumes_.front();
}

std::size_t ExecutionAlgo::LimitOrdinal(std::size_t event_index) const {
  if (event_index >= events_.size()) {
    throw InvalidArgument("event index " + std::to_string(event_index) +
                          " out of range");
  }
  const AlgoEvent& e = events_[event_index];
  if (e.kind != EventKind::kLimitOrder) {
    throw InvalidArgument("event " + std::to_string(event_index) +
                          " is a bucket bound, not a limit order");
  }
  return static_cast<std::size_t>(e.bucket) *
             static_cast<std::size_t>(params_.slices_per_bucket) +
         static_cast<std::size_t>(e.slice);
}

void ExecutionAlgo::ApplyVolumeFactor(std::size_t event_index, Decimal factor) {
  const std::size_t ord = LimitOrdinal(event_index);
  if (!factor.is_positive()) {
    throw InvalidArgument("volume factor must be positive");
  }
  scaled_volumes_[ord] = Quantity(MultiplyToIncrement(
      base_volumes_[ord].value(), factor, spec_.lot_size.value(),
      RoundingMode::kNearest));
  volumes_per_trade_[ord] = scaled_volumes_[ord] + carried_volumes_[ord];
}

std::optional<AlgoEvent> ExecutionAlgo::PopNextEvent() {
  if (event_cursor_ >= events_.size()) return std::nullopt;
  return events_[event_cursor_++];
}

const AlgoEvent* ExecutionAlgo::PeekNextEvent() const {
  if (event_cursor_ >= events_.size()) return nullptr;
  return &events_[event_cursor_];
}

const AlgoEvent* ExecutionAlgo::CurrentEvent() const {
  if (event_cursor_ == 0) return nullptr;
  return &events_[event_cursor_ - 1];
}

void ExecutionAlgo::CarryOverResidual(Quantity residual) {
  if (residual.is_zero()) return;
  const AlgoEvent* next = PeekNextEvent();
  if (next == nullptr || next->kind != EventKind::kLimitOrder) return;
  const std::size_t ord = LimitOrdinal(event_cursor_);
  carried_volumes_[ord] += residual;
  volumes_per_trade_[ord] += residual;
}

Quantity ExecutionAlgo::SubmittableVolume(std::size_t event_index) const {
  return min(volumes_per_trade_[LimitOrdinal(event_index)], bucket_remaining_);
}

void ExecutionAlgo::RecordFill(Quantity quantity) {
  if (quantity > bucket_remaining_) {
    throw InvalidState("fill of " + quantity.ToString() +
                       " exceeds bucket remaining " +
                       bucket_remaining_.ToString());
  }
  bucket_remaining_ -= quantity;
  remaining_volume_ -= quantity;
}

Quantity ExecutionAlgo::CloseBucket(bool dropped_residual) {
  Quantity dropped;
  if (dropped_residual) dropped = bucket_remaining_;
  ++current_bucket_;
  bucket_remaining_ =
      current_bucket_ < static_cast<int>(bucket_volumes_.size())
          ? bucket_volumes_[static_cast<std::size_t>(current_bucket_)]
          : Quantity();
  return dropped;
}

int ExecutionAlgo::LimitOrdersRemainingInBucket() const {
  int count = 0;
  for (std::size_t i = event_cursor_; i < events_.size(); ++i) {
    const AlgoEvent& e = events_[i];
    if (e.bucket != current_bucket_ || e.kind != EventKind::kLimitOrder) break;
    ++count;
  }
  return count;
}

std::string SerializeSchedule(const ExecutionAlgo& algo) {
  std::string out = "time_ms,kind,volume\n";
  std::size_t ord = 0;
  for (const AlgoEvent& e : algo.events()) {
    out += std::to_string(e.time);
    out += ',';
    out += ToString(e.kind);
    out += ',';
    if (e.kind == EventKind::kLimitOrder) {
      out += algo.volumes_per_trade()[ord++].ToString();
    } else {
      out += algo.bucket_volumes()[static_cast<std::size_t>(e.bucket)].ToString();
    }
    out += '\n';
  }
  return out;
}

}  // namespace lobsim
