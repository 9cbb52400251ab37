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

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "lobsim/errors.hpp"
#include "lobsim/execution_algo.hpp"
#include "lobsim/rng.hpp"
#include "test_support.hpp"

namespace lobsim {
namespace {

using testing::D;
using testing::Q;

constexpr TimestampMs kStart = 1622505600000;

ExecutionAlgo Twap(int buckets, int slices, const char* volume,
                   std::int64_t exec_ms = 300'000, std::int64_t jitter = 0,
                   std::uint64_t seed = 1) {
  ScheduleParams p;
  p.start_time = kStart;
  p.exec_time_ms = exec_ms;
  p.n_buckets = buckets;
  p.slices_per_bucket = slices;
  p.bound_jitter_ms = jitter;
  return ExecutionAlgo::BuildTwap("twap", p, Q(volume), Side::kBuy, MarketSpec{},
                                  seed);
}

TEST_CASE("10 buckets x 9 slices over five minutes") {
  const ExecutionAlgo a = Twap(10, 9, "100");
  REQUIRE(a.events().size() == 100);
  int limits = 0;
  int bounds = 0;
  for (const AlgoEvent& e : a.events()) {
    (e.kind == EventKind::kLimitOrder ? limits : bounds)++;
  }
  CHECK(limits == 90);
  CHECK(bounds == 10);
  for (int k = 0; k < 10; ++k) {
    const AlgoEvent& bound = a.events()[static_cast<std::size_t>(k * 10 + 9)];
    CHECK(bound.kind == EventKind::kBucketBound);
    CHECK(bound.time == kStart + 30'000 * (k + 1));
    CHECK(a.bucket_volumes()[static_cast<std::size_t>(k)] == Q("10"));
  }
  // 10 / 9 in lots: eight slices of 1.111 and a last slice of 1.112.
  for (int j = 0; j < 8; ++j) CHECK(a.volumes_per_trade()[static_cast<std::size_t>(j)] == Q("1.111"));
  CHECK(a.volumes_per_trade()[8] == Q("1.112"));
  CHECK(a.events()[1].time == kStart + 30'000 / 9);
  CHECK(a.bucket_remaining() == Q("10"));
  CHECK(a.remaining_volume() == Q("100"));
}

TEST_CASE("evenly divisible volume gives equal slices") {
  const ExecutionAlgo a = Twap(10, 9, "90");
  for (Quantity v : a.volumes_per_trade()) CHECK(v == Q("1"));
  const ExecutionAlgo b = Twap(1, 1, "5");
  REQUIRE(b.events().size() == 2);
  CHECK(b.events()[0] == AlgoEvent{kStart, EventKind::kLimitOrder, 0, 0});
  CHECK(b.events()[1] == AlgoEvent{kStart + 300'000, EventKind::kBucketBound, 0, 0});
  CHECK(b.volumes_per_trade() == std::vector<Quantity>{Q("5")});
}

TEST_CASE("build errors") {
  CHECK_THROWS_AS(Twap(10, 9, "0.089"), InvalidArgument);  // 89 lots < 90
  CHECK_NOTHROW(Twap(10, 9, "0.09"));
  CHECK_THROWS_AS(Twap(0, 9, "100"), InvalidArgument);
  CHECK_THROWS_AS(Twap(10, 0, "100"), InvalidArgument);
  CHECK_THROWS_AS(Twap(10, 9, "100.0005"), InvalidArgument);
  CHECK_THROWS_AS(Twap(10, 9, "100", 300'000, 15'000), InvalidArgument);
  CHECK_THROWS_AS(Twap(10, 9, "100", 80), InvalidArgument);
}

TEST_CASE("volume factor scales the base volume") {
  ExecutionAlgo a = Twap(1, 2, "20");
  a.ApplyVolumeFactor(0, D("1.2"));
  CHECK(a.volumes_per_trade()[0] == Q("12"));
  a.ApplyVolumeFactor(0, D("1.2"));  // not compounding
  CHECK(a.volumes_per_trade()[0] == Q("12"));
  a.ApplyVolumeFactor(0, D("1"));
  CHECK(a.volumes_per_trade()[0] == Q("10"));

  ExecutionAlgo b = Twap(1, 1, "1.111");
  b.ApplyVolumeFactor(0, D("0.8"));
  // 1111 lots * 0.8 = 888.8 lots, nearest 889 lots
  CHECK(b.volumes_per_trade()[0].units() == 889 * Q("0.001").units());

  CHECK_THROWS_AS(a.ApplyVolumeFactor(2, D("1")), InvalidArgument);  // bound
  CHECK_THROWS_AS(a.ApplyVolumeFactor(7, D("1")), InvalidArgument);
  CHECK_THROWS_AS(a.ApplyVolumeFactor(0, D("0")), InvalidArgument);
}

TEST_CASE("pop walks every event then reports completion") {
  ExecutionAlgo a = Twap(1, 1, "5");
  CHECK(a.CurrentEvent() == nullptr);
  CHECK(a.PopNextEvent()->kind == EventKind::kLimitOrder);
  CHECK(a.PopNextEvent()->kind == EventKind::kBucketBound);
  CHECK_FALSE(a.PopNextEvent().has_value());
  CHECK(a.PeekNextEvent() == nullptr);

  ExecutionAlgo b = Twap(10, 9, "100");
  int popped = 0;
  TimestampMs last = 0;
  while (auto e = b.PopNextEvent()) {
    CHECK(e->time >= last);
    last = e->time;
    ++popped;
  }
  CHECK(popped == 100);
}

TEST_CASE("carry over residual") {
  ExecutionAlgo a = Twap(1, 2, "20");
  a.PopNextEvent();
  a.RecordFill(Q("7"));
  a.CarryOverResidual(Q("3"));
  CHECK(a.volumes_per_trade()[1] == Q("13"));
  CHECK(a.SubmittableVolume(1) == Q("13"));
  // Scaling keeps the carried part.
  a.ApplyVolumeFactor(1, D("1.2"));
  CHECK(a.volumes_per_trade()[1] == Q("15"));
  a.CarryOverResidual(Q("0"));
  CHECK(a.volumes_per_trade()[1] == Q("15"));
  // Submission is capped by the bucket.
  CHECK(a.SubmittableVolume(1) == Q("13"));

  ExecutionAlgo b = Twap(1, 2, "10");
  b.PopNextEvent();
  b.RecordFill(Q("5"));
  b.PopNextEvent();
  b.RecordFill(Q("1"));
  b.CarryOverResidual(Q("4"));
  CHECK(b.PeekNextEvent()->kind == EventKind::kBucketBound);
  CHECK(b.bucket_remaining() == Q("4"));
  CHECK(b.volumes_per_trade() == std::vector<Quantity>{Q("5"), Q("5")});
  CHECK_THROWS_AS(b.RecordFill(Q("5")), InvalidState);
}

TEST_CASE("close bucket opens the next and reports dropped volume") {
  ExecutionAlgo a = Twap(2, 1, "10");
  a.PopNextEvent();
  a.RecordFill(Q("2"));
  a.PopNextEvent();
  CHECK(a.CloseBucket(true) == Q("3"));
  CHECK(a.current_bucket() == 1);
  CHECK(a.bucket_remaining() == Q("5"));
  CHECK(a.LimitOrdersRemainingInBucket() == 1);
  a.PopNextEvent();
  CHECK(a.LimitOrdersRemainingInBucket() == 0);
  a.PopNextEvent();
  CHECK(a.CloseBucket(false) == Q("0"));
}

TEST_CASE("reset restores the freshly built state") {
  ScheduleParams p;
  p.start_time = kStart;
  p.bound_jitter_ms = 2000;
  ExecutionAlgo a =
      ExecutionAlgo::BuildTwap("rl", p, Q("100"), Side::kSell, MarketSpec{}, 5);
  const ExecutionAlgo fresh = a;
  a.PopNextEvent();
  a.ApplyVolumeFactor(0, D("1.2"));
  a.RecordFill(Q("1"));
  a.Reset(p, Q("100"), Side::kSell, 5);
  CHECK(a == fresh);
  CHECK(a.id() == "rl");

  a.Reset(p, Q("100"), Side::kSell, 6);
  CHECK(a.events() != fresh.events());
  CHECK(a.events().back() == fresh.events().back());  // final bound pinned
}

TEST_CASE("jittered bounds stay inside their window") {
  DeterministicRng rng(8);
  for (int i = 0; i < 300; ++i) {
    ScheduleParams p;
    p.start_time = kStart;
    p.n_buckets = static_cast<int>(rng.UniformInt(1, 12));
    p.slices_per_bucket = static_cast<int>(rng.UniformInt(1, 12));
    p.exec_time_ms = rng.UniformInt(60'000, 900'000);
    const std::int64_t bucket_ms = p.exec_time_ms / p.n_buckets;
    p.bound_jitter_ms = rng.UniformInt(0, (bucket_ms - 1) / 2);
    const std::int64_t lots =
        rng.UniformInt(p.n_buckets * p.slices_per_bucket, 500'000);
    const Quantity volume = Quantity::FromUnits(lots * Q("0.001").units());
    const std::uint64_t seed = rng.NextU64();
    const ExecutionAlgo a = ExecutionAlgo::BuildTwap("x", p, volume, Side::kBuy,
                                                     MarketSpec{}, seed);
    REQUIRE(a == ExecutionAlgo::BuildTwap("x", p, volume, Side::kBuy,
                                          MarketSpec{}, seed));
    REQUIRE(a.events().size() ==
            static_cast<std::size_t>(p.n_buckets * (p.slices_per_bucket + 1)));
    REQUIRE(a.events().back().time == kStart + p.exec_time_ms);
    TimestampMs prev = kStart;
    for (const AlgoEvent& e : a.events()) {
      REQUIRE(e.time >= prev);
      REQUIRE(e.time <= kStart + p.exec_time_ms);
      prev = e.time;
    }
    Quantity sum_buckets;
    for (Quantity q : a.bucket_volumes()) sum_buckets += q;
    REQUIRE(sum_buckets == volume);
    for (int k = 0; k < p.n_buckets; ++k) {
      Quantity sum_slices;
      for (int j = 0; j < p.slices_per_bucket; ++j) {
        const Quantity v =
            a.volumes_per_trade()[static_cast<std::size_t>(k * p.slices_per_bucket + j)];
        REQUIRE(v.is_positive());
        sum_slices += v;
      }
      REQUIRE(sum_slices == a.bucket_volumes()[static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("bucket weights split volume proportionally") {
  ScheduleParams p;
  p.n_buckets = 3;
  p.slices_per_bucket = 1;
  p.bucket_weights = {D("1"), D("2"), D("1")};
  const ExecutionAlgo a =
      ExecutionAlgo::BuildTwap("w", p, Q("10"), Side::kBuy, MarketSpec{}, 0);
  CHECK(a.bucket_volumes() == std::vector<Quantity>{Q("2.5"), Q("5"), Q("2.5")});
  p.bucket_weights = {D("1"), D("1")};
  CHECK_THROWS_AS(
      ExecutionAlgo::BuildTwap("w", p, Q("10"), Side::kBuy, MarketSpec{}, 0),
      InvalidArgument);
}

TEST_CASE("schedule serialization") {
  const ExecutionAlgo a = Twap(2, 2, "1", 1000);
  CHECK(SerializeSchedule(a) ==
        "time_ms,kind,volume\n"
        "1622505600000,limit_order,0.25\n"
        "1622505600250,limit_order,0.25\n"
        "1622505600500,bucket_bound,0.5\n"
        "1622505600500,limit_order,0.25\n"
        "1622505600750,limit_order,0.25\n"
        "1622505601000,bucket_bound,0.5\n");
}

}  // namespace
}  // namespace lobsim
