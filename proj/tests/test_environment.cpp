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

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "lobsim/environment.hpp"
#include "lobsim/errors.hpp"
#include "lobsim/rng.hpp"
#include "test_support.hpp"

namespace lobsim {
namespace {

using testing::Book;
using testing::D;
using testing::HistoryOf;
using testing::P;
using testing::Q;

constexpr TimestampMs kT0 = 1622505600000;

HistoryPtr Synthetic(std::uint64_t seed, std::size_t n = 4000) {
  SyntheticFeedParams p;
  p.seed = seed;
  p.n_snapshots = n;
  p.start_time_ms = kT0;
  return GenerateSynthetic(p, MarketSpec{});
}

EpisodeParams Params(Side side = Side::kSell, const char* volume = "10") {
  EpisodeParams p;
  p.start_time = kT0;
  p.exec_time_ms = 300'000;
  p.direction = side;
  p.volume = Q(volume);
  p.seed = 9;
  return p;
}

long double L(const char* s) { return std::strtold(s, nullptr); }

TEST_CASE("observation layout matches a hand-computed vector") {
  // Snapshot i: best bid 100 + 0.1 i, best ask one tick above; bid level
  // quantities 1 + i, ask quantities 2 + i.
  std::vector<LobSnapshot> snaps;
  const char* bids[] = {"100", "100.1", "100.2"};
  const char* asks[] = {"100.1", "100.2", "100.3"};
  const char* bq[] = {"1", "2", "3"};
  const char* aq[] = {"2", "3", "4"};
  for (int i = 0; i < 3; ++i) {
    snaps.push_back(Book(kT0 + 100 * i, bids[i], asks[i], {bq[i]}, {aq[i]}));
  }
  HistoricalFeed feed(HistoryOf(snaps));
  feed.ResetTo(kT0 + 200);
  ScheduleParams sp;
  sp.start_time = kT0;
  const ExecutionAlgo algo =
      ExecutionAlgo::BuildTwap("rl", sp, Q("100"), Side::kBuy, MarketSpec{}, 0);
  const Observation obs = BuildObservation(feed, algo);

  // Oracle: mid of the latest snapshot, (p - mid) / mid in long double,
  // volumes in lots of 0.001.
  const long double mid = (L("100.2") + L("100.3")) / 2;
  const int source[5] = {0, 0, 0, 1, 2};  // left-padded window
  std::vector<long double> expected;
  for (int s : source) {
    for (int lvl = 0; lvl < 5; ++lvl) {
      expected.push_back((L(bids[s]) - L("0.1") * lvl - mid) / mid);
      expected.push_back(L(bq[s]) * 1000);
    }
    for (int lvl = 0; lvl < 5; ++lvl) {
      expected.push_back((L(asks[s]) + L("0.1") * lvl - mid) / mid);
      expected.push_back(L(aq[s]) * 1000);
    }
  }
  expected.push_back(1.0L);
  expected.push_back(9.0L);
  REQUIRE(expected.size() == kObservationSize);
  for (std::size_t i = 0; i < kObservationSize; ++i) {
    CAPTURE(i);
    CHECK(std::fabs(static_cast<long double>(obs[i]) - expected[i]) < 1e-12L);
  }
  // Latest best bid and ask sit symmetrically around the mid.
  CHECK(obs[80] == doctest::Approx(-obs[90]).epsilon(1e-15));
}


std::vector<TradeLogEntry> Trades(const char* owner,
                                  std::vector<std::pair<const char*, const char*>> fills,
                                  int bucket = 0) {
  std::vector<TradeLogEntry> log;
  for (auto [p, q] : fills) {
    log.push_back({kT0, owner, LogMessage::kTrade, P(p), Q(q), OrderKind::kLimit, bucket});
  }
  return log;
}

TEST_CASE("the latest mid normalizes to zero") {
  DeterministicRng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const LobSnapshot s = testing::RandomSnapshot(rng);
    REQUIRE(NormalizedPrice(s.mid(), s) == 0.0);
    REQUIRE(NormalizedPrice(s.best_bid().value(), s) ==
            -NormalizedPrice(s.best_ask().value(), s));
  }
}

TEST_CASE("bucket reward sign convention") {
  const auto rl_high = Trades("rl", {{"100.2", "1"}});
  const auto twap_par = Trades("twap", {{"100", "1"}});
  CHECK(BucketReward(rl_high, twap_par, 0, Side::kSell) == D("0.2"));
  CHECK(BucketReward(twap_par, twap_par, 0, Side::kSell) == D("0"));
  const auto rl_low = Trades("rl", {{"99.8", "1"}});
  CHECK(BucketReward(rl_low, twap_par, 0, Side::kBuy) == D("0.2"));
  CHECK(BucketReward(rl_high, twap_par, 0, Side::kBuy) == D("-0.2"));
  // Multi-fill VWAP: (100*1 + 100.3*3) / 4 = 100.225
  const auto rl_multi = Trades("rl", {{"100", "1"}, {"100.3", "3"}});
  CHECK(BucketReward(rl_multi, twap_par, 0, Side::kSell) == D("0.225"));
  CHECK(BucketReward(rl_multi, twap_par, 0, Side::kSell,
                     RewardMode::kVolumeWeighted) == D("0.9"));
  // Trades of other buckets are ignored.
  CHECK_THROWS_AS(BucketReward(rl_high, twap_par, 1, Side::kSell), InvalidState);
  CHECK_THROWS_AS(BucketReward({}, twap_par, 0, Side::kSell), InvalidState);
  CHECK(ParseRewardMode("volume_weighted") == RewardMode::kVolumeWeighted);
  CHECK_THROWS_AS(ParseRewardMode("sharpe"), InvalidArgument);
}

TEST_CASE("reset yields the opening observation") {
  Environment env(Synthetic(1), EnvironmentConfig{});
  const Observation obs = env.Reset(Params());
  CHECK(obs[100] == 1.0);
  CHECK(obs[101] == 9.0);
  CHECK(env.active());
  CHECK_FALSE(env.done());
  const Observation again = env.Reset(Params());
  CHECK(obs == again);
}

TEST_CASE("lifecycle errors") {
  Environment env(Synthetic(1), EnvironmentConfig{});
  CHECK_THROWS_AS(env.Step(1), InvalidState);
  env.Reset(Params());
  CHECK_THROWS_AS(env.Step(3), InvalidArgument);
  CHECK_THROWS_AS(env.Step(-1), InvalidArgument);
  while (!env.done()) env.Step(1);
  CHECK_THROWS_AS(env.Step(1), InvalidState);

  EpisodeParams late = Params();
  late.start_time = kT0 + 200'000;  // 4000 snapshots cover 400 s only
  CHECK_THROWS_AS(env.Reset(late), InvalidArgument);
  EnvironmentConfig bad;
  bad.action_factors = {};
  CHECK_THROWS_AS(Environment(Synthetic(1), bad), InvalidArgument);
}

TEST_CASE("ninety steps settle ten buckets") {
  Environment env(Synthetic(2), EnvironmentConfig{});
  env.Reset(Params());
  int steps = 0;
  std::vector<int> closed;
  while (!env.done()) {
    const StepResult r = env.Step(steps % 3);
    ++steps;
    if (r.info.bucket_closed) {
      closed.push_back(r.info.bucket);
      CHECK(r.observation[101] == (r.done ? 0.0 : 9.0));
    } else {
      CHECK(r.reward == D("0"));
    }
  }
  CHECK(steps == 90);
  CHECK(closed == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("constant neutral action mirrors the benchmark") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    Environment env(Synthetic(seed), EnvironmentConfig{});
    env.Reset(Params(seed % 2 ? Side::kBuy : Side::kSell));
    while (!env.done()) {
      const StepResult r = env.Step(1);
      REQUIRE(r.reward == D("0"));
      REQUIRE(r.info.rl_executed == r.info.twap_executed);
    }
    const auto& rl = env.broker().trade_log("rl");
    const auto& twap = env.broker().trade_log("twap");
    REQUIRE(rl.size() == twap.size());
    for (std::size_t i = 0; i < rl.size(); ++i) REQUIRE(SameExecution(rl[i], twap[i]));
  }
}

TEST_CASE("rewards equal a recomputation from the raw logs") {
  DeterministicRng rng(12);
  for (int ep = 0; ep < 10; ++ep) {
    Environment env(Synthetic(rng.NextU64()), EnvironmentConfig{});
    const Side side = rng.Bernoulli(0.5) ? Side::kBuy : Side::kSell;
    env.Reset(Params(side));
    Decimal total;
    while (!env.done()) {
      const StepResult r = env.Step(static_cast<int>(rng.UniformInt(0, 2)));
      total += r.reward;
      for (double x : r.observation) REQUIRE(std::isfinite(x));
    }
    // Independent recomputation: per-bucket sum of price*qty over qty.
    Decimal recomputed;
    for (int b = 0; b < 10; ++b) {
      long double vwap[2];
      int i = 0;
      for (const char* who : {"rl", "twap"}) {
        Int128 notional = 0;
        Int128 qty = 0;
        for (const TradeLogEntry& e : env.broker().trade_log(who)) {
          if (e.message != LogMessage::kTrade || e.bucket != b) continue;
          notional += static_cast<Int128>(e.price.units()) * e.volume.units();
          qty += e.volume.units();
        }
        REQUIRE(qty > 0);
        vwap[i++] = static_cast<long double>(notional) / static_cast<long double>(qty);
      }
      const long double diff = side == Side::kSell ? vwap[0] - vwap[1] : vwap[1] - vwap[0];
      recomputed += Decimal::FromUnits(std::llround(diff));
    }
    // Each bucket rounds once onto 1e-9, so allow one unit per bucket.
    CHECK(std::llabs((total - recomputed).units()) <= 10);
  }
}

TEST_CASE("replaying a recorded action prefix reproduces the continuation") {
  const HistoryPtr h = Synthetic(6);
  DeterministicRng rng(6);
  std::vector<int> actions;
  for (int i = 0; i < 90; ++i) actions.push_back(static_cast<int>(rng.UniformInt(0, 2)));

  Environment a(h, EnvironmentConfig{});
  a.Reset(Params());
  std::vector<StepResult> full;
  for (int act : actions) full.push_back(a.Step(act));

  Environment b(h, EnvironmentConfig{});
  b.Reset(Params());
  for (int i = 0; i < 40; ++i) b.Step(actions[static_cast<std::size_t>(i)]);
  for (std::size_t i = 40; i < actions.size(); ++i) {
    const StepResult r = b.Step(actions[i]);
    REQUIRE(r.observation == full[i].observation);
    REQUIRE(r.reward == full[i].reward);
    REQUIRE(r.done == full[i].done);
  }
}

TEST_CASE("seeded reset is reproducible and respects the data horizon") {
  std::vector<DayData> days = GenerateSyntheticDays(
      SyntheticFeedParams{.n_snapshots = 6000}, "2021-06-01", 3, MarketSpec{});
  const HistoryPtr h = AssembleHistory(days, MarketSpec{});
  EnvironmentConfig config;
  config.sampler.volumes = {Q("10")};
  Environment env(h, config);
  int sells = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const EpisodeParams p = env.SampleParams(seed);
    REQUIRE(p == env.SampleParams(seed));
    const DayRange* day = h->FindDay(DateOfTimestamp(p.start_time));
    REQUIRE(day != nullptr);
    REQUIRE(p.start_time + p.exec_time_ms + config.sampler.end_slack_ms <=
            h->snapshots[day->end - 1].timestamp);
    sells += p.direction == Side::kSell;
  }
  CHECK(sells > 60);
  CHECK(sells < 140);
  CHECK(env.Reset(7) == env.Reset(7));

  config.sampler.days = {"2021-06-02"};
  config.sampler.direction = Side::kBuy;
  Environment restricted(h, config);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const EpisodeParams p = restricted.SampleParams(seed);
    CHECK(DateOfTimestamp(p.start_time) == "2021-06-02");
    CHECK(p.direction == Side::kBuy);
  }
  config.sampler.exec_time_ms = {10'000'000};
  CHECK_THROWS_AS(Environment(h, config).SampleParams(1), InvalidArgument);
}

}  // namespace
}  // namespace lobsim
