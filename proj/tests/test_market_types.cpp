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

#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "lobsim/decimal.hpp"
#include "lobsim/errors.hpp"
#include "lobsim/market_types.hpp"
#include "lobsim/rng.hpp"
#include "test_support.hpp"

namespace lobsim {
namespace {

using testing::D;
using testing::P;
using testing::Q;

// Reference rounding done on plain integers scaled by 10^9, written
// independently of Decimal's implementation.
std::int64_t ScaledOracle(const std::string& text) {
  bool neg = !text.empty() && text[0] == '-';
  std::string body = neg ? text.substr(1) : text;
  auto dot = body.find('.');
  std::string whole = body.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : body.substr(dot + 1);
  frac.resize(9, '0');
  std::int64_t v = std::stoll(whole.empty() ? "0" : whole) * 1000000000LL +
                   std::stoll(frac);
  return neg ? -v : v;
}

std::int64_t OracleRound(std::int64_t x, std::int64_t inc, RoundingMode mode) {
  std::int64_t q = x / inc;
  std::int64_t r = x % inc;
  if (r < 0) {  // make q the floor
    q -= 1;
    r += inc;
  }
  switch (mode) {
    case RoundingMode::kDown:
      return q * inc;
    case RoundingMode::kUp:
      return (r == 0 ? q : q + 1) * inc;
    case RoundingMode::kNearest:
      if (2 * r > inc) return (q + 1) * inc;
      if (2 * r < inc) return q * inc;
      return (x >= 0 ? q + 1 : q) * inc;  // tie: away from zero
  }
  return 0;
}

TEST_CASE("round_to_increment examples") {
  CHECK(RoundToIncrement(D("100.07"), D("0.05"), RoundingMode::kDown) ==
        D("100.05"));
  CHECK(RoundToIncrement(D("100.05"), D("0.05"), RoundingMode::kNearest) ==
        D("100.05"));
  CHECK(RoundToIncrement(D("100.07"), D("0.05"), RoundingMode::kUp) ==
        D("100.1"));
  CHECK(RoundToIncrement(D("1.1116"), D("0.001"), RoundingMode::kNearest) ==
        D("1.112"));
  CHECK(RoundToIncrement(D("1.1115"), D("0.001"), RoundingMode::kNearest) ==
        D("1.112"));
  CHECK(RoundToIncrement(D("-1.1115"), D("0.001"), RoundingMode::kNearest) ==
        D("-1.112"));
  CHECK(RoundToIncrement(D("-100.07"), D("0.05"), RoundingMode::kDown) ==
        D("-100.1"));
}

TEST_CASE("round_to_increment agrees with the integer-scaled oracle") {
  struct Case {
    const char* x;
    const char* inc;
  };
  const std::vector<Case> cases = {
      {"1.1116", "0.001"}, {"100.07", "0.05"}, {"100.05", "0.05"},
      {"0.0005", "0.001"}, {"-3.25", "0.5"},   {"35000.04", "0.1"},
      {"7", "3"},          {"-7", "3"},        {"0.000000001", "0.001"}};
  for (const Case& c : cases) {
    for (auto mode :
         {RoundingMode::kDown, RoundingMode::kUp, RoundingMode::kNearest}) {
      CAPTURE(c.x);
      CAPTURE(c.inc);
      CHECK(RoundToIncrement(D(c.x), D(c.inc), mode).units() ==
            OracleRound(ScaledOracle(c.x), ScaledOracle(c.inc), mode));
    }
  }
  CHECK(OracleRound(ScaledOracle("1.1116"), ScaledOracle("0.001"),
                    RoundingMode::kNearest) == ScaledOracle("1.112"));
}

TEST_CASE("round_to_increment random values match the oracle") {
  DeterministicRng rng(7);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t x = rng.UniformInt(-1'000'000'000'000LL, 1'000'000'000'000LL);
    const std::int64_t inc = rng.UniformInt(1, 10'000'000'000LL);
    for (auto mode :
         {RoundingMode::kDown, RoundingMode::kUp, RoundingMode::kNearest}) {
      REQUIRE(RoundToIncrement(Decimal::FromUnits(x), Decimal::FromUnits(inc),
                               mode)
                  .units() == OracleRound(x, inc, mode));
    }
  }
}

TEST_CASE("round_to_increment rejects non-positive increments") {
  CHECK_THROWS_AS(RoundToIncrement(D("1"), D("0"), RoundingMode::kDown),
                  InvalidArgument);
  CHECK_THROWS_AS(RoundToIncrement(D("1"), D("-0.1"), RoundingMode::kUp),
                  InvalidArgument);
}

TEST_CASE("rounding is idempotent and lands on the grid") {
  DeterministicRng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Decimal x = Decimal::FromUnits(rng.UniformInt(-1'000'000'000'000LL,
                                                        1'000'000'000'000LL));
    const Decimal inc = Decimal::FromUnits(rng.UniformInt(1, 1'000'000'000LL));
    for (auto mode :
         {RoundingMode::kDown, RoundingMode::kUp, RoundingMode::kNearest}) {
      const Decimal once = RoundToIncrement(x, inc, mode);
      REQUIRE(once.IsMultipleOf(inc));
      REQUIRE(RoundToIncrement(once, inc, mode) == once);
      REQUIRE(once - x < inc);
      REQUIRE(x - once < inc);
    }
  }
}

TEST_CASE("multiply_to_increment rounds the exact product once") {
  CHECK(MultiplyToIncrement(D("1.111"), D("0.8"), D("0.001"),
                            RoundingMode::kNearest) == D("0.889"));
  CHECK(MultiplyToIncrement(D("10"), D("1.2"), D("0.001"),
                            RoundingMode::kNearest) == D("12"));
  CHECK(MultiplyToIncrement(D("0.0015"), D("1"), D("0.001"),
                            RoundingMode::kDown) == D("0.001"));
}

TEST_CASE("decimal parse and format") {
  CHECK(D("35000.1").ToString() == "35000.1");
  CHECK(D("-0.5").ToString() == "-0.5");
  CHECK(D("1.000").ToString() == "1");
  CHECK(D("0").ToString() == "0");
  CHECK(D("+2.5") == D("2.5"));
  CHECK(D(".5") == D("0.5"));
  for (const char* bad : {"", "abc", "1e5", ".", "1.2.3", "--1", "1.0000000001",
                          " 1", "1,5", "nan", "inf"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(D(bad), InvalidArgument);
  }
}

TEST_CASE("decimal string round-trip") {
  DeterministicRng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const Decimal x = Decimal::FromUnits(
        rng.UniformInt(-4'000'000'000'000'000'000LL, 4'000'000'000'000'000'000LL));
    REQUIRE(Decimal::Parse(x.ToString()) == x);
  }
}

TEST_CASE("decimal arithmetic overflow is reported") {
  const Decimal big = Decimal::FromUnits(INT64_MAX);
  CHECK_THROWS(big + Decimal::FromUnits(1));
  CHECK_THROWS(big * 2);
}

TEST_CASE("vwap examples") {
  const std::vector<Fill> a = {{P("100"), Q("1")}, {P("102"), Q("1")}};
  CHECK(Vwap(a) == D("101"));
  const std::vector<Fill> b = {{P("100"), Q("3")}, {P("110"), Q("1")}};
  CHECK(Vwap(b) == D("102.5"));
  const std::vector<Fill> one = {{P("35000.1"), Q("0.001")}};
  CHECK(Vwap(one) == D("35000.1"));
  // 100*1 + 100.1*2 = 300.2 over 3 -> 100.0666...67
  const std::vector<Fill> c = {{P("100"), Q("1")}, {P("100.1"), Q("2")}};
  CHECK(Vwap(c) == D("100.066666667"));
}

TEST_CASE("vwap errors") {
  CHECK_THROWS_AS(Vwap(std::vector<Fill>{}), EmptyTrades);
  const std::vector<Fill> zero = {{P("100"), Q("0")}};
  CHECK_THROWS_AS(Vwap(zero), InvalidArgument);
}

TEST_CASE("vwap lies within the traded price range") {
  DeterministicRng rng(5);
  for (int i = 0; i < 2000; ++i) {
    std::vector<Fill> fills;
    const int n = static_cast<int>(rng.UniformInt(1, 12));
    Price lo = Price::FromUnits(INT64_MAX);
    Price hi = Price::FromUnits(0);
    for (int k = 0; k < n; ++k) {
      Fill f{Price::FromUnits(rng.UniformInt(1, 500000) * 100'000'000LL),
             Quantity::FromUnits(rng.UniformInt(1, 10000) * 1'000'000LL)};
      lo = min(lo, f.price);
      hi = f.price > hi ? f.price : hi;
      fills.push_back(f);
    }
    const Decimal v = Vwap(fills);
    REQUIRE(v >= lo.value());
    REQUIRE(v <= hi.value());
  }
}

TEST_CASE("side helpers") {
  CHECK(ParseSide("buy") == Side::kBuy);
  CHECK(ParseSide("sell") == Side::kSell);
  CHECK_THROWS_AS(ParseSide("hold"), InvalidArgument);
  CHECK(Opposite(Side::kBuy) == Side::kSell);
  CHECK(ToString(Side::kSell) == "sell");
}

TEST_CASE("market spec validation") {
  MarketSpec spec;
  CHECK_NOTHROW(spec.Validate());
  spec.tick_size = P("0");
  CHECK_THROWS_AS(spec.Validate(), InvalidArgument);
  spec = MarketSpec{};
  spec.levels_per_side = 5;
  CHECK_THROWS_AS(spec.Validate(), InvalidArgument);
}

TEST_CASE("same_execution ignores the owner only") {
  TradeLogEntry a{100, "rl", LogMessage::kTrade, P("1"), Q("1"),
                  OrderKind::kLimit, 0};
  TradeLogEntry b = a;
  b.owner = "twap";
  CHECK(SameExecution(a, b));
  b.volume = Q("2");
  CHECK_FALSE(SameExecution(a, b));
}

}  // namespace
}  // namespace lobsim
