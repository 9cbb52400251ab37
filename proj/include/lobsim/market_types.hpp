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

#ifndef LOBSIM_MARKET_TYPES_HPP_
#define LOBSIM_MARKET_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lobsim/decimal.hpp"

namespace lobsim {

using TimestampMs = std::int64_t;

// Strongly typed wrapper so prices and quantities cannot be mixed up.
template <typename Tag>
class Amount {
 public:
  constexpr Amount() = default;
  constexpr explicit Amount(Decimal value) : value_(value) {}

  static Amount Parse(std::string_view text) {
    return Amount(Decimal::Parse(text));
  }
  static constexpr Amount FromUnits(std::int64_t units) {
    return Amount(Decimal::FromUnits(units));
  }

  constexpr Decimal value() const { return value_; }
  constexpr std::int64_t units() const { return value_.units(); }
  std::string ToString() const { return value_.ToString(); }
  double ToDouble() const { return value_.ToDouble(); }
  constexpr bool is_zero() const { return value_.is_zero(); }
  constexpr bool is_positive() const { return value_.is_positive(); }

  Amount& operator+=(Amount o) {
    value_ += o.value_;
    return *this;
  }
  Amount& operator-=(Amount o) {
    value_ -= o.value_;
    return *this;
  }
  friend Amount operator+(Amount a, Amount b) { return a += b; }
  friend Amount operator-(Amount a, Amount b) { return a -= b; }

  friend constexpr auto operator<=>(Amount, Amount) = default;
  friend constexpr bool operator==(Amount, Amount) = default;

 private:
  Decimal value_;
};

struct PriceTag {};
struct QuantityTag {};
using Price = Amount<PriceTag>;        // quote currency (USDT)
using Quantity = Amount<QuantityTag>;  // base asset (BTC)

template <typename Tag>
Amount<Tag> min(Amount<Tag> a, Amount<Tag> b) {
  return b < a ? b : a;
}

enum class Side { kBuy, kSell };
enum class OrderKind { kLimit, kMarket };

std::string_view ToString(Side side);
std::string_view ToString(OrderKind kind);
Side ParseSide(std::string_view text);
constexpr Side Opposite(Side s) {
  return s == Side::kBuy ? Side::kSell : Side::kBuy;
}

struct Order {
  std::uint64_t id = 0;
  std::string owner;
  Side side = Side::kBuy;
  OrderKind kind = OrderKind::kLimit;
  std::optional<Price> price;  // present iff kind == kLimit
  Quantity volume;
  TimestampMs placed_at = 0;

  static Order Limit(Side side, Price price, Quantity volume,
                     TimestampMs placed_at = 0);
  static Order Market(Side side, Quantity volume, TimestampMs placed_at = 0);
};

enum class LogMessage { kPlacement, kTrade, kCancellation, kBucketMarketSubmit };

std::string_view ToString(LogMessage message);

struct TradeLogEntry {
  TimestampMs timestamp = 0;
  std::string owner;
  LogMessage message = LogMessage::kPlacement;
  Price price;
  Quantity volume;
  OrderKind kind = OrderKind::kLimit;
  // Bucket of the order that produced the entry. Kept in memory only; the
  // serialized record format does not carry it.
  int bucket = 0;

  bool operator==(const TradeLogEntry&) const = default;
};

// Equal in every field except the owner.
bool SameExecution(const TradeLogEntry& a, const TradeLogEntry& b);

struct MarketSpec {
  Price tick_size = Price::Parse("0.1");
  Quantity lot_size = Quantity::Parse("0.001");
  int levels_per_side = 10;
  std::int64_t snapshot_interval_ms = 100;

  // Throws InvalidArgument when a field is out of range.
  void Validate() const;
  bool operator==(const MarketSpec&) const = default;
};

struct Fill {
  Price price;
  Quantity quantity;

  bool operator==(const Fill&) const = default;
};

// Volume-weighted average price, exact up to one final rounding onto the
// 1e-9 grid. Not rounded to the tick: it is a statistic, not a quote.
Decimal Vwap(std::span<const Fill> fills);

}  // namespace lobsim

#endif  // LOBSIM_MARKET_TYPES_HPP_
