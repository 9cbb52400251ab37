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

#include "lobsim/market_types.hpp"

#include <string>

#include "lobsim/errors.hpp"

namespace lobsim {

std::string_view ToString(Side side) {
  return side == Side::kBuy ? "buy" : "sell";
}

std::string_view ToString(OrderKind kind) {
  return kind == OrderKind::kLimit ? "limit" : "market";
}

Side ParseSide(std::string_view text) {
  if (text == "buy") return Side::kBuy;
  if (text == "sell") return Side::kSell;
  throw InvalidArgument("unknown side '" + std::string(text) + "'");
}

std::string_view ToString(LogMessage message) {
  switch (message) {
    case LogMessage::kPlacement:
      return "placement";
    case LogMessage::kTrade:
      return "trade";
    case LogMessage::kCancellation:
      return "cancellation";
    case LogMessage::kBucketMarketSubmit:
      return "bucket_market_submit";
  }
  return "unknown";
}

Order Order::Limit(Side side, Price price, Quantity volume,
                   TimestampMs placed_at) {
  Order o;
  o.side = side;
  o.kind = OrderKind::kLimit;
  o.price = price;
  o.volume = volume;
  o.placed_at = placed_at;
  return o;
}

Order Order::Market(Side side, Quantity volume, TimestampMs placed_at) {
  Order o;
  o.side = side;
  o.kind = OrderKind::kMarket;
  o.volume = volume;
  o.placed_at = placed_at;
  return o;
}

bool SameExecution(const TradeLogEntry& a, const TradeLogEntry& b) {
  return a.timestamp == b.timestamp && a.message == b.message &&
         a.price == b.price && a.volume == b.volume && a.kind == b.kind &&
         a.bucket == b.bucket;
}

void MarketSpec::Validate() const {
  if (!tick_size.is_positive()) {
    throw InvalidArgument("tick_size must be positive");
  }
  if (!lot_size.is_positive()) {
    throw InvalidArgument("lot_size must be positive");
  }
  if (levels_per_side != 10) {
    throw InvalidArgument("levels_per_side must be 10 for the snapshot format");
  }
  if (snapshot_interval_ms <= 0) {
    throw InvalidArgument("snapshot_interval_ms must be positive");
  }
}

Decimal Vwap(std::span<const Fill> fills) {
  if (fills.empty()) throw EmptyTrades("vwap of an empty trade list");
  Int128 notional = 0;
  Int128 volume = 0;
  for (const Fill& f : fills) {
    if (f.quantity.units() < 0) {
      throw InvalidArgument("negative trade quantity");
    }
    notional += static_cast<Int128>(f.price.units()) * f.quantity.units();
    volume += f.quantity.units();
  }
  if (volume == 0) throw InvalidArgument("vwap with zero total quantity");
  // price units * qty units / qty units = price units
  const Int128 units = DivRound(notional, volume, RoundingMode::kNearest);
  return Decimal::FromUnits(static_cast<std::int64_t>(units));
}

}  // namespace lobsim
