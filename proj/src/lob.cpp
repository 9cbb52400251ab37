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

#include "lobsim/lob.hpp"

#include <string>

#include "lobsim/errors.hpp"

namespace lobsim {

Decimal LobSnapshot::mid() const {
  return Divide(best_bid().value() + best_ask().value(), Decimal::FromInt(2));
}

void ValidateSnapshot(const LobSnapshot& s, const MarketSpec& spec,
                      std::size_t row) {
  auto fail = [&](const std::string& what) {
    throw DataIntegrityError("row " + std::to_string(row) + ": " + what);
  };
  for (std::size_t i = 0; i < kBookDepth; ++i) {
    const Level& b = s.bids[i];
    const Level& a = s.asks[i];
    if (!b.quantity.is_positive() || !a.quantity.is_positive()) {
      fail("non-positive quantity at level " + std::to_string(i + 1));
    }
    if (!b.price.is_positive() || !a.price.is_positive()) {
      fail("non-positive price at level " + std::to_string(i + 1));
    }
    if (!b.price.value().IsMultipleOf(spec.tick_size.value()) ||
        !a.price.value().IsMultipleOf(spec.tick_size.value())) {
      fail("price off tick grid at level " + std::to_string(i + 1));
    }
    if (!b.quantity.value().IsMultipleOf(spec.lot_size.value()) ||
        !a.quantity.value().IsMultipleOf(spec.lot_size.value())) {
      fail("quantity off lot grid at level " + std::to_string(i + 1));
    }
    if (i > 0) {
      if (!(b.price < s.bids[i - 1].price)) {
        fail("bid prices not strictly descending at level " +
             std::to_string(i + 1));
      }
      if (!(a.price > s.asks[i - 1].price)) {
        fail("ask prices not strictly ascending at level " +
             std::to_string(i + 1));
      }
    }
  }
  if (!(s.best_bid() < s.best_ask())) {
    fail("crossed book: best bid " + s.best_bid().ToString() +
         " >= best ask " + s.best_ask().ToString());
  }
}

std::string_view SnapshotCsvHeader() {
  static const std::string header = [] {
    std::string h = "timestamp_ms";
    const char* groups[] = {"bid_price_", "bid_qty_", "ask_price_", "ask_qty_"};
    for (const char* g : groups) {
      for (std::size_t i = 1; i <= kBookDepth; ++i) {
        h += ',';
        h += g;
        h += std::to_string(i);
      }
    }
    return h;
  }();
  return header;
}

LobSnapshot ParseSnapshotRow(std::string_view raw_row, const MarketSpec& spec,
                             std::size_t row) {
  if (!raw_row.empty() && raw_row.back() == '\r') raw_row.remove_suffix(1);
  std::array<std::string_view, kSnapshotFields> fields;
  std::size_t n = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = raw_row.find(',', start);
    const std::string_view field = raw_row.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    if (n == kSnapshotFields) {
      throw ParseError(row, "expected " + std::to_string(kSnapshotFields) +
                                " fields, got more");
    }
    fields[n++] = field;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (n != kSnapshotFields) {
    throw ParseError(row, "expected " + std::to_string(kSnapshotFields) +
                              " fields, got " + std::to_string(n));
  }

  LobSnapshot s;
  {
    const std::string_view ts = fields[0];
    if (ts.empty()) throw ParseError(row, "empty timestamp");
    TimestampMs value = 0;
    for (char c : ts) {
      if (c < '0' || c > '9') {
        throw ParseError(row, "malformed timestamp '" + std::string(ts) + "'");
      }
      value = value * 10 + (c - '0');
    }
    s.timestamp = value;
  }
  auto decimal_at = [&](std::size_t idx) {
    try {
      return Decimal::Parse(fields[idx]);
    } catch (const InvalidArgument& e) {
      throw ParseError(row, "field " + std::to_string(idx + 1) + ": " +
                                e.what());
    }
  };
  for (std::size_t i = 0; i < kBookDepth; ++i) {
    s.bids[i].price = Price(decimal_at(1 + i));
    s.bids[i].quantity = Quantity(decimal_at(1 + kBookDepth + i));
    s.asks[i].price = Price(decimal_at(1 + 2 * kBookDepth + i));
    s.asks[i].quantity = Quantity(decimal_at(1 + 3 * kBookDepth + i));
  }
  ValidateSnapshot(s, spec, row);
  return s;
}

std::string FormatSnapshotRow(const LobSnapshot& s) {
  std::string out = std::to_string(s.timestamp);
  out.reserve(400);
  for (const Level& l : s.bids) (out += ',') += l.price.ToString();
  for (const Level& l : s.bids) (out += ',') += l.quantity.ToString();
  for (const Level& l : s.asks) (out += ',') += l.price.ToString();
  for (const Level& l : s.asks) (out += ',') += l.quantity.ToString();
  return out;
}

Price BestQuote(const LobSnapshot& snapshot, Side side) {
  return side == Side::kBuy ? snapshot.best_bid() : snapshot.best_ask();
}

Quantity FillReport::filled() const {
  Quantity total;
  for (const Fill& f : trades) total += f.quantity;
  return total;
}

FillReport ExecuteMarketAgainstSnapshot(const Order& order,
                                        const LobSnapshot& snapshot) {
  if (!order.volume.is_positive()) {
    throw InvalidArgument("market order volume must be positive");
  }
  const auto& levels =
      order.side == Side::kBuy ? snapshot.asks : snapshot.bids;
  FillReport report;
  Quantity left = order.volume;
  for (const Level& level : levels) {
    if (left.is_zero()) break;
    const Quantity take = min(left, level.quantity);
    report.trades.push_back({level.price, take});
    left -= take;
  }
  report.residual_volume = left;
  report.exhausted_book = left.is_positive();
  return report;
}

FillReport ExecuteRestingLimitAgainstSnapshot(const Order& order,
                                              const LobSnapshot& snapshot) {
  if (order.kind != OrderKind::kLimit || !order.price) {
    throw InvalidArgument("resting execution requires a priced limit order");
  }
  const Price limit = *order.price;
  Quantity crossing;
  if (order.side == Side::kBuy) {
    for (const Level& a : snapshot.asks) {
      if (a.price > limit) break;
      crossing += a.quantity;
    }
  } else {
    for (const Level& b : snapshot.bids) {
      if (b.price < limit) break;
      crossing += b.quantity;
    }
  }
  FillReport report;
  const Quantity take = min(order.volume, crossing);
  if (take.is_positive()) report.trades.push_back({limit, take});
  report.residual_volume = order.volume - take;
  report.exhausted_book = false;
  return report;
}

}  // namespace lobsim
