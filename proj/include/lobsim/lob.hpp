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

#ifndef LOBSIM_LOB_HPP_
#define LOBSIM_LOB_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lobsim/market_types.hpp"

namespace lobsim {

inline constexpr std::size_t kBookDepth = 10;
// timestamp + (price, qty) for 10 bids and 10 asks
inline constexpr std::size_t kSnapshotFields = 1 + 4 * kBookDepth;

struct Level {
  Price price;
  Quantity quantity;

  bool operator==(const Level&) const = default;
};

// One Level-2 image of the book. Bids descend from the best bid, asks ascend
// from the best ask. Flat arrays suffice for fixed-depth snapshots; a
// tree-backed book would only be needed for order-by-order data.
struct LobSnapshot {
  TimestampMs timestamp = 0;
  std::array<Level, kBookDepth> bids{};
  std::array<Level, kBookDepth> asks{};

  Price best_bid() const { return bids[0].price; }
  Price best_ask() const { return asks[0].price; }
  // (best_bid + best_ask) / 2, exact on the 1e-9 grid for any tick >= 2e-9.
  Decimal mid() const;

  bool operator==(const LobSnapshot&) const = default;
};

// Checks every snapshot invariant: positive quantities, strictly monotone
// prices, prices on the tick grid, quantities on the lot grid, positive
// spread. Throws DataIntegrityError mentioning `row`.
void ValidateSnapshot(const LobSnapshot& snapshot, const MarketSpec& spec,
                      std::size_t row);

std::string_view SnapshotCsvHeader();

// Parses one data row of a day file. `row` is only used in error messages.
LobSnapshot ParseSnapshotRow(std::string_view raw_row, const MarketSpec& spec,
                             std::size_t row);

std::string FormatSnapshotRow(const LobSnapshot& snapshot);

// Same-side reference quote: best bid for buys, best ask for sells.
Price BestQuote(const LobSnapshot& snapshot, Side side);

struct FillReport {
  std::vector<Fill> trades;
  Quantity residual_volume;
  bool exhausted_book = false;

  Quantity filled() const;
};

// Walks the opposite side best-first. Does not mutate the snapshot.
FillReport ExecuteMarketAgainstSnapshot(const Order& order,
                                        const LobSnapshot& snapshot);

// A resting limit order fills against opposite liquidity priced at or
// through its limit; every fill books at the limit price.
FillReport ExecuteRestingLimitAgainstSnapshot(const Order& order,
                                              const LobSnapshot& snapshot);

}  // namespace lobsim

#endif  // LOBSIM_LOB_HPP_
