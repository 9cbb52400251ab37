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

#ifndef LOBSIM_DATA_FEED_HPP_
#define LOBSIM_DATA_FEED_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lobsim/lob.hpp"
#include "lobsim/market_types.hpp"

namespace lobsim {

// Snapshot indices [begin, end) belonging to one calendar day file.
struct DayRange {
  std::string date;  // YYYY-MM-DD
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const DayRange&) const = default;
};

// Immutable, shareable market history. Every episode reads it through its
// own HistoricalFeed cursor.
struct History {
  MarketSpec spec;
  std::vector<LobSnapshot> snapshots;
  std::vector<DayRange> days;

  const DayRange* FindDay(std::string_view date) const;
};

using HistoryPtr = std::shared_ptr<const History>;

struct DayData {
  std::string date;
  std::vector<LobSnapshot> snapshots;
};

// Concatenates day blocks in date order; checks timestamps strictly
// increase across the whole history.
HistoryPtr AssembleHistory(std::vector<DayData> days, const MarketSpec& spec);

// Loads `YYYY-MM-DD.csv` day files (any order; sorted by date).
HistoryPtr LoadHistory(std::vector<std::filesystem::path> paths,
                       const MarketSpec& spec);

// All `YYYY-MM-DD.csv` files directly inside `dir`.
std::vector<std::filesystem::path> ListDayFiles(
    const std::filesystem::path& dir);

// Reads one day file. Row numbers in errors are 1-based file lines.
std::vector<LobSnapshot> ReadDayFile(const std::filesystem::path& path,
                                     const MarketSpec& spec);

// Writes header + rows via a temporary file and rename.
void WriteDayFile(const std::filesystem::path& path,
                  std::span<const LobSnapshot> snapshots);

// UTC calendar helpers.
std::string DateOfTimestamp(TimestampMs t);
TimestampMs MidnightOfDate(std::string_view date);
bool IsDayFileName(std::string_view name);

// Per-episode cursor over shared history. Snapshot storage is read-only;
// the cursor only moves forward between resets.
class HistoricalFeed {
 public:
  explicit HistoricalFeed(HistoryPtr history);

  const History& history() const { return *history_; }
  const HistoryPtr& history_ptr() const { return history_; }
  std::size_t size() const { return history_->snapshots.size(); }
  std::size_t cursor() const { return cursor_; }
  const LobSnapshot& current() const { return history_->snapshots[cursor_]; }

  // Positions the cursor on the first snapshot with timestamp >= t.
  // Throws OutOfRange when t is past the last snapshot.
  const LobSnapshot& ResetTo(TimestampMs t);

  // Advances one snapshot; nullptr signals end of data (not an error).
  const LobSnapshot* NextSnapshot();
  const LobSnapshot* PeekNext() const;

  // Skips forward to the latest snapshot with timestamp <= t. Never moves
  // backwards.
  void AdvanceTo(TimestampMs t);

  // The k most recent snapshots ending at the cursor, oldest first. Left-
  // padded with the earliest available snapshot so the result always has k
  // entries.
  std::vector<const LobSnapshot*> RecentWindow(int k) const;
  void RecentWindow(std::span<const LobSnapshot*> out) const;

  // When enabled, every index the cursor lands on is recorded so tests can
  // prove each snapshot was interacted with at most once.
  void set_audit(bool on) { audit_ = on; }
  const std::vector<std::size_t>& visited() const { return visited_; }

 private:
  void Visit();

  HistoryPtr history_;
  std::size_t cursor_ = 0;
  bool audit_ = false;
  std::vector<std::size_t> visited_;
};

struct SyntheticFeedParams {
  std::uint64_t seed = 42;
  std::size_t n_snapshots = 1000;
  Price start_mid = Price::Parse("35000");
  int tick_volatility = 2;  // max |mid move| per step, in ticks
  Quantity level_qty_min = Quantity::Parse("0.5");
  Quantity level_qty_max = Quantity::Parse("5");
  int spread_ticks = 1;
  TimestampMs start_time_ms = 1622505600000;  // 2021-06-01T00:00:00Z

  void Validate(const MarketSpec& spec) const;
};

// Symmetric random walk of the best bid in ticks; all ten levels are
// rebuilt every step at one-tick spacing with uniform lot quantities.
std::vector<LobSnapshot> GenerateSyntheticSnapshots(
    const SyntheticFeedParams& params, const MarketSpec& spec);

HistoryPtr GenerateSynthetic(const SyntheticFeedParams& params,
                             const MarketSpec& spec);

// `n_days` consecutive days starting at `first_date`, each holding
// params.n_snapshots snapshots from midnight. The walk continues across days;
// each day draws from its own derived seed.
std::vector<DayData> GenerateSyntheticDays(const SyntheticFeedParams& params,
                                           std::string_view first_date,
                                           int n_days, const MarketSpec& spec);

}  // namespace lobsim

#endif  // LOBSIM_DATA_FEED_HPP_
