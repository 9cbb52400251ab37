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

#include "lobsim/data_feed.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <utility>

#include "lobsim/errors.hpp"
#include "lobsim/io.hpp"
#include "lobsim/rng.hpp"

namespace lobsim {

namespace chr = std::chrono;

const DayRange* History::FindDay(std::string_view date) const {
  for (const DayRange& d : days) {
    if (d.date == date) return &d;
  }
  return nullptr;
}

bool IsDayFileName(std::string_view name) {
  if (name.size() != 14 || name.substr(10) != ".csv") return false;
  for (std::size_t i = 0; i < 10; ++i) {
    const bool dash = (i == 4 || i == 7);
    if (dash ? name[i] != '-' : (name[i] < '0' || name[i] > '9')) return false;
  }
  return true;
}

TimestampMs MidnightOfDate(std::string_view date) {
  if (date.size() != 10 || date[4] != '-' || date[7] != '-') {
    throw InvalidArgument("malformed date '" + std::string(date) + "'");
  }
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (date[i] < '0' || date[i] > '9') {
        throw InvalidArgument("malformed date '" + std::string(date) + "'");
      }
      v = v * 10 + (date[i] - '0');
    }
    return v;
  };
  const chr::year_month_day ymd{chr::year{num(0, 4)},
                                chr::month{static_cast<unsigned>(num(5, 2))},
                                chr::day{static_cast<unsigned>(num(8, 2))}};
  if (!ymd.ok()) {
    throw InvalidArgument("invalid date '" + std::string(date) + "'");
  }
  const chr::sys_days days{ymd};
  return chr::duration_cast<chr::milliseconds>(days.time_since_epoch())
      .count();
}

std::string DateOfTimestamp(TimestampMs t) {
  const chr::sys_days days =
      chr::floor<chr::days>(chr::sys_time<chr::milliseconds>{
          chr::milliseconds{t}});
  const chr::year_month_day ymd{days};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::vector<LobSnapshot> ReadDayFile(const std::filesystem::path& path,
                                     const MarketSpec& spec) {
  const std::string text = ReadFile(path);
  std::vector<LobSnapshot> rows;
  rows.reserve(text.size() / 300);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool seen_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!seen_header) {
      if (line != SnapshotCsvHeader()) {
        throw ParseError(line_no, path.filename().string() +
                                      ": missing or malformed header line");
      }
      seen_header = true;
      continue;
    }
    if (line.empty()) continue;
    try {
      rows.push_back(ParseSnapshotRow(line, spec, line_no));
    } catch (const ParseError& e) {
      throw ParseError(line_no, path.filename().string() + ": " + e.what());
    } catch (const DataIntegrityError& e) {
      throw DataIntegrityError(path.filename().string() + ": " + e.what());
    }
  }
  if (!seen_header) {
    throw ParseError(0, path.filename().string() + ": empty file, header required");
  }
  return rows;
}

void WriteDayFile(const std::filesystem::path& path,
                  std::span<const LobSnapshot> snapshots) {
  std::string out;
  out.reserve(64 + snapshots.size() * 360);
  out += SnapshotCsvHeader();
  out += '\n';
  for (const LobSnapshot& s : snapshots) {
    out += FormatSnapshotRow(s);
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

HistoryPtr AssembleHistory(std::vector<DayData> days, const MarketSpec& spec) {
  spec.Validate();
  std::stable_sort(days.begin(), days.end(),
                   [](const DayData& a, const DayData& b) {
                     return a.date < b.date;
                   });
  auto history = std::make_shared<History>();
  history->spec = spec;
  std::size_t total = 0;
  for (const DayData& d : days) total += d.snapshots.size();
  history->snapshots.reserve(total);
  for (DayData& d : days) {
    if (!history->days.empty() && history->days.back().date == d.date) {
      throw DataIntegrityError("duplicate day " + d.date);
    }
    DayRange range{d.date, history->snapshots.size(), 0};
    for (LobSnapshot& s : d.snapshots) {
      if (!history->snapshots.empty() &&
          s.timestamp <= history->snapshots.back().timestamp) {
        throw DataIntegrityError(
            "timestamps not strictly increasing at " +
            std::to_string(s.timestamp) + " in day " + d.date);
      }
      history->snapshots.push_back(s);
    }
    range.end = history->snapshots.size();
    history->days.push_back(std::move(range));
  }
  return history;
}

HistoryPtr LoadHistory(std::vector<std::filesystem::path> paths,
                       const MarketSpec& spec) {
  if (paths.empty()) throw InvalidArgument("no day files given");
  std::vector<DayData> days;
  days.reserve(paths.size());
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) {
      throw IoError("missing day file " + p.string());
    }
    const std::string name = p.filename().string();
    if (!IsDayFileName(name)) {
      throw InvalidArgument("day file must be named YYYY-MM-DD.csv: " + name);
    }
    days.push_back({name.substr(0, 10), ReadDayFile(p, spec)});
  }
  return AssembleHistory(std::move(days), spec);
}

std::vector<std::filesystem::path> ListDayFiles(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() &&
        IsDayFileName(entry.path().filename().string())) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

HistoricalFeed::HistoricalFeed(HistoryPtr history)
    : history_(std::move(history)) {
  if (!history_ || history_->snapshots.empty()) {
    throw InvalidArgument("feed requires a non-empty history");
  }
}

void HistoricalFeed::Visit() {
  if (audit_) visited_.push_back(cursor_);
}

const LobSnapshot& HistoricalFeed::ResetTo(TimestampMs t) {
  const auto& snaps = history_->snapshots;
  auto it = std::lower_bound(
      snaps.begin(), snaps.end(), t,
      [](const LobSnapshot& s, TimestampMs v) { return s.timestamp < v; });
  if (it == snaps.end()) {
    throw OutOfRange("reset time " + std::to_string(t) +
                     " is past the last snapshot " +
                     std::to_string(snaps.back().timestamp));
  }
  cursor_ = static_cast<std::size_t>(it - snaps.begin());
  visited_.clear();
  Visit();
  return *it;
}

const LobSnapshot* HistoricalFeed::NextSnapshot() {
  if (cursor_ + 1 >= size()) return nullptr;
  ++cursor_;
  Visit();
  return &history_->snapshots[cursor_];
}

const LobSnapshot* HistoricalFeed::PeekNext() const {
  if (cursor_ + 1 >= size()) return nullptr;
  return &history_->snapshots[cursor_ + 1];
}

void HistoricalFeed::AdvanceTo(TimestampMs t) {
  const auto& snaps = history_->snapshots;
  auto first = snaps.begin() + static_cast<std::ptrdiff_t>(cursor_) + 1;
  auto it = std::upper_bound(
      first, snaps.end(), t,
      [](TimestampMs v, const LobSnapshot& s) { return v < s.timestamp; });
  if (it == first) return;
  cursor_ = static_cast<std::size_t>(it - snaps.begin()) - 1;
  Visit();
}

std::vector<const LobSnapshot*> HistoricalFeed::RecentWindow(int k) const {
  if (k <= 0) throw InvalidArgument("window size must be positive");
  std::vector<const LobSnapshot*> out(static_cast<std::size_t>(k));
  RecentWindow(out);
  return out;
}

void HistoricalFeed::RecentWindow(std::span<const LobSnapshot*> out) const {
  if (out.empty()) throw InvalidArgument("window size must be positive");
  const auto& snaps = history_->snapshots;
  const std::size_t k = out.size();
  for (std::size_t i = 0; i < k; ++i) {
    // position i of k maps to cursor - (k - 1 - i), clamped at index 0
    const std::size_t back = k - 1 - i;
    const std::size_t idx = back > cursor_ ? 0 : cursor_ - back;
    out[i] = &snaps[idx];
  }
}

void SyntheticFeedParams::Validate(const MarketSpec& spec) const {
  spec.Validate();
  if (n_snapshots < 1) throw InvalidArgument("n_snapshots must be >= 1");
  if (tick_volatility < 0) throw InvalidArgument("tick_volatility must be >= 0");
  if (spread_ticks < 1) throw InvalidArgument("spread_ticks must be >= 1");
  if (!level_qty_min.is_positive() || level_qty_max < level_qty_min) {
    throw InvalidArgument("level quantity range must be positive and ordered");
  }
  if (!level_qty_min.value().IsMultipleOf(spec.lot_size.value()) ||
      !level_qty_max.value().IsMultipleOf(spec.lot_size.value())) {
    throw InvalidArgument("level quantity range must be on the lot grid");
  }
  if (!start_mid.is_positive()) throw InvalidArgument("start_mid must be positive");
}

namespace {

// Generates snapshots continuing from `best_bid_ticks`; returns the final
// best bid in ticks through the reference.
std::vector<LobSnapshot> WalkSnapshots(const SyntheticFeedParams& params,
                                       const MarketSpec& spec,
                                       std::uint64_t seed,
                                       TimestampMs start_time,
                                       std::int64_t& best_bid_ticks) {
  DeterministicRng rng(seed);
  const std::int64_t tick = spec.tick_size.units();
  const std::int64_t lot = spec.lot_size.units();
  const std::int64_t qty_lo = params.level_qty_min.units() / lot;
  const std::int64_t qty_hi = params.level_qty_max.units() / lot;
  const std::int64_t floor_ticks = static_cast<std::int64_t>(kBookDepth);

  std::vector<LobSnapshot> out(params.n_snapshots);
  for (std::size_t n = 0; n < params.n_snapshots; ++n) {
    if (n > 0 && params.tick_volatility > 0) {
      best_bid_ticks +=
          rng.UniformInt(-params.tick_volatility, params.tick_volatility);
      // reflect off the floor so every bid level stays positive
      if (best_bid_ticks < floor_ticks) {
        best_bid_ticks = 2 * floor_ticks - best_bid_ticks;
      }
    }
    LobSnapshot& s = out[n];
    s.timestamp =
        start_time + static_cast<TimestampMs>(n) * spec.snapshot_interval_ms;
    const std::int64_t ask_ticks = best_bid_ticks + params.spread_ticks;
    for (std::size_t i = 0; i < kBookDepth; ++i) {
      const auto off = static_cast<std::int64_t>(i);
      s.bids[i].price = Price::FromUnits((best_bid_ticks - off) * tick);
      s.bids[i].quantity = Quantity::FromUnits(rng.UniformInt(qty_lo, qty_hi) * lot);
      s.asks[i].price = Price::FromUnits((ask_ticks + off) * tick);
      s.asks[i].quantity = Quantity::FromUnits(rng.UniformInt(qty_lo, qty_hi) * lot);
    }
  }
  return out;
}

std::int64_t InitialBestBidTicks(const SyntheticFeedParams& params,
                                 const MarketSpec& spec) {
  const std::int64_t mid_ticks = params.start_mid.units() / spec.tick_size.units();
  return std::max<std::int64_t>(mid_ticks - params.spread_ticks / 2,
                                static_cast<std::int64_t>(kBookDepth));
}

}  // namespace

std::vector<LobSnapshot> GenerateSyntheticSnapshots(
    const SyntheticFeedParams& params, const MarketSpec& spec) {
  params.Validate(spec);
  std::int64_t bid = InitialBestBidTicks(params, spec);
  return WalkSnapshots(params, spec, params.seed, params.start_time_ms, bid);
}

HistoryPtr GenerateSynthetic(const SyntheticFeedParams& params,
                             const MarketSpec& spec) {
  std::vector<DayData> days;
  days.push_back({DateOfTimestamp(params.start_time_ms),
                  GenerateSyntheticSnapshots(params, spec)});
  return AssembleHistory(std::move(days), spec);
}

std::vector<DayData> GenerateSyntheticDays(const SyntheticFeedParams& params,
                                           std::string_view first_date,
                                           int n_days, const MarketSpec& spec) {
  params.Validate(spec);
  if (n_days < 1) throw InvalidArgument("n_days must be >= 1");
  constexpr TimestampMs kDayMs = 86'400'000;
  const TimestampMs first = MidnightOfDate(first_date);
  if (static_cast<TimestampMs>(params.n_snapshots) * spec.snapshot_interval_ms >
      kDayMs) {
    throw InvalidArgument("n_snapshots does not fit in one day");
  }
  std::int64_t bid = InitialBestBidTicks(params, spec);
  std::vector<DayData> days;
  for (int d = 0; d < n_days; ++d) {
    const TimestampMs start = first + d * kDayMs;
    days.push_back({DateOfTimestamp(start),
                    WalkSnapshots(params, spec,
                                  DeriveSeed(params.seed, static_cast<std::uint64_t>(d)),
                                  start, bid)});
  }
  return days;
}

}  // namespace lobsim
