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

#include "lobsim/config.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>

#include "lobsim/errors.hpp"
#include "lobsim/io.hpp"

namespace lobsim {

using nlohmann::json;

namespace {

void RequireObject(const json& j, std::string_view where,
                   std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    throw InvalidArgument(std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

Decimal DecimalField(const json& j, std::string_view where) {
  if (j.is_string()) return Decimal::Parse(j.get<std::string>());
  if (j.is_number_integer()) return Decimal::FromInt(j.get<std::int64_t>());
  throw InvalidArgument(std::string(where) +
                        " must be a decimal string such as \"0.001\"");
}

template <typename T>
T Get(const json& j, std::string_view where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string(where) + " has the wrong type");
  }
}

template <typename T>
std::vector<T> GetList(const json& j, std::string_view where) {
  if (!j.is_array()) throw InvalidArgument(std::string(where) + " must be an array");
  std::vector<T> out;
  for (const json& v : j) out.push_back(Get<T>(v, where));
  return out;
}

std::vector<Decimal> DecimalList(const json& j, std::string_view where) {
  if (!j.is_array()) throw InvalidArgument(std::string(where) + " must be an array");
  std::vector<Decimal> out;
  for (const json& v : j) out.push_back(DecimalField(v, where));
  return out;
}

MarketSpec ParseMarket(const json& j) {
  RequireObject(j, "market",
                {"tick_size", "lot_size", "levels_per_side", "snapshot_interval_ms"});
  MarketSpec m;
  if (j.contains("tick_size")) m.tick_size = Price(DecimalField(j["tick_size"], "market.tick_size"));
  if (j.contains("lot_size")) m.lot_size = Quantity(DecimalField(j["lot_size"], "market.lot_size"));
  if (j.contains("levels_per_side")) {
    m.levels_per_side = Get<int>(j["levels_per_side"], "market.levels_per_side");
  }
  if (j.contains("snapshot_interval_ms")) {
    m.snapshot_interval_ms =
        Get<std::int64_t>(j["snapshot_interval_ms"], "market.snapshot_interval_ms");
  }
  m.Validate();
  return m;
}

SyntheticHistoryConfig ParseSynthetic(const json& j) {
  RequireObject(j, "data.synthetic",
                {"seed", "n_snapshots", "start_mid", "tick_volatility",
                 "level_qty_min", "level_qty_max", "spread_ticks", "first_date",
                 "n_days"});
  SyntheticHistoryConfig s;
  auto& p = s.params;
  if (j.contains("seed")) p.seed = Get<std::uint64_t>(j["seed"], "data.synthetic.seed");
  if (j.contains("n_snapshots")) {
    p.n_snapshots = Get<std::size_t>(j["n_snapshots"], "data.synthetic.n_snapshots");
  }
  if (j.contains("start_mid")) p.start_mid = Price(DecimalField(j["start_mid"], "data.synthetic.start_mid"));
  if (j.contains("tick_volatility")) {
    p.tick_volatility = Get<int>(j["tick_volatility"], "data.synthetic.tick_volatility");
  }
  if (j.contains("level_qty_min")) {
    p.level_qty_min = Quantity(DecimalField(j["level_qty_min"], "data.synthetic.level_qty_min"));
  }
  if (j.contains("level_qty_max")) {
    p.level_qty_max = Quantity(DecimalField(j["level_qty_max"], "data.synthetic.level_qty_max"));
  }
  if (j.contains("spread_ticks")) {
    p.spread_ticks = Get<int>(j["spread_ticks"], "data.synthetic.spread_ticks");
  }
  if (j.contains("first_date")) {
    s.first_date = Get<std::string>(j["first_date"], "data.synthetic.first_date");
  }
  if (j.contains("n_days")) s.n_days = Get<int>(j["n_days"], "data.synthetic.n_days");
  p.start_time_ms = MidnightOfDate(s.first_date);
  return s;
}

DataConfig ParseData(const json& j) {
  RequireObject(j, "data", {"dir", "files", "synthetic"});
  DataConfig d;
  if (j.contains("dir")) d.dir = Get<std::string>(j["dir"], "data.dir");
  if (j.contains("files")) d.files = GetList<std::string>(j["files"], "data.files");
  if (j.contains("synthetic")) d.synthetic = ParseSynthetic(j["synthetic"]);
  return d;
}

Side ParseDirectionField(const json& j, std::string_view where) {
  return ParseSide(Get<std::string>(j, where));
}

EpisodeSampler ParseSampler(const json& j) {
  RequireObject(j, "environment.sampler",
                {"days", "exec_time_ms", "volumes", "direction", "n_buckets",
                 "slices_per_bucket", "bound_jitter_ms", "bucket_weights",
                 "delete_vol", "end_slack_ms"});
  EpisodeSampler s;
  if (j.contains("days")) s.days = GetList<std::string>(j["days"], "sampler.days");
  if (j.contains("exec_time_ms")) {
    s.exec_time_ms = GetList<std::int64_t>(j["exec_time_ms"], "sampler.exec_time_ms");
  }
  if (j.contains("volumes")) {
    s.volumes.clear();
    for (Decimal d : DecimalList(j["volumes"], "sampler.volumes")) {
      s.volumes.push_back(Quantity(d));
    }
  }
  if (j.contains("direction")) {
    const auto dir = Get<std::string>(j["direction"], "sampler.direction");
    if (dir == "random") {
      s.direction.reset();
    } else {
      s.direction = ParseSide(dir);
    }
  }
  if (j.contains("n_buckets")) s.n_buckets = GetList<int>(j["n_buckets"], "sampler.n_buckets");
  if (j.contains("slices_per_bucket")) {
    s.slices_per_bucket = GetList<int>(j["slices_per_bucket"], "sampler.slices_per_bucket");
  }
  if (j.contains("bound_jitter_ms")) {
    s.bound_jitter_ms = GetList<std::int64_t>(j["bound_jitter_ms"], "sampler.bound_jitter_ms");
  }
  if (j.contains("bucket_weights")) {
    const json& w = j["bucket_weights"];
    if (!w.is_array()) throw InvalidArgument("sampler.bucket_weights must be an array");
    s.bucket_weights.clear();
    for (const json& table : w) {
      s.bucket_weights.push_back(DecimalList(table, "sampler.bucket_weights"));
    }
  }
  if (j.contains("delete_vol")) s.delete_vol = Get<bool>(j["delete_vol"], "sampler.delete_vol");
  if (j.contains("end_slack_ms")) {
    s.end_slack_ms = Get<std::int64_t>(j["end_slack_ms"], "sampler.end_slack_ms");
  }
  return s;
}

EnvironmentConfig ParseEnvironment(const json& j) {
  RequireObject(j, "environment", {"action_factors", "reward_mode", "sampler"});
  EnvironmentConfig e;
  if (j.contains("action_factors")) {
    e.action_factors = DecimalList(j["action_factors"], "environment.action_factors");
  }
  if (j.contains("reward_mode")) {
    e.reward_mode = ParseRewardMode(Get<std::string>(j["reward_mode"], "environment.reward_mode"));
  }
  if (j.contains("sampler")) e.sampler = ParseSampler(j["sampler"]);
  return e;
}

EpisodeParams ParseEpisode(const json& j) {
  RequireObject(j, "episode",
                {"start_time", "exec_time_ms", "direction", "volume", "n_buckets",
                 "slices_per_bucket", "bound_jitter_ms", "bucket_weights",
                 "delete_vol", "seed"});
  if (!j.contains("start_time")) throw InvalidArgument("episode.start_time is required");
  EpisodeParams p;
  p.start_time = Get<std::int64_t>(j["start_time"], "episode.start_time");
  if (j.contains("exec_time_ms")) p.exec_time_ms = Get<std::int64_t>(j["exec_time_ms"], "episode.exec_time_ms");
  if (j.contains("direction")) p.direction = ParseDirectionField(j["direction"], "episode.direction");
  if (j.contains("volume")) p.volume = Quantity(DecimalField(j["volume"], "episode.volume"));
  if (j.contains("n_buckets")) p.schedule.n_buckets = Get<int>(j["n_buckets"], "episode.n_buckets");
  if (j.contains("slices_per_bucket")) {
    p.schedule.slices_per_bucket = Get<int>(j["slices_per_bucket"], "episode.slices_per_bucket");
  }
  if (j.contains("bound_jitter_ms")) {
    p.schedule.bound_jitter_ms = Get<std::int64_t>(j["bound_jitter_ms"], "episode.bound_jitter_ms");
  }
  if (j.contains("bucket_weights")) {
    p.schedule.bucket_weights = DecimalList(j["bucket_weights"], "episode.bucket_weights");
  }
  if (j.contains("delete_vol")) p.schedule.delete_vol = Get<bool>(j["delete_vol"], "episode.delete_vol");
  if (j.contains("seed")) p.seed = Get<std::uint64_t>(j["seed"], "episode.seed");
  p.schedule.start_time = p.start_time;
  p.schedule.exec_time_ms = p.exec_time_ms;
  return p;
}

}  // namespace

RunConfig ParseRunConfig(const json& j) {
  RequireObject(j, "config",
                {"market", "data", "environment", "episode", "policy", "episodes",
                 "workers", "seed", "windows"});
  RunConfig c;
  if (j.contains("market")) c.market = ParseMarket(j["market"]);
  if (j.contains("data")) c.data = ParseData(j["data"]);
  if (j.contains("environment")) c.environment = ParseEnvironment(j["environment"]);
  if (j.contains("episode")) c.episode = ParseEpisode(j["episode"]);
  if (j.contains("policy")) c.policy = Get<std::string>(j["policy"], "policy");
  if (j.contains("episodes")) c.episodes = Get<std::size_t>(j["episodes"], "episodes");
  if (j.contains("workers")) c.workers = Get<int>(j["workers"], "workers");
  if (j.contains("seed")) c.seed = Get<std::uint64_t>(j["seed"], "seed");
  if (j.contains("windows")) {
    const json& w = j["windows"];
    RequireObject(w, "windows", {"train_days", "eval_days"});
    if (w.contains("train_days")) c.train_days = Get<int>(w["train_days"], "windows.train_days");
    if (w.contains("eval_days")) c.eval_days = Get<int>(w["eval_days"], "windows.eval_days");
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
  return ParseRunConfig(j);
}

void ApplyOverride(json& j, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw InvalidArgument("override must look like key=value: '" +
                          std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw InvalidArgument("empty segment in override key '" + key + "'");
    if (!node->is_object()) {
      throw InvalidArgument("override key '" + key + "' descends into a non-object");
    }
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

HistoryPtr LoadRunHistory(const RunConfig& config) {
  const DataConfig& d = config.data;
  if (d.synthetic) {
    return AssembleHistory(
        GenerateSyntheticDays(d.synthetic->params, d.synthetic->first_date,
                              d.synthetic->n_days, config.market),
        config.market);
  }
  std::vector<std::filesystem::path> paths;
  if (!d.files.empty()) {
    for (const std::string& f : d.files) {
      std::filesystem::path p(f);
      if (p.is_relative() && !d.dir.empty()) p = std::filesystem::path(d.dir) / p;
      paths.push_back(p);
    }
  } else if (!d.dir.empty()) {
    paths = ListDayFiles(d.dir);
    if (paths.empty()) throw InvalidArgument("no YYYY-MM-DD.csv files in " + d.dir);
  } else {
    throw InvalidArgument("config has no data source (data.dir, data.files or data.synthetic)");
  }
  return LoadHistory(std::move(paths), config.market);
}

}  // namespace lobsim
