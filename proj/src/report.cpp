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

#include "lobsim/report.hpp"

#include <cstdio>
#include <string>

namespace lobsim {

using nlohmann::json;

json ToJson(const TradeLogEntry& e) {
  // stable field order: timestamp_ms, algo_id, message, price, volume, kind
  return json::array({e.timestamp, e.owner, std::string(ToString(e.message)),
                      e.price.ToString(), e.volume.ToString(),
                      std::string(ToString(e.kind))});
}

json ToJson(std::span<const TradeLogEntry> log) {
  json out = json::array();
  for (const TradeLogEntry& e : log) out.push_back(ToJson(e));
  return out;
}

json ToJson(const EpisodeParams& p) {
  json weights = json::array();
  for (Decimal w : p.schedule.bucket_weights) weights.push_back(w.ToString());
  return {
      {"start_time", p.start_time},
      {"exec_time_ms", p.exec_time_ms},
      {"direction", std::string(ToString(p.direction))},
      {"volume", p.volume.ToString()},
      {"n_buckets", p.schedule.n_buckets},
      {"slices_per_bucket", p.schedule.slices_per_bucket},
      {"bound_jitter_ms", p.schedule.bound_jitter_ms},
      {"bucket_weights", weights},
      {"delete_vol", p.schedule.delete_vol},
      {"seed", p.seed},
  };
}

namespace {

json ToJson(const StepInfo& info) {
  json j = {
      {"bucket", info.bucket},
      {"bucket_closed", info.bucket_closed},
      {"truncated", info.truncated},
      {"empty_bucket", info.empty_bucket},
      {"rl_executed", info.rl_executed.ToString()},
      {"twap_executed", info.twap_executed.ToString()},
  };
  j["rl_vwap"] = info.rl_vwap ? json(info.rl_vwap->ToString()) : json(nullptr);
  j["twap_vwap"] = info.twap_vwap ? json(info.twap_vwap->ToString()) : json(nullptr);
  return j;
}

json ToJson(const Observation& obs) {
  json out = json::array();
  for (double v : obs) out.push_back(v);
  return out;
}

}  // namespace

json ToJson(const EpisodeRecord& r) {
  json steps = json::array();
  for (const StepRecord& s : r.steps) {
    steps.push_back({
        {"observation", ToJson(s.observation)},
        {"action", s.action},
        {"reward", s.reward.ToString()},
        {"done", s.done},
        {"info", ToJson(s.info)},
    });
  }
  return {
      {"seed", r.seed},
      {"params", ToJson(r.params)},
      {"steps", steps},
      {"final_observation", ToJson(r.final_observation)},
      {"rl_log", ToJson(std::span<const TradeLogEntry>(r.rl_log))},
      {"twap_log", ToJson(std::span<const TradeLogEntry>(r.twap_log))},
      {"truncated", r.truncated},
      {"total_reward", r.total_reward.ToString()},
  };
}

json ToJson(const EvalWindow& w) {
  return {{"train_days", w.train_days}, {"eval_days", w.eval_days}};
}

json ToJson(const EvalReport& r) {
  json episodes = json::array();
  for (const EpisodeSummary& e : r.episodes) {
    episodes.push_back({
        {"index", e.index},
        {"seed", e.seed},
        {"start_time", e.start_time},
        {"direction", std::string(ToString(e.direction))},
        {"volume", e.volume.ToString()},
        {"total_reward", e.total_reward.ToString()},
        {"truncated", e.truncated},
        {"rl_executed", e.rl_executed.ToString()},
        {"twap_executed", e.twap_executed.ToString()},
        {"steps", e.steps},
    });
  }
  return {
      {"window", r.window ? ToJson(*r.window) : json(nullptr)},
      {"policy", r.policy},
      {"master_seed", r.master_seed},
      {"n_episodes", r.n_episodes},
      {"mean_reward", r.mean_reward},
      {"std_reward", r.std_reward},
      {"summary", FormatMeanStd(r.mean_reward, r.std_reward)},
      {"episodes", episodes},
  };
}

json ToJson(const ConformanceReport& r) {
  json checks = json::array();
  for (const CheckResult& c : r.checks) {
    json j = {
        {"check", std::string(ToString(c.check))},
        {"passed", c.passed},
        {"detail", c.detail},
    };
    if (c.first_divergence) j["first_divergence"] = *c.first_divergence;
    if (c.expected_shortfall) j["expected_shortfall"] = c.expected_shortfall->ToString();
    checks.push_back(std::move(j));
  }
  return {
      {"seed", r.seed},
      {"params", ToJson(r.params)},
      {"passed", r.all_passed()},
      {"checks", checks},
  };
}

json ToJson(const ExecutionAlgo& algo) {
  json events = json::array();
  std::size_t ord = 0;
  for (const AlgoEvent& e : algo.events()) {
    const Quantity v = e.kind == EventKind::kLimitOrder
                           ? algo.volumes_per_trade()[ord++]
                           : algo.bucket_volumes()[static_cast<std::size_t>(e.bucket)];
    events.push_back(json::array({e.time, std::string(ToString(e.kind)), v.ToString()}));
  }
  return {{"algo_id", algo.id()}, {"events", events}};
}

std::string EvalReportCsv(const EvalReport& r) {
  std::string out =
      "index,seed,start_time,direction,volume,total_reward,truncated,"
      "rl_executed,twap_executed,steps\n";
  for (const EpisodeSummary& e : r.episodes) {
    out += std::to_string(e.index) + ',' + std::to_string(e.seed) + ',' +
           std::to_string(e.start_time) + ',' + std::string(ToString(e.direction)) +
           ',' + e.volume.ToString() + ',' + e.total_reward.ToString() + ',' +
           (e.truncated ? "true" : "false") + ',' + e.rl_executed.ToString() +
           ',' + e.twap_executed.ToString() + ',' + std::to_string(e.steps) + '\n';
  }
  return out;
}

std::string FormatMeanStd(double mean, double std, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f ± %.*f", precision, mean, precision,
                std);
  return buf;
}

}  // namespace lobsim
