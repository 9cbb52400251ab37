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

#include "lobsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <string>
#include <thread>
#include <utility>

#include "lobsim/errors.hpp"
#include "lobsim/rng.hpp"

namespace lobsim {
namespace {

constexpr std::uint64_t kPolicySeedSalt = 0x706f6c696379ULL;  // "policy"

}  // namespace

EpisodeRecord RunEpisode(const EnvironmentConfig& config, HistoryPtr history,
                         Policy& policy, std::uint64_t seed,
                         const EpisodeParams* fixed) {
  Environment env(std::move(history), config);
  Observation obs = fixed ? env.Reset(*fixed) : env.Reset(seed);
  policy.Reset(DeriveSeed(seed, kPolicySeedSalt));

  EpisodeRecord rec;
  rec.seed = seed;
  rec.params = env.params();
  while (!env.done()) {
    const int action = policy.Act(obs);
    StepResult r = env.Step(action);
    rec.total_reward += r.reward;
    rec.steps.push_back({obs, action, r.reward, r.done, r.info});
    obs = r.observation;
  }
  rec.final_observation = obs;
  const Broker& broker = env.broker();
  rec.rl_log = broker.trade_log(Environment::kRlId);
  rec.twap_log = broker.trade_log(Environment::kTwapId);
  rec.rl_visited = broker.feed(Environment::kRlId).visited();
  rec.twap_visited = broker.feed(Environment::kTwapId).visited();
  rec.truncated = broker.truncated();
  return rec;
}

std::vector<EvalWindow> MakeWindows(std::span<const std::string> dates,
                                    int train_len, int eval_len) {
  if (train_len < 1 || eval_len < 1) {
    throw InvalidArgument("train and eval lengths must be positive");
  }
  const auto n = static_cast<std::int64_t>(dates.size());
  if (n < train_len + eval_len) {
    throw InvalidArgument(std::to_string(n) + " dates cannot fit one window of " +
                          std::to_string(train_len) + " train + " +
                          std::to_string(eval_len) + " eval days");
  }
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i])) {
      throw InvalidArgument("dates must be strictly increasing");
    }
  }
  std::vector<EvalWindow> windows;
  for (std::int64_t start = 0; start + train_len + eval_len <= n;
       start += eval_len) {
    EvalWindow w;
    const auto s = static_cast<std::size_t>(start);
    const auto t = static_cast<std::size_t>(train_len);
    const auto e = static_cast<std::size_t>(eval_len);
    w.train_days.assign(dates.begin() + static_cast<std::ptrdiff_t>(s),
                        dates.begin() + static_cast<std::ptrdiff_t>(s + t));
    w.eval_days.assign(dates.begin() + static_cast<std::ptrdiff_t>(s + t),
                       dates.begin() + static_cast<std::ptrdiff_t>(s + t + e));
    windows.push_back(std::move(w));
  }
  return windows;
}

RewardStats ComputeRewardStats(std::span<const EpisodeSummary> episodes) {
  RewardStats stats;
  if (episodes.empty()) return stats;
  double sum = 0.0;
  for (const EpisodeSummary& e : episodes) sum += e.total_reward.ToDouble();
  stats.mean = sum / static_cast<double>(episodes.size());
  double sq = 0.0;
  for (const EpisodeSummary& e : episodes) {
    const double d = e.total_reward.ToDouble() - stats.mean;
    sq += d * d;
  }
  stats.std = std::sqrt(sq / static_cast<double>(episodes.size()));
  return stats;
}

EvalReport EvaluatePolicy(const EnvironmentConfig& config, HistoryPtr history,
                          const PolicyFactory& policy, std::size_t n_episodes,
                          std::uint64_t master_seed, int workers,
                          const std::optional<EvalWindow>& window) {
  if (n_episodes < 1) throw InvalidArgument("n_episodes must be >= 1");
  EnvironmentConfig cfg = config;
  if (window) cfg.sampler.days = window->eval_days;

  EvalReport report;
  report.window = window;
  report.policy = policy()->name();
  report.master_seed = master_seed;
  report.n_episodes = n_episodes;
  report.episodes.resize(n_episodes);
  std::vector<std::exception_ptr> errors(n_episodes);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n_episodes; i = next++) {
      try {
        const std::uint64_t seed = DeriveSeed(master_seed, i);
        std::unique_ptr<Policy> p = policy();
        const EpisodeRecord rec = RunEpisode(cfg, history, *p, seed);
        EpisodeSummary& s = report.episodes[i];
        s.index = i;
        s.seed = seed;
        s.start_time = rec.params.start_time;
        s.direction = rec.params.direction;
        s.volume = rec.params.volume;
        s.total_reward = rec.total_reward;
        s.truncated = rec.truncated;
        s.rl_executed = ExecutedVolume(rec.rl_log);
        s.twap_executed = ExecutedVolume(rec.twap_log);
        s.steps = rec.steps.size();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads =
      std::clamp(workers, 1, static_cast<int>(std::min<std::size_t>(n_episodes, 256)));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  const RewardStats stats = ComputeRewardStats(report.episodes);
  report.mean_reward = stats.mean;
  report.std_reward = stats.std;
  return report;
}

std::vector<EvalReport> RunWindowProtocol(const EnvironmentConfig& config,
                                          HistoryPtr history,
                                          const PolicyFactory& policy,
                                          std::span<const EvalWindow> windows,
                                          std::size_t n_episodes,
                                          std::uint64_t master_seed,
                                          int workers) {
  std::vector<EvalReport> reports;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    reports.push_back(EvaluatePolicy(config, history, policy, n_episodes,
                                     DeriveSeed(master_seed, k), workers,
                                     windows[k]));
  }
  return reports;
}

std::string_view ToString(ConformanceCheck check) {
  switch (check) {
    case ConformanceCheck::kReproducibility:
      return "reproducibility";
    case ConformanceCheck::kDuplicity:
      return "duplicity";
    case ConformanceCheck::kRounding:
      return "rounding";
  }
  return "unknown";
}

ConformanceCheck ParseConformanceCheck(std::string_view text) {
  if (text == "reproducibility") return ConformanceCheck::kReproducibility;
  if (text == "duplicity") return ConformanceCheck::kDuplicity;
  if (text == "rounding") return ConformanceCheck::kRounding;
  throw InvalidArgument("unknown conformance check '" + std::string(text) + "'");
}

bool ConformanceReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

namespace {

std::optional<std::size_t> FirstDivergence(std::span<const TradeLogEntry> a,
                                           std::span<const TradeLogEntry> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a[i] == b[i])) return i;
  }
  if (a.size() != b.size()) return n;
  return std::nullopt;
}

// Copy of `history` with every price from `from` to `to` (exclusive) moved
// up one tick. Stays a valid book.
HistoryPtr ShiftedHistory(const History& history, std::size_t from,
                          std::size_t to) {
  auto copy = std::make_shared<History>(history);
  const Price tick = history.spec.tick_size;
  for (std::size_t i = from; i < std::min(to, copy->snapshots.size()); ++i) {
    for (Level& l : copy->snapshots[i].bids) l.price += tick;
    for (Level& l : copy->snapshots[i].asks) l.price += tick;
  }
  return copy;
}

CheckResult CheckReproducibility(const EnvironmentConfig& cfg,
                                 const HistoryPtr& history,
                                 const PolicyFactory& factory,
                                 const EpisodeRecord& first,
                                 std::uint64_t seed, bool inject_fault) {
  CheckResult r;
  r.check = ConformanceCheck::kReproducibility;
  HistoryPtr replay_history = history;
  if (inject_fault) {
    HistoricalFeed probe(history);
    probe.ResetTo(first.params.start_time + first.params.exec_time_ms / 2);
    replay_history =
        ShiftedHistory(*history, probe.cursor(), history->snapshots.size());
  }
  std::unique_ptr<Policy> policy = factory();
  const EpisodeRecord second =
      RunEpisode(cfg, replay_history, *policy, seed, &first.params);
  const auto rl = FirstDivergence(first.rl_log, second.rl_log);
  const auto twap = FirstDivergence(first.twap_log, second.twap_log);
  r.passed = !rl && !twap && SerializeTradeLog(first.rl_log) ==
                                 SerializeTradeLog(second.rl_log) &&
             SerializeTradeLog(first.twap_log) ==
                 SerializeTradeLog(second.twap_log);
  if (rl) {
    r.first_divergence = rl;
    r.detail = "rl trade log diverges at entry " + std::to_string(*rl);
  } else if (twap) {
    r.first_divergence = twap;
    r.detail = "twap trade log diverges at entry " + std::to_string(*twap);
  } else {
    r.detail = "identical trade logs (" + std::to_string(first.rl_log.size()) +
               " rl, " + std::to_string(first.twap_log.size()) + " twap entries)";
  }
  return r;
}

CheckResult CheckDuplicity(const EpisodeRecord& rec) {
  CheckResult r;
  r.check = ConformanceCheck::kDuplicity;
  auto violations = [](const std::vector<std::size_t>& visited) {
    std::size_t bad = 0;
    for (std::size_t i = 1; i < visited.size(); ++i) {
      if (visited[i] <= visited[i - 1]) ++bad;
    }
    return bad;
  };
  const std::size_t rl_bad = violations(rec.rl_visited);
  const std::size_t twap_bad = violations(rec.twap_visited);
  r.passed = rl_bad == 0 && twap_bad == 0 && !rec.rl_visited.empty() &&
             !rec.twap_visited.empty();
  r.detail = "rl visited " + std::to_string(rec.rl_visited.size()) +
             " snapshots (" + std::to_string(rl_bad) + " repeats), twap visited " +
             std::to_string(rec.twap_visited.size()) + " (" +
             std::to_string(twap_bad) + " repeats)";
  return r;
}

CheckResult CheckRounding(const EpisodeRecord& rec) {
  CheckResult r;
  r.check = ConformanceCheck::kRounding;
  const Quantity total = rec.params.volume;
  auto dropped_in = [](const std::vector<TradeLogEntry>& log) {
    Quantity q;
    for (const TradeLogEntry& e : log) {
      if (e.message == LogMessage::kCancellation && e.kind == OrderKind::kMarket) {
        q += e.volume;
      }
    }
    return q;
  };
  const Quantity rl_exec = ExecutedVolume(rec.rl_log);
  const Quantity twap_exec = ExecutedVolume(rec.twap_log);
  const Quantity rl_drop = dropped_in(rec.rl_log);
  const Quantity twap_drop = dropped_in(rec.twap_log);
  const std::string amounts = "rl executed " + rl_exec.ToString() +
                              ", twap executed " + twap_exec.ToString() +
                              " of " + total.ToString();
  if (rec.truncated) {
    r.passed = true;
    r.detail = "episode truncated at end of data; conservation not applicable (" +
               amounts + ")";
    return r;
  }
  if (rec.params.schedule.delete_vol) {
    r.expected_shortfall = rl_drop;
    r.passed = rl_exec + rl_drop == total && twap_exec + twap_drop == total;
    r.detail = amounts + "; expected shortfall rl " + rl_drop.ToString() +
               ", twap " + twap_drop.ToString();
    return r;
  }
  r.passed = rl_exec == total && twap_exec == total && rl_drop.is_zero() &&
             twap_drop.is_zero();
  r.detail = amounts;
  return r;
}

}  // namespace

ConformanceReport RunConformance(std::span<const ConformanceCheck> checks,
                                 const EnvironmentConfig& config,
                                 HistoryPtr history, std::uint64_t seed,
                                 const ConformanceOptions& options) {
  EnvironmentConfig cfg = config;
  cfg.audit = true;
  const PolicyFactory factory =
      ParsePolicy(options.policy, static_cast<int>(cfg.action_factors.size()));
  std::unique_ptr<Policy> policy = factory();
  const EpisodeRecord first = RunEpisode(cfg, history, *policy, seed);

  ConformanceReport report;
  report.seed = seed;
  report.params = first.params;
  for (ConformanceCheck c : checks) {
    switch (c) {
      case ConformanceCheck::kReproducibility:
        report.checks.push_back(CheckReproducibility(
            cfg, history, factory, first, seed, options.inject_fault));
        break;
      case ConformanceCheck::kDuplicity:
        report.checks.push_back(CheckDuplicity(first));
        break;
      case ConformanceCheck::kRounding:
        report.checks.push_back(CheckRounding(first));
        break;
    }
  }
  return report;
}

}  // namespace lobsim
