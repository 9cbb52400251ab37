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

// lobsim command-line front end. Every subcommand is a pure function of its
// config file, flags, data files and seed.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lobsim/config.hpp"
#include "lobsim/data_feed.hpp"
#include "lobsim/errors.hpp"
#include "lobsim/harness.hpp"
#include "lobsim/io.hpp"
#include "lobsim/report.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Raised for problems with the invocation itself (exit 2).
struct UsageError : lobsim::Error {
  explicit UsageError(const std::string& what)
      : lobsim::Error("usage_error", what) {}
};

struct CommonFlags {
  std::string config_path;
  std::string data_dir;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "Run configuration (JSON)");
  cmd->add_option("--data-dir", f.data_dir, "Directory of YYYY-MM-DD.csv day files");
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--set", f.overrides, "Config override key=value (repeatable)")
      ->take_all();
}

void PrintError(std::string_view kind, std::string_view message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump()
            << "\n";
}

void Emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    lobsim::WriteFileAtomic(out, text);
  }
}

void EmitJson(const std::string& out, const json& j) { Emit(out, j.dump(2) + "\n"); }

// Config file, then --set overrides, then dedicated flags.
json BuildConfigJson(const CommonFlags& f) {
  json j = json::object();
  if (!f.config_path.empty()) {
    const std::string text = lobsim::ReadFile(f.config_path);
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw UsageError("config " + f.config_path + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    // Relative data paths resolve against the config file's directory.
    if (j.contains("data") && j["data"].is_object() && j["data"].contains("dir") &&
        j["data"]["dir"].is_string()) {
      fs::path dir = j["data"]["dir"].get<std::string>();
      if (dir.is_relative()) {
        j["data"]["dir"] = (fs::path(f.config_path).parent_path() / dir).string();
      }
    }
  }
  for (const std::string& o : f.overrides) lobsim::ApplyOverride(j, o);
  if (!f.data_dir.empty()) j["data"] = json{{"dir", f.data_dir}};
  if (f.seed) j["seed"] = *f.seed;
  return j;
}

lobsim::RunConfig BuildConfig(const CommonFlags& f, const json& extra = json::object()) {
  json j = BuildConfigJson(f);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return lobsim::ParseRunConfig(j);
}

std::vector<std::string> DatesOf(const lobsim::History& h) {
  std::vector<std::string> dates;
  for (const lobsim::DayRange& d : h.days) dates.push_back(d.date);
  return dates;
}

// ---- subcommands ----------------------------------------------------------

int ValidateData(const CommonFlags& f) {
  const lobsim::RunConfig cfg = BuildConfig(f);
  if (cfg.data.dir.empty() && cfg.data.files.empty()) {
    throw UsageError("validate-data needs --data-dir or data.dir/data.files");
  }
  const lobsim::HistoryPtr h = lobsim::LoadRunHistory(cfg);
  json days = json::array();
  for (const lobsim::DayRange& d : h->days) {
    days.push_back({{"date", d.date},
                    {"rows", d.end - d.begin},
                    {"first_timestamp", h->snapshots[d.begin].timestamp},
                    {"last_timestamp", h->snapshots[d.end - 1].timestamp}});
  }
  EmitJson(f.out, {{"valid", true}, {"snapshots", h->snapshots.size()}, {"days", days}});
  return kExitOk;
}

struct GenFlags {
  std::string out_dir;
  std::optional<std::size_t> snapshots;
  std::optional<int> days;
  std::string first_date;
};

int GenSynthetic(const CommonFlags& f, const GenFlags& g) {
  const json base = BuildConfigJson(f);
  json synth = json::object();
  if (base.contains("data") && base["data"].contains("synthetic")) {
    synth = base["data"]["synthetic"];
  }
  if (f.seed) synth["seed"] = *f.seed;
  if (g.snapshots) synth["n_snapshots"] = *g.snapshots;
  if (g.days) synth["n_days"] = *g.days;
  if (!g.first_date.empty()) synth["first_date"] = g.first_date;
  json j = base;
  j["data"] = json{{"synthetic", synth}};
  const lobsim::RunConfig cfg = lobsim::ParseRunConfig(j);
  if (g.out_dir.empty()) throw UsageError("gen-synthetic needs --out-dir");

  const auto& s = *cfg.data.synthetic;
  const auto days =
      lobsim::GenerateSyntheticDays(s.params, s.first_date, s.n_days, cfg.market);
  fs::create_directories(g.out_dir);
  json files = json::array();
  for (const lobsim::DayData& d : days) {
    const fs::path path = fs::path(g.out_dir) / (d.date + ".csv");
    lobsim::WriteDayFile(path, d.snapshots);
    files.push_back({{"path", path.string()}, {"rows", d.snapshots.size()}});
  }
  EmitJson(f.out, {{"seed", s.params.seed}, {"files", files}});
  return kExitOk;
}

struct PolicyFlags {
  std::string policy;
};

int RunEpisodeCmd(const CommonFlags& f, const PolicyFlags& p) {
  json extra = json::object();
  if (!p.policy.empty()) extra["policy"] = p.policy;
  const lobsim::RunConfig cfg = BuildConfig(f, extra);
  const auto factory = lobsim::ParsePolicy(
      cfg.policy, static_cast<int>(cfg.environment.action_factors.size()));
  const lobsim::HistoryPtr h = lobsim::LoadRunHistory(cfg);
  auto policy = factory();
  const lobsim::EpisodeRecord rec = lobsim::RunEpisode(
      cfg.environment, h, *policy, cfg.seed, cfg.episode ? &*cfg.episode : nullptr);
  json j = lobsim::ToJson(rec);
  j["policy"] = policy->name();
  EmitJson(f.out, j);
  return kExitOk;
}

struct EvalFlags {
  std::optional<std::size_t> episodes;
  std::optional<int> workers;
  std::string csv;
  bool windows = false;
};

int Evaluate(const CommonFlags& f, const PolicyFlags& p, const EvalFlags& e) {
  json extra = json::object();
  if (!p.policy.empty()) extra["policy"] = p.policy;
  if (e.episodes) extra["episodes"] = *e.episodes;
  if (e.workers) extra["workers"] = *e.workers;
  const lobsim::RunConfig cfg = BuildConfig(f, extra);
  if (cfg.workers < 1) throw UsageError("--workers must be >= 1");
  const auto factory = lobsim::ParsePolicy(
      cfg.policy, static_cast<int>(cfg.environment.action_factors.size()));
  const lobsim::HistoryPtr h = lobsim::LoadRunHistory(cfg);

  if (!e.windows) {
    const lobsim::EvalReport report = lobsim::EvaluatePolicy(
        cfg.environment, h, factory, cfg.episodes, cfg.seed, cfg.workers);
    EmitJson(f.out, lobsim::ToJson(report));
    if (!e.csv.empty()) lobsim::WriteFileAtomic(e.csv, lobsim::EvalReportCsv(report));
    return kExitOk;
  }
  const auto dates = DatesOf(*h);
  const auto windows = lobsim::MakeWindows(dates, cfg.train_days, cfg.eval_days);
  const auto reports = lobsim::RunWindowProtocol(cfg.environment, h, factory, windows,
                                                 cfg.episodes, cfg.seed, cfg.workers);
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(lobsim::ToJson(r));
  EmitJson(f.out, {{"master_seed", cfg.seed}, {"windows", arr}});
  if (!e.csv.empty()) {
    std::string csv;
    for (std::size_t k = 0; k < reports.size(); ++k) {
      std::string part = lobsim::EvalReportCsv(reports[k]);
      if (k > 0) part.erase(0, part.find('\n') + 1);
      csv += part;
    }
    lobsim::WriteFileAtomic(e.csv, csv);
  }
  return kExitOk;
}

struct ConformanceFlags {
  std::string checks = "reproducibility,duplicity,rounding";
  std::size_t configs = 1;
  bool inject_fault = false;
  std::string policy = "random";
};

int Conformance(const CommonFlags& f, const ConformanceFlags& c) {
  const lobsim::RunConfig cfg = BuildConfig(f);
  std::vector<lobsim::ConformanceCheck> checks;
  std::stringstream ss(c.checks);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) checks.push_back(lobsim::ParseConformanceCheck(item));
  }
  if (checks.empty()) throw UsageError("--checks selects no checks");
  if (c.configs < 1) throw UsageError("--configs must be >= 1");
  lobsim::ParsePolicy(c.policy, static_cast<int>(cfg.environment.action_factors.size()));
  const lobsim::HistoryPtr h = lobsim::LoadRunHistory(cfg);
  lobsim::ConformanceOptions opt;
  opt.inject_fault = c.inject_fault;
  opt.policy = c.policy;

  json runs = json::array();
  bool all = true;
  for (std::size_t i = 0; i < c.configs; ++i) {
    const std::uint64_t seed = c.configs == 1 ? cfg.seed : lobsim::DeriveSeed(cfg.seed, i);
    const lobsim::ConformanceReport r =
        lobsim::RunConformance(checks, cfg.environment, h, seed, opt);
    all = all && r.all_passed();
    runs.push_back(lobsim::ToJson(r));
  }
  EmitJson(f.out, {{"passed", all}, {"runs", runs}});
  return all ? kExitOk : kExitFailure;
}

struct WindowFlags {
  std::optional<int> train;
  std::optional<int> eval;
};

int MakeWindowsCmd(const CommonFlags& f, const WindowFlags& w) {
  const lobsim::RunConfig cfg = BuildConfig(f);
  const int train = w.train.value_or(cfg.train_days);
  const int eval = w.eval.value_or(cfg.eval_days);
  const lobsim::HistoryPtr h = lobsim::LoadRunHistory(cfg);
  const auto dates = DatesOf(*h);
  json arr = json::array();
  for (const auto& win : lobsim::MakeWindows(dates, train, eval)) {
    arr.push_back(lobsim::ToJson(win));
  }
  EmitJson(f.out, {{"train_days", train}, {"eval_days", eval}, {"windows", arr}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit order book replay simulator for execution algorithms", "lobsim"};
  app.require_subcommand(1, 1);

  CommonFlags common;
  PolicyFlags policy;
  GenFlags gen;
  EvalFlags eval;
  ConformanceFlags conf;
  WindowFlags win;

  CLI::App* validate = app.add_subcommand("validate-data", "Check day files and summarize them");
  AddCommon(validate, common);

  CLI::App* synth = app.add_subcommand("gen-synthetic", "Write synthetic day files");
  AddCommon(synth, common);
  synth->add_option("--out-dir", gen.out_dir, "Directory for the generated day files")
      ->required();
  synth->add_option("--snapshots", gen.snapshots, "Snapshots per day");
  synth->add_option("--days", gen.days, "Number of days");
  synth->add_option("--first-date", gen.first_date, "First day (YYYY-MM-DD)");

  CLI::App* episode = app.add_subcommand("run-episode", "Run one episode and write its trace");
  AddCommon(episode, common);
  episode->add_option("--policy", policy.policy, "constant:<k> | random | greedy-spread[:x]");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a policy over many episodes");
  AddCommon(evaluate, common);
  evaluate->add_option("--policy", policy.policy, "constant:<k> | random | greedy-spread[:x]");
  evaluate->add_option("--episodes", eval.episodes, "Episodes per evaluation");
  evaluate->add_option("--workers", eval.workers, "Parallel episode workers");
  evaluate->add_option("--csv", eval.csv, "Also write per-episode rows as CSV");
  evaluate->add_flag("--windows", eval.windows, "Evaluate every train/eval window");

  CLI::App* conformance = app.add_subcommand("conformance", "Run simulator self-checks");
  AddCommon(conformance, common);
  conformance->add_option("--checks", conf.checks, "Comma-separated checks");
  conformance->add_option("--configs", conf.configs, "Number of sampled configurations");
  conformance->add_option("--policy", conf.policy, "Policy driving the episodes");
  conformance->add_flag("--inject-fault", conf.inject_fault,
                        "Replay on a price-shifted copy of the data");

  CLI::App* windows = app.add_subcommand("make-windows", "List train/eval windows");
  AddCommon(windows, common);
  windows->add_option("--train", win.train, "Train days per window");
  windows->add_option("--eval", win.eval, "Eval days per window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage_error", e.what());
    return kExitUsage;
  }

  try {
    if (*validate) return ValidateData(common);
    if (*synth) return GenSynthetic(common, gen);
    if (*episode) return RunEpisodeCmd(common, policy);
    if (*evaluate) return Evaluate(common, policy, eval);
    if (*conformance) return Conformance(common, conf);
    if (*windows) return MakeWindowsCmd(common, win);
  } catch (const UsageError& e) {
    PrintError(e.kind(), e.what());
    return kExitUsage;
  } catch (const lobsim::InvalidArgument& e) {
    PrintError(e.kind(), e.what());
    return kExitUsage;
  } catch (const lobsim::Error& e) {
    PrintError(e.kind(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    PrintError("internal_error", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
