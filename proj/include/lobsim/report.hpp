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

#ifndef LOBSIM_REPORT_HPP_
#define LOBSIM_REPORT_HPP_

#include <span>
#include <string>

#include "json.hpp"
#include "lobsim/harness.hpp"

namespace lobsim {

// Exact values (prices, volumes, rewards) are written as decimal strings;
// observations and summary statistics as JSON numbers.
nlohmann::json ToJson(const TradeLogEntry& entry);
nlohmann::json ToJson(std::span<const TradeLogEntry> log);
nlohmann::json ToJson(const EpisodeParams& params);
nlohmann::json ToJson(const EpisodeRecord& record);
nlohmann::json ToJson(const EvalWindow& window);
nlohmann::json ToJson(const EvalReport& report);
nlohmann::json ToJson(const ConformanceReport& report);
nlohmann::json ToJson(const ExecutionAlgo& schedule);

// One header line plus one row per episode.
std::string EvalReportCsv(const EvalReport& report);

// "0.0506 ± 0.46"-style cell.
std::string FormatMeanStd(double mean, double std, int precision = 4);

}  // namespace lobsim

#endif  // LOBSIM_REPORT_HPP_
