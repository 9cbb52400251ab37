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

#ifndef LOBSIM_CONFIG_HPP_
#define LOBSIM_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lobsim/data_feed.hpp"
#include "lobsim/environment.hpp"

namespace lobsim {

struct SyntheticHistoryConfig {
  SyntheticFeedParams params;
  std::string first_date = "2021-06-01";
  int n_days = 1;
};

struct DataConfig {
  std::string dir;                 // day files directory
  std::vector<std::string> files;  // explicit day files; overrides dir
  std::optional<SyntheticHistoryConfig> synthetic;
};

// Everything a CLI run needs. Parsed from JSON; see README for the schema.
struct RunConfig {
  MarketSpec market;
  DataConfig data;
  EnvironmentConfig environment;
  std::optional<EpisodeParams> episode;  // fixed episode; else sampled
  std::string policy = "constant:1";
  std::size_t episodes = 100;
  int workers = 1;
  std::uint64_t seed = 0;
  int train_days = 5;
  int eval_days = 5;
};

// Throws InvalidArgument on unknown keys, wrong types or bad values.
RunConfig ParseRunConfig(const nlohmann::json& json);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Applies a `dotted.key=value` override. The value is parsed as JSON when
// possible and taken as a string otherwise.
void ApplyOverride(nlohmann::json& json, std::string_view assignment);

// Loads day files from the data section, or generates the synthetic history.
HistoryPtr LoadRunHistory(const RunConfig& config);

}  // namespace lobsim

#endif  // LOBSIM_CONFIG_HPP_
