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

#include "lobsim/policy.hpp"

#include <charconv>
#include <string>

#include "lobsim/errors.hpp"

namespace lobsim {
namespace {

// Offsets of the latest snapshot's best bid and best ask prices.
constexpr std::size_t kLatestBase = (kObservedSnapshots - 1) * kObservedLevels * 4;
constexpr std::size_t kLatestBestBid = kLatestBase;
constexpr std::size_t kLatestBestAsk = kLatestBase + kObservedLevels * 2;

}  // namespace

std::string ConstantPolicy::name() const {
  return "constant:" + std::to_string(action_);
}

int UniformRandomPolicy::Act(const Observation&) {
  return static_cast<int>(rng_.UniformInt(0, action_count_ - 1));
}

int GreedySpreadPolicy::Act(const Observation& obs) {
  const double spread = obs[kLatestBestAsk] - obs[kLatestBestBid];
  return spread <= threshold_ ? high_ : low_;
}

std::string GreedySpreadPolicy::name() const {
  return "greedy-spread:" + std::to_string(threshold_);
}

PolicyFactory ParsePolicy(std::string_view spec, int action_count) {
  const std::size_t colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "constant") {
    int action = -1;
    const auto [ptr, ec] =
        std::from_chars(arg.data(), arg.data() + arg.size(), action);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || action < 0 ||
        action >= action_count) {
      throw InvalidArgument("constant policy needs an action in [0, " +
                            std::to_string(action_count) + "), got '" +
                            std::string(arg) + "'");
    }
    return [action] { return std::make_unique<ConstantPolicy>(action); };
  }
  if (head == "random" && arg.empty()) {
    return [action_count] {
      return std::make_unique<UniformRandomPolicy>(action_count);
    };
  }
  if (head == "greedy-spread") {
    double threshold = 5e-6;
    if (!arg.empty()) {
      try {
        std::size_t used = 0;
        threshold = std::stod(std::string(arg), &used);
        if (used != arg.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InvalidArgument("bad greedy-spread threshold '" +
                              std::string(arg) + "'");
      }
    }
    if (action_count < 3) {
      throw InvalidArgument("greedy-spread needs at least 3 actions");
    }
    return [threshold] { return std::make_unique<GreedySpreadPolicy>(threshold); };
  }
  throw InvalidArgument("unknown policy '" + std::string(spec) + "'");
}

}  // namespace lobsim
