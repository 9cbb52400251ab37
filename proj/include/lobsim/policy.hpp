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

#ifndef LOBSIM_POLICY_HPP_
#define LOBSIM_POLICY_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "lobsim/environment.hpp"
#include "lobsim/rng.hpp"

namespace lobsim {

// Maps observations to action indices. Stands in for an external learner.
class Policy {
 public:
  virtual ~Policy() = default;
  // Called once per episode with a seed derived from the episode seed.
  virtual void Reset(std::uint64_t /*seed*/) {}
  virtual int Act(const Observation& observation) = 0;
  virtual std::string name() const = 0;
  virtual bool deterministic() const { return true; }
};

class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(int action) : action_(action) {}
  int Act(const Observation&) override { return action_; }
  std::string name() const override;

 private:
  int action_;
};

class UniformRandomPolicy final : public Policy {
 public:
  explicit UniformRandomPolicy(int action_count, std::uint64_t seed = 0)
      : action_count_(action_count), rng_(seed) {}
  void Reset(std::uint64_t seed) override { rng_ = DeterministicRng(seed); }
  int Act(const Observation&) override;
  std::string name() const override { return "random"; }
  bool deterministic() const override { return false; }

 private:
  int action_count_;
  DeterministicRng rng_;
};

// Trades more when the latest relative spread is tight and less otherwise.
class GreedySpreadPolicy final : public Policy {
 public:
  explicit GreedySpreadPolicy(double max_relative_spread, int high_action = 2,
                              int low_action = 0)
      : threshold_(max_relative_spread),
        high_(high_action),
        low_(low_action) {}
  int Act(const Observation& observation) override;
  std::string name() const override;

 private:
  double threshold_;
  int high_;
  int low_;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

// "constant:<k>", "random", "greedy-spread[:<max relative spread>]".
PolicyFactory ParsePolicy(std::string_view spec, int action_count);

}  // namespace lobsim

#endif  // LOBSIM_POLICY_HPP_
