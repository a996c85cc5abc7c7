// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NODAL_SIMULATION_HPP_
#define NODAL_SIMULATION_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nodal/adversary.hpp"
#include "nodal/digest.hpp"
#include "nodal/metrics.hpp"
#include "nodal/topology.hpp"

namespace nodal {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { kUnknownFlag, kOutOfRange, kMalformedFile, kInvalid };

  ConfigError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// "figure1", "figure1-redundant", or "generated:n,u,l,o,redundancy".
struct TopologySpec {
  enum class Kind { kFigure1, kFigure1Redundant, kGenerated };

  Kind kind = Kind::kGenerated;
  std::uint32_t n = 4, u = 8, l = 16, o = 32;
  double redundancy_factor = 0.3;

  std::string str() const;
  static TopologySpec Parse(std::string_view text);
  Topology Build(std::uint64_t seed) const;

  friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

// Defaults are the calibrated operating point.
struct SimConfig {
  TopologySpec topology;
  std::uint64_t ticks = 50;
  std::uint64_t messages_per_trial = 1000;
  double critical_fraction = 0.1;
  std::uint64_t duplication_budget = 800;
  AttackRates rates{.tap = 0.002, .corrupt = 0.0007, .sever = 0.003};
  std::uint64_t min_attack_duration = 1;
  std::uint64_t max_attack_duration = 5;
  bool criticality_weighted_attacks = false;
  bool payload_only_attacker = false;
  std::uint32_t max_retries = 4;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;

  // Throws ConfigError(kOutOfRange) on the first violated constraint.
  void Validate() const;
  // One "key=value" line per field, in a fixed order.
  std::string Echo() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// The calibrated configuration used for the comparative runs.
SimConfig calibrated_preset();
// Same as the preset with every attack rate at zero.
SimConfig no_attack_preset();
SimConfig preset_by_name(std::string_view name);

// Extra per-trial bookkeeping that does not belong in the CSV.
struct TrialDiagnostics {
  Digest schedule_digest;
  std::uint64_t protected_messages = 0;
  std::uint64_t dual_attempts = 0;
  std::uint64_t disjointness_violations = 0;
  std::uint64_t primary_corrupted = 0;
  std::uint64_t primary_corrupted_dual = 0;
  std::uint64_t undetected_with_two_copies = 0;
  std::uint64_t key_violations = 0;
};

struct TrialResult {
  TrialMetrics metrics;
  TrialDiagnostics diagnostics;
};

// Everything a trial derives from (seed, trial_index): the topology is
// shared, the workload and attack schedule come from per-trial streams that
// do not depend on mode, so both modes face identical conditions.
TrialResult simulate_trial(const SimConfig& cfg, const Topology& topology,
                           Mode mode, std::uint64_t trial_index);

TrialMetrics run_trial(const SimConfig& cfg, Mode mode, std::uint64_t trial_index);

AttackSchedule trial_schedule(const SimConfig& cfg, const Topology& topology,
                              std::uint64_t trial_index);

}  // namespace nodal

#endif  // NODAL_SIMULATION_HPP_
