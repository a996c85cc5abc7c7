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

#ifndef NODAL_EXPERIMENT_HPP_
#define NODAL_EXPERIMENT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "nodal/metrics.hpp"
#include "nodal/simulation.hpp"

namespace nodal {

struct ExperimentResult {
  std::vector<TrialMetrics> baseline;
  std::vector<TrialMetrics> protocol;
  std::vector<TrialDiagnostics> baseline_diagnostics;
  std::vector<TrialDiagnostics> protocol_diagnostics;
  ComparisonReport report;
  std::uint64_t schedule_mismatches = 0;  // trial pairs that saw different attacks
  std::uint64_t invariant_failures = 0;   // rows failing satisfies_invariants

  bool ok() const { return schedule_mismatches == 0 && invariant_failures == 0; }

  // Among messages whose primary copy was corrupted in flight under the
  // protocol, the fraction whose corrupting attempt carried two copies.
  double dual_coverage() const;

  // Comparison lines followed by per-mode box statistics.
  std::string ReportText() const;
};

// Runs trials 0..N-1 in both modes against identical per-trial schedules.
// Rows are ordered by trial index whatever the worker count.
ExperimentResult run_experiment(const SimConfig& cfg, unsigned threads = 0);

// Writes baseline.csv, protocol.csv and report.txt into `out_dir`.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir);

}  // namespace nodal

#endif  // NODAL_EXPERIMENT_HPP_
