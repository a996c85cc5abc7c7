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

#include "nodal/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <thread>

namespace nodal {
namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string box_line(Metric metric, Mode mode, const std::vector<TrialMetrics>& rows) {
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& r : rows) values.push_back(metric_value(r, metric));
  const BoxStats s = box_stats(std::move(values));
  return std::string("box ") + to_string(metric) + ' ' + to_string(mode) +
         ": min=" + fixed6(s.min) + " q1=" + fixed6(s.q1) + " median=" +
         fixed6(s.median) + " q3=" + fixed6(s.q3) + " max=" + fixed6(s.max) +
         " mean=" + fixed6(s.mean) + " stddev=" + fixed6(s.stddev) + '\n';
}

}  // namespace

double ExperimentResult::dual_coverage() const {
  std::uint64_t corrupted = 0;
  std::uint64_t dual = 0;
  for (const auto& d : protocol_diagnostics) {
    corrupted += d.primary_corrupted;
    dual += d.primary_corrupted_dual;
  }
  return corrupted == 0 ? 0.0 : static_cast<double>(dual) / static_cast<double>(corrupted);
}

std::string ExperimentResult::ReportText() const {
  std::string out = report.str();
  for (Metric metric : all_metrics()) {
    out += box_line(metric, Mode::kBaseline, baseline);
    out += box_line(metric, Mode::kProtocol, protocol);
  }
  return out;
}

ExperimentResult run_experiment(const SimConfig& cfg, unsigned threads) {
  cfg.Validate();
  const Topology topology = cfg.topology.Build(cfg.seed);
  const std::size_t n = cfg.trials;

  std::vector<TrialResult> base(n);
  std::vector<TrialResult> prot(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      base[i] = simulate_trial(cfg, topology, Mode::kBaseline, i);
      prot[i] = simulate_trial(cfg, topology, Mode::kProtocol, i);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(base[i].diagnostics.schedule_digest == prot[i].diagnostics.schedule_digest)) {
      ++result.schedule_mismatches;
    }
    for (const TrialResult* r : {&base[i], &prot[i]}) {
      if (!satisfies_invariants(r->metrics)) ++result.invariant_failures;
    }
    result.baseline.push_back(base[i].metrics);
    result.protocol.push_back(prot[i].metrics);
    result.baseline_diagnostics.push_back(base[i].diagnostics);
    result.protocol_diagnostics.push_back(prot[i].diagnostics);
  }
  result.report = compare(result.baseline, result.protocol);
  return result;
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw CsvError("cannot create " + out_dir.string() + ": " + ec.message());
  write_csv(result.baseline, out_dir / "baseline.csv");
  write_csv(result.protocol, out_dir / "protocol.csv");
  std::ofstream report(out_dir / "report.txt", std::ios::binary | std::ios::trunc);
  if (!report) throw CsvError("cannot open " + (out_dir / "report.txt").string());
  report << result.ReportText();
  report.flush();
  if (!report) throw CsvError("write to report.txt failed");
}

}  // namespace nodal
