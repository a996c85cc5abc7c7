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

#ifndef NODAL_METRICS_HPP_
#define NODAL_METRICS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nodal {

enum class Mode { kBaseline, kProtocol };

const char* to_string(Mode mode);
Mode parse_mode(std::string_view text);

// Per-trial counters. Fractions are kept at the 6-decimal precision the CSV
// carries, so a written row parses back to an equal value.
struct TrialMetrics {
  std::uint64_t trial_index = 0;
  Mode mode = Mode::kBaseline;
  std::uint64_t messages_attempted = 0;
  std::uint64_t delivered_clean = 0;
  std::uint64_t corrupt_detected = 0;
  std::uint64_t corrupt_undetected = 0;
  std::uint64_t lost = 0;
  std::uint64_t packet_loss_copies = 0;
  std::uint64_t retransmissions = 0;
  double availability = 1.0;
  double mean_connectivity = 1.0;
  std::uint64_t tapped_copies = 0;
  std::uint64_t degradations = 0;

  friend bool operator==(const TrialMetrics&, const TrialMetrics&) = default;
};

// Rounds to 6 decimal places.
double quantize_fraction(double x);

// Conservation identity, availability formula, and ranges.
bool satisfies_invariants(const TrialMetrics& m, std::string* why = nullptr);

inline constexpr std::string_view kCsvHeader =
    "trial_index,mode,messages_attempted,delivered_clean,corrupt_detected,"
    "corrupt_undetected,lost,packet_loss_copies,retransmissions,availability,"
    "mean_connectivity,tapped_copies,degradations";

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_csv(const std::vector<TrialMetrics>& rows);
void write_csv(const std::vector<TrialMetrics>& rows,
               const std::filesystem::path& destination);
std::vector<TrialMetrics> parse_csv(std::string_view text);
std::vector<TrialMetrics> read_csv(const std::filesystem::path& source);

// Metric columns a comparison covers.
enum class Metric {
  kPacketLossCopies,
  kRetransmissions,
  kCorruptUndetected,
  kCorruptDetected,
  kLost,
  kAvailability,
  kMeanConnectivity,
  kTappedCopies,
  kDegradations,
};

const char* to_string(Metric metric);
double metric_value(const TrialMetrics& m, Metric metric);
bool higher_is_better(Metric metric);
const std::vector<Metric>& all_metrics();

struct MetricComparison {
  Metric metric;
  double baseline_mean = 0.0;
  double protocol_mean = 0.0;
  double delta = 0.0;  // protocol - baseline
  // Improvement as a percentage of the baseline mean: positive when the
  // protocol is better. Empty when the baseline mean is zero.
  std::optional<double> percent_change;
};

struct ComparisonReport {
  std::size_t baseline_n = 0;
  std::size_t protocol_n = 0;
  std::vector<MetricComparison> metrics;

  const MetricComparison& at(Metric metric) const;
  // "metric: baseline=<mean> protocol=<mean> delta=<d> change=<p>%" per
  // metric, then a warning line for each metric the protocol made worse.
  std::string str() const;
};

ComparisonReport compare(const std::vector<TrialMetrics>& baseline,
                         const std::vector<TrialMetrics>& protocol);

struct BoxStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0, stddev = 0;
};

// Quartiles by linear interpolation at p*(n-1); sample standard deviation.
BoxStats box_stats(std::vector<double> values);

}  // namespace nodal

#endif  // NODAL_METRICS_HPP_
