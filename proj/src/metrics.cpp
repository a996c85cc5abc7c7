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

#include "nodal/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace nodal {
namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string fixed(double x, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, x);
  return buf;
}

std::uint64_t field_u64(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw CsvError("line " + std::to_string(line) + ": bad integer '" +
                   std::string(s) + "'");
  }
  return v;
}

double field_fraction(std::string_view s, std::size_t line) {
  const std::string owned(s);
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) {
    throw CsvError("line " + std::to_string(line) + ": bad number '" + owned + "'");
  }
  return v;
}

double mean_of(const std::vector<TrialMetrics>& rows, Metric metric) {
  double sum = 0.0;
  for (const auto& r : rows) sum += metric_value(r, metric);
  return sum / static_cast<double>(rows.size());
}

}  // namespace

const char* to_string(Mode mode) {
  return mode == Mode::kBaseline ? "baseline" : "protocol";
}

Mode parse_mode(std::string_view text) {
  if (text == "baseline") return Mode::kBaseline;
  if (text == "protocol") return Mode::kProtocol;
  throw CsvError("unknown mode '" + std::string(text) + "'");
}

double quantize_fraction(double x) { return std::round(x * 1e6) / 1e6; }

bool satisfies_invariants(const TrialMetrics& m, std::string* why) {
  const auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (m.messages_attempted !=
      m.delivered_clean + m.corrupt_detected + m.corrupt_undetected + m.lost) {
    return fail("classification counts do not sum to messages_attempted");
  }
  if (m.messages_attempted == 0) return fail("no messages attempted");
  const double expected = quantize_fraction(
      static_cast<double>(m.messages_attempted - m.lost) /
      static_cast<double>(m.messages_attempted));
  if (m.availability != expected) return fail("availability formula violated");
  if (m.availability < 0.0 || m.availability > 1.0) return fail("availability out of range");
  if (m.mean_connectivity < 0.0 || m.mean_connectivity > 1.0) {
    return fail("mean_connectivity out of range");
  }
  return true;
}

std::string format_csv(const std::vector<TrialMetrics>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const TrialMetrics& m : rows) {
    out += std::to_string(m.trial_index) + ',' + to_string(m.mode) + ',' +
           std::to_string(m.messages_attempted) + ',' +
           std::to_string(m.delivered_clean) + ',' +
           std::to_string(m.corrupt_detected) + ',' +
           std::to_string(m.corrupt_undetected) + ',' + std::to_string(m.lost) + ',' +
           std::to_string(m.packet_loss_copies) + ',' +
           std::to_string(m.retransmissions) + ',' + fixed6(m.availability) + ',' +
           fixed6(m.mean_connectivity) + ',' + std::to_string(m.tapped_copies) + ',' +
           std::to_string(m.degradations) + '\n';
  }
  return out;
}

void write_csv(const std::vector<TrialMetrics>& rows,
               const std::filesystem::path& destination) {
  if (rows.empty()) throw CsvError("refusing to write a CSV with no rows");
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw CsvError("cannot open " + destination.string() + " for writing");
  out << format_csv(rows);
  out.flush();
  if (!out) throw CsvError("write to " + destination.string() + " failed");
}

std::vector<TrialMetrics> parse_csv(std::string_view text) {
  std::vector<TrialMetrics> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!header_seen) {
      if (line != kCsvHeader) throw CsvError("unexpected CSV header");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 13) {
      throw CsvError("line " + std::to_string(line_no) + ": expected 13 fields");
    }
    TrialMetrics m;
    m.trial_index = field_u64(f[0], line_no);
    m.mode = parse_mode(f[1]);
    m.messages_attempted = field_u64(f[2], line_no);
    m.delivered_clean = field_u64(f[3], line_no);
    m.corrupt_detected = field_u64(f[4], line_no);
    m.corrupt_undetected = field_u64(f[5], line_no);
    m.lost = field_u64(f[6], line_no);
    m.packet_loss_copies = field_u64(f[7], line_no);
    m.retransmissions = field_u64(f[8], line_no);
    m.availability = field_fraction(f[9], line_no);
    m.mean_connectivity = field_fraction(f[10], line_no);
    m.tapped_copies = field_u64(f[11], line_no);
    m.degradations = field_u64(f[12], line_no);
    rows.push_back(m);
  }
  if (!header_seen) throw CsvError("empty CSV");
  return rows;
}

std::vector<TrialMetrics> read_csv(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw CsvError("cannot open " + source.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::kPacketLossCopies: return "packet_loss_copies";
    case Metric::kRetransmissions: return "retransmissions";
    case Metric::kCorruptUndetected: return "corrupt_undetected";
    case Metric::kCorruptDetected: return "corrupt_detected";
    case Metric::kLost: return "lost";
    case Metric::kAvailability: return "availability";
    case Metric::kMeanConnectivity: return "mean_connectivity";
    case Metric::kTappedCopies: return "tapped_copies";
    case Metric::kDegradations: return "degradations";
  }
  return "?";
}

double metric_value(const TrialMetrics& m, Metric metric) {
  switch (metric) {
    case Metric::kPacketLossCopies: return static_cast<double>(m.packet_loss_copies);
    case Metric::kRetransmissions: return static_cast<double>(m.retransmissions);
    case Metric::kCorruptUndetected: return static_cast<double>(m.corrupt_undetected);
    case Metric::kCorruptDetected: return static_cast<double>(m.corrupt_detected);
    case Metric::kLost: return static_cast<double>(m.lost);
    case Metric::kAvailability: return m.availability;
    case Metric::kMeanConnectivity: return m.mean_connectivity;
    case Metric::kTappedCopies: return static_cast<double>(m.tapped_copies);
    case Metric::kDegradations: return static_cast<double>(m.degradations);
  }
  return 0.0;
}

// Detected corruption counts as an improvement: it is corruption the
// receiver knows about instead of silently accepting.
bool higher_is_better(Metric metric) {
  return metric == Metric::kAvailability || metric == Metric::kMeanConnectivity ||
         metric == Metric::kCorruptDetected;
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> kAll = {
      Metric::kPacketLossCopies, Metric::kRetransmissions,
      Metric::kCorruptUndetected, Metric::kCorruptDetected,
      Metric::kLost,              Metric::kAvailability,
      Metric::kMeanConnectivity,  Metric::kTappedCopies,
      Metric::kDegradations};
  return kAll;
}

const MetricComparison& ComparisonReport::at(Metric metric) const {
  for (const auto& m : metrics) {
    if (m.metric == metric) return m;
  }
  throw std::out_of_range(std::string("metric not in report: ") + to_string(metric));
}

std::string ComparisonReport::str() const {
  std::string out;
  out += "trials: baseline=" + std::to_string(baseline_n) +
         " protocol=" + std::to_string(protocol_n) + '\n';
  for (const auto& m : metrics) {
    out += std::string(to_string(m.metric)) + ": baseline=" + fixed6(m.baseline_mean) +
           " protocol=" + fixed6(m.protocol_mean) + " delta=" + fixed6(m.delta) +
           " change=" + (m.percent_change ? fixed(*m.percent_change, 2) : "undefined") +
           "%\n";
  }
  for (const auto& m : metrics) {
    // Taps and degradations are exposure counters, not outcomes.
    if (m.metric == Metric::kTappedCopies || m.metric == Metric::kDegradations) continue;
    if (m.percent_change && *m.percent_change < 0.0) {
      out += std::string("warning: ") + to_string(m.metric) +
             " got worse under the protocol (sign inverted)\n";
    }
  }
  return out;
}

ComparisonReport compare(const std::vector<TrialMetrics>& baseline,
                         const std::vector<TrialMetrics>& protocol) {
  if (baseline.empty() || protocol.empty()) {
    throw std::invalid_argument("compare needs non-empty baseline and protocol rows");
  }
  ComparisonReport report;
  report.baseline_n = baseline.size();
  report.protocol_n = protocol.size();
  for (Metric metric : all_metrics()) {
    MetricComparison c{.metric = metric,
                       .baseline_mean = mean_of(baseline, metric),
                       .protocol_mean = mean_of(protocol, metric),
                       .delta = 0.0,
                       .percent_change = std::nullopt};
    c.delta = c.protocol_mean - c.baseline_mean;
    if (c.baseline_mean != 0.0) {
      const double signed_change = c.delta / c.baseline_mean * 100.0;
      c.percent_change = higher_is_better(metric) ? signed_change : -signed_change;
    }
    report.metrics.push_back(c);
  }
  return report;
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("box_stats of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
  };
  BoxStats s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

}  // namespace nodal
