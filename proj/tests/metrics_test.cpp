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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nodal/metrics.hpp"
#include "nodal/rng.hpp"

using namespace nodal;

namespace {

TrialMetrics row(std::uint64_t trial, Mode mode, std::uint64_t clean, std::uint64_t detected,
                 std::uint64_t undetected, std::uint64_t lost) {
  TrialMetrics m;
  m.trial_index = trial;
  m.mode = mode;
  m.delivered_clean = clean;
  m.corrupt_detected = detected;
  m.corrupt_undetected = undetected;
  m.lost = lost;
  m.messages_attempted = clean + detected + undetected + lost;
  m.availability = quantize_fraction(static_cast<double>(m.messages_attempted - lost) /
                                     static_cast<double>(m.messages_attempted));
  return m;
}

}  // namespace

TEST_CASE("csv column order") {
  CHECK(std::string(kCsvHeader) ==
        "trial_index,mode,messages_attempted,delivered_clean,corrupt_detected,"
        "corrupt_undetected,lost,packet_loss_copies,retransmissions,availability,"
        "mean_connectivity,tapped_copies,degradations");
  TrialMetrics m = row(3, Mode::kProtocol, 90, 4, 1, 5);
  m.packet_loss_copies = 12;
  m.retransmissions = 7;
  m.mean_connectivity = 0.987654;
  m.tapped_copies = 2;
  m.degradations = 1;
  CHECK(format_csv({m}) == std::string(kCsvHeader) +
                               "\n3,protocol,100,90,4,1,5,12,7,0.950000,0.987654,2,1\n");
}

TEST_CASE("csv round-trip") {
  Rng rng(4);
  std::vector<TrialMetrics> rows;
  for (std::uint64_t i = 0; i < 30; ++i) {
    TrialMetrics m = row(i, i % 2 ? Mode::kProtocol : Mode::kBaseline, rng.below(500),
                         rng.below(20), rng.below(20), 1 + rng.below(50));
    m.packet_loss_copies = rng.below(1000);
    m.retransmissions = rng.below(1000);
    m.mean_connectivity = quantize_fraction(rng.uniform());
    m.tapped_copies = rng.below(100);
    m.degradations = rng.below(100);
    rows.push_back(m);
  }
  CHECK(parse_csv(format_csv(rows)) == rows);

  const auto dir = std::filesystem::temp_directory_path() / "nodal_metrics_test";
  std::filesystem::create_directories(dir);
  write_csv(rows, dir / "rows.csv");
  CHECK(read_csv(dir / "rows.csv") == rows);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(write_csv({}, std::filesystem::temp_directory_path() / "never.csv"), CsvError);
  CHECK_THROWS_AS(write_csv({row(0, Mode::kBaseline, 1, 0, 0, 0)},
                            "/nonexistent-dir/sub/out.csv"),
                  CsvError);
  CHECK_THROWS_AS(parse_csv(""), CsvError);
  CHECK_THROWS_AS(parse_csv("a,b\n"), CsvError);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\n1,protocol,3\n"), CsvError);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) +
                            "\n0,sideways,1,1,0,0,0,0,0,1.000000,1.000000,0,0\n"),
                  CsvError);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) +
                            "\n0,baseline,x,1,0,0,0,0,0,1.000000,1.000000,0,0\n"),
                  CsvError);
  CHECK_THROWS_AS(read_csv("/nonexistent-dir/in.csv"), CsvError);
}

TEST_CASE("invariants") {
  std::string why;
  CHECK(satisfies_invariants(row(0, Mode::kBaseline, 10, 1, 1, 2), &why));

  TrialMetrics bad = row(0, Mode::kBaseline, 10, 1, 1, 2);
  bad.messages_attempted += 1;
  CHECK_FALSE(satisfies_invariants(bad, &why));
  CHECK(why.find("sum") != std::string::npos);

  bad = row(0, Mode::kBaseline, 10, 1, 1, 2);
  bad.availability = 0.5;
  CHECK_FALSE(satisfies_invariants(bad, nullptr));

  bad = row(0, Mode::kBaseline, 10, 1, 1, 2);
  bad.mean_connectivity = 1.5;
  CHECK_FALSE(satisfies_invariants(bad, nullptr));

  CHECK_FALSE(satisfies_invariants(TrialMetrics{}, nullptr));
}

TEST_CASE("availability is (attempted - lost) / attempted on random rows") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const TrialMetrics m = row(0, Mode::kBaseline, rng.below(1000), rng.below(50),
                               rng.below(50), rng.below(200) + 1);
    CHECK(satisfies_invariants(m, nullptr));
    CHECK(m.availability >= 0.0);
    CHECK(m.availability <= 1.0);
    CHECK(std::abs(m.availability - static_cast<double>(m.messages_attempted - m.lost) /
                                        static_cast<double>(m.messages_attempted)) <= 5e-7);
  }
}

TEST_CASE("compare") {
  std::vector<TrialMetrics> base = {row(0, Mode::kBaseline, 80, 0, 10, 10),
                                    row(1, Mode::kBaseline, 80, 0, 10, 10)};
  std::vector<TrialMetrics> prot = {row(0, Mode::kProtocol, 90, 8, 1, 1),
                                    row(1, Mode::kProtocol, 90, 8, 1, 1)};
  base[0].retransmissions = base[1].retransmissions = 40;
  prot[0].retransmissions = prot[1].retransmissions = 50;

  const ComparisonReport r = compare(base, prot);
  CHECK(r.baseline_n == 2);
  CHECK(r.protocol_n == 2);
  CHECK(r.metrics.size() == all_metrics().size());

  // Lower-is-better metrics report reductions as positive percentages.
  CHECK(*r.at(Metric::kCorruptUndetected).percent_change == doctest::Approx(90.0));
  CHECK(*r.at(Metric::kLost).percent_change == doctest::Approx(90.0));
  CHECK(r.at(Metric::kLost).delta == doctest::Approx(-9.0));
  CHECK(*r.at(Metric::kRetransmissions).percent_change == doctest::Approx(-25.0));
  // Higher-is-better keeps its natural sign.
  CHECK(*r.at(Metric::kAvailability).percent_change ==
        doctest::Approx((0.99 - 0.9) / 0.9 * 100.0));
  // Zero baseline has no defined percentage.
  CHECK_FALSE(r.at(Metric::kCorruptDetected).percent_change.has_value());

  const std::string text = r.str();
  CHECK(text.rfind("trials: baseline=2 protocol=2\n", 0) == 0);
  CHECK(text.find("lost: baseline=10.000000 protocol=1.000000 delta=-9.000000 change=90.00%") !=
        std::string::npos);
  CHECK(text.find("corrupt_detected: baseline=0.000000 protocol=8.000000 delta=8.000000 "
                  "change=undefined%") != std::string::npos);
  CHECK(text.find("warning: retransmissions got worse") != std::string::npos);
  CHECK(text.find("warning: lost") == std::string::npos);

  CHECK_THROWS(compare({}, prot));
  CHECK_THROWS(compare(base, {}));
}

TEST_CASE("box statistics") {
  const BoxStats s = box_stats({4, 1, 3, 2, 5});
  CHECK(s.min == 1);
  CHECK(s.q1 == 2);
  CHECK(s.median == 3);
  CHECK(s.q3 == 4);
  CHECK(s.max == 5);
  CHECK(s.mean == 3);
  CHECK(s.stddev == doctest::Approx(std::sqrt(2.5)));

  const BoxStats even = box_stats({1, 2, 3, 4});
  CHECK(even.q1 == doctest::Approx(1.75));
  CHECK(even.median == doctest::Approx(2.5));
  CHECK(even.q3 == doctest::Approx(3.25));

  const BoxStats one = box_stats({7});
  CHECK(one.min == 7);
  CHECK(one.max == 7);
  CHECK(one.stddev == 0);
  CHECK_THROWS(box_stats({}));

  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v(1 + rng.below(30));
    for (double& x : v) x = rng.uniform() * 100.0;
    const BoxStats b = box_stats(v);
    CHECK(b.min <= b.q1);
    CHECK(b.q1 <= b.median);
    CHECK(b.median <= b.q3);
    CHECK(b.q3 <= b.max);
    CHECK(b.mean >= b.min);
    CHECK(b.mean <= b.max);
  }
}

TEST_CASE("mode names") {
  CHECK(std::string(to_string(Mode::kBaseline)) == "baseline");
  CHECK(parse_mode("protocol") == Mode::kProtocol);
  CHECK_THROWS(parse_mode("other"));
}
