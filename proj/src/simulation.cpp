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

#include "nodal/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <vector>

#include "nodal/protocol.hpp"
#include "nodal/rng.hpp"

namespace nodal {
namespace {

constexpr std::uint64_t kWorkloadStream = 1;
constexpr std::uint64_t kAttackStream = 2;
constexpr std::size_t kPayloadBytes = 64;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ConfigError out_of_range(const std::string& what) {
  return ConfigError(ConfigError::Kind::kOutOfRange, what);
}

struct Message {
  Packet packet;
  std::uint64_t tick = 0;
};

std::vector<Message> make_workload(const SimConfig& cfg, const Topology& t,
                                   std::uint64_t trial_index) {
  Rng rng(derive_seed(cfg.seed, trial_index, kWorkloadStream));
  std::vector<NodeId> endpoints;
  for (const NodeId& n : t.nodes()) {
    if (n.level() == Level::kO) endpoints.push_back(n);
  }
  if (endpoints.size() < 2) endpoints = t.nodes();

  MessageIdSource ids;
  std::vector<Message> out;
  out.reserve(cfg.messages_per_trial);
  for (std::uint64_t i = 0; i < cfg.messages_per_trial; ++i) {
    const auto s = rng.below(endpoints.size());
    auto d = rng.below(endpoints.size() - 1);
    if (d >= s) ++d;
    const std::uint64_t tick = rng.below(cfg.ticks);
    Bytes payload(kPayloadBytes);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next() & 0xff);
    out.push_back({make_message(endpoints[s], endpoints[d], std::move(payload), false, ids),
                   tick});
  }

  // Exactly round(fraction * M) critical messages, chosen by partial shuffle.
  const auto critical = static_cast<std::size_t>(
      std::llround(cfg.critical_fraction * static_cast<double>(out.size())));
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < critical; ++i) {
    const std::size_t j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
    out[order[i]].packet.critical = true;
  }
  return out;
}

}  // namespace

std::string TopologySpec::str() const {
  switch (kind) {
    case Kind::kFigure1: return "figure1";
    case Kind::kFigure1Redundant: return "figure1-redundant";
    case Kind::kGenerated:
      return "generated:" + std::to_string(n) + ',' + std::to_string(u) + ',' +
             std::to_string(l) + ',' + std::to_string(o) + ',' + num(redundancy_factor);
  }
  return "?";
}

TopologySpec TopologySpec::Parse(std::string_view text) {
  TopologySpec spec;
  if (text == "figure1") {
    spec.kind = Kind::kFigure1;
    return spec;
  }
  if (text == "figure1-redundant") {
    spec.kind = Kind::kFigure1Redundant;
    return spec;
  }
  constexpr std::string_view kPrefix = "generated:";
  if (text.substr(0, kPrefix.size()) != kPrefix) {
    throw ConfigError(ConfigError::Kind::kInvalid,
                      "unknown topology '" + std::string(text) +
                          "' (expected figure1, figure1-redundant, generated:n,u,l,o,r)");
  }
  text.remove_prefix(kPrefix.size());
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    parts.emplace_back(text.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 5) {
    throw ConfigError(ConfigError::Kind::kInvalid,
                      "generated topology needs 5 values n,u,l,o,redundancy");
  }
  std::uint32_t counts[4];
  for (int i = 0; i < 4; ++i) {
    const std::string& p = parts[static_cast<std::size_t>(i)];
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), counts[i]);
    if (p.empty() || ec != std::errc() || ptr != p.data() + p.size()) {
      throw ConfigError(ConfigError::Kind::kInvalid, "bad level count '" + p + "'");
    }
    if (counts[i] == 0) throw out_of_range("level counts must be >= 1");
  }
  char* end = nullptr;
  const double r = std::strtod(parts[4].c_str(), &end);
  if (parts[4].empty() || end != parts[4].c_str() + parts[4].size()) {
    throw ConfigError(ConfigError::Kind::kInvalid, "bad redundancy '" + parts[4] + "'");
  }
  if (!(r >= 0.0 && r <= 1.0)) throw out_of_range("redundancy must be in [0,1]");
  spec.kind = Kind::kGenerated;
  spec.n = counts[0];
  spec.u = counts[1];
  spec.l = counts[2];
  spec.o = counts[3];
  spec.redundancy_factor = r;
  return spec;
}

Topology TopologySpec::Build(std::uint64_t seed) const {
  switch (kind) {
    case Kind::kFigure1: return build_figure1(false);
    case Kind::kFigure1Redundant: return build_figure1(true);
    case Kind::kGenerated: return generate_topology(n, u, l, o, redundancy_factor, seed);
  }
  throw ConfigError(ConfigError::Kind::kInvalid, "unknown topology kind");
}

void SimConfig::Validate() const {
  const auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw out_of_range(std::string(name) + " must be in [0,1], got " + num(v));
    }
  };
  if (ticks < 1) throw out_of_range("ticks must be >= 1");
  if (messages_per_trial < 1) throw out_of_range("messages must be >= 1");
  if (trials < 1) throw out_of_range("trials must be >= 1");
  fraction(critical_fraction, "critical-fraction");
  fraction(rates.tap, "rate-tap");
  fraction(rates.corrupt, "rate-corrupt");
  fraction(rates.sever, "rate-sever");
  if (min_attack_duration < 1 || min_attack_duration > max_attack_duration) {
    throw out_of_range("attack duration range must satisfy 1 <= min <= max");
  }
  if (topology.kind == TopologySpec::Kind::kGenerated) {
    if (topology.n == 0 || topology.u == 0 || topology.l == 0 || topology.o == 0) {
      throw out_of_range("level counts must be >= 1");
    }
    fraction(topology.redundancy_factor, "redundancy");
  }
}

std::string SimConfig::Echo() const {
  std::string out;
  const auto line = [&](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  line("topology", topology.str());
  line("ticks", std::to_string(ticks));
  line("messages", std::to_string(messages_per_trial));
  line("critical-fraction", num(critical_fraction));
  line("budget", std::to_string(duplication_budget));
  line("rate-tap", num(rates.tap));
  line("rate-corrupt", num(rates.corrupt));
  line("rate-sever", num(rates.sever));
  line("min-duration", std::to_string(min_attack_duration));
  line("max-duration", std::to_string(max_attack_duration));
  line("weighted-attacks", criticality_weighted_attacks ? "true" : "false");
  line("payload-only-attacker", payload_only_attacker ? "true" : "false");
  line("max-retries", std::to_string(max_retries));
  line("trials", std::to_string(trials));
  line("seed", std::to_string(seed));
  return out;
}

SimConfig calibrated_preset() { return SimConfig{}; }

SimConfig no_attack_preset() {
  SimConfig cfg = calibrated_preset();
  cfg.rates = {};
  return cfg;
}

SimConfig preset_by_name(std::string_view name) {
  if (name == "calibrated") return calibrated_preset();
  if (name == "no-attacks") return no_attack_preset();
  throw ConfigError(ConfigError::Kind::kInvalid,
                    "unknown preset '" + std::string(name) +
                        "' (expected calibrated or no-attacks)");
}

AttackSchedule trial_schedule(const SimConfig& cfg, const Topology& topology,
                              std::uint64_t trial_index) {
  ScheduleOptions options{.min_duration = cfg.min_attack_duration,
                          .max_duration = cfg.max_attack_duration,
                          .criticality_weighted = cfg.criticality_weighted_attacks};
  return schedule_attacks(topology, cfg.ticks, cfg.rates,
                          derive_seed(cfg.seed, trial_index, kAttackStream), options);
}

TrialResult simulate_trial(const SimConfig& cfg, const Topology& topology,
                           Mode mode, std::uint64_t trial_index) {
  cfg.Validate();
  const AttackSchedule schedule = trial_schedule(cfg, topology, trial_index);
  std::vector<Message> workload = make_workload(cfg, topology, trial_index);

  std::set<std::uint64_t> protected_ids;
  if (mode == Mode::kProtocol) {
    std::vector<Candidate> candidates;
    for (const Message& m : workload) {
      if (m.packet.critical) {
        protected_ids.insert(m.packet.key.message_id);
        continue;
      }
      if (auto route = shortest_path(topology, m.packet.src, m.packet.dst)) {
        candidates.push_back({m.packet, std::move(*route)});
      }
    }
    for (const IdempotencyKey& key :
         select_protected_subset(candidates, cfg.duplication_budget, RiskModel{})) {
      protected_ids.insert(key.message_id);
    }
  }

  std::stable_sort(workload.begin(), workload.end(),
                   [](const Message& a, const Message& b) { return a.tick < b.tick; });

  TrialResult result;
  TrialMetrics& m = result.metrics;
  TrialDiagnostics& diag = result.diagnostics;
  m.trial_index = trial_index;
  m.mode = mode;
  diag.schedule_digest = schedule.digest();
  diag.protected_messages = protected_ids.size();

  // Routing sees a cut one tick after it happens; copies sent on the tick
  // a cut starts are lost on the wire.
  Topology physical = topology;
  Topology view = topology;
  double connectivity_sum = 0.0;
  std::set<std::uint64_t> seen_ids;
  auto next = workload.begin();
  for (std::uint64_t tick = 0; tick < cfg.ticks; ++tick) {
    apply_severs(physical, schedule, tick);
    connectivity_sum += connectivity(physical);

    TickAttacks attacks(topology, schedule, tick, !cfg.payload_only_attacker);
    const FaultHook hook = attacks.hook();
    for (; next != workload.end() && next->tick == tick; ++next) {
      const Packet& packet = next->packet;
      const bool is_protected = protected_ids.count(packet.key.message_id) != 0;
      const TransmissionOutcome out =
          transmit(view, packet, is_protected, cfg.max_retries, hook);

      ++m.messages_attempted;
      switch (out.classification) {
        case Classification::kDeliveredClean: ++m.delivered_clean; break;
        case Classification::kDeliveredCorruptDetected: ++m.corrupt_detected; break;
        case Classification::kDeliveredCorruptUndetected: ++m.corrupt_undetected; break;
        case Classification::kLost: ++m.lost; break;
      }
      m.packet_loss_copies += out.copies_dropped;
      m.retransmissions += out.retransmissions;
      m.degradations += out.degradations;

      diag.dual_attempts += out.dual_attempts;
      diag.disjointness_violations += out.disjointness_violations;
      if (out.primary_corrupted) ++diag.primary_corrupted;
      if (out.primary_corrupted_dual) ++diag.primary_corrupted_dual;
      if (out.undetected_with_two_copies) ++diag.undetected_with_two_copies;

      if (!seen_ids.insert(packet.key.message_id).second) ++diag.key_violations;
      for (std::size_t i = 0; i < out.attempt_keys.size(); ++i) {
        if (out.attempt_keys[i].message_id != packet.key.message_id ||
            out.attempt_keys[i].attempt != i) {
          ++diag.key_violations;
        }
      }
    }
    m.tapped_copies += attacks.tapped_copies();
    view = physical;
  }

  m.availability = quantize_fraction(
      static_cast<double>(m.messages_attempted - m.lost) /
      static_cast<double>(m.messages_attempted));
  m.mean_connectivity =
      quantize_fraction(connectivity_sum / static_cast<double>(cfg.ticks));
  return result;
}

TrialMetrics run_trial(const SimConfig& cfg, Mode mode, std::uint64_t trial_index) {
  cfg.Validate();
  const Topology topology = cfg.topology.Build(cfg.seed);
  return simulate_trial(cfg, topology, mode, trial_index).metrics;
}

}  // namespace nodal
