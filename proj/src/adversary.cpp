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

#include "nodal/adversary.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "nodal/rng.hpp"

namespace nodal {
namespace {

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument(std::string("malformed ") + what + ": '" +
                                std::string(s) + "'");
  }
  return v;
}

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument(std::string("attack rate '") + name +
                                "' must be in [0,1]");
  }
}

// Deterministic replacement bytes for one corrupted copy.
Bytes attacker_bytes(const AttackEvent& event, const Packet& copy,
                     std::size_t length) {
  std::string seed_text = event.str();
  seed_text += '|' + std::to_string(copy.key.message_id);
  seed_text += '|' + std::to_string(copy.key.attempt);
  seed_text += copy.copy == CopyKind::kPrimary ? "|P" : "|S";
  Bytes out;
  out.reserve(length);
  for (std::uint32_t block = 0; out.size() < length; ++block) {
    const Digest d = payload_digest(seed_text + '#' + std::to_string(block));
    for (std::uint8_t b : d.bytes) {
      if (out.size() == length) break;
      out.push_back(b);
    }
  }
  if (out == copy.payload) {
    if (out.empty()) {
      out.push_back(0xA5);
    } else {
      out[0] ^= 0x01;
    }
  }
  return out;
}

}  // namespace

const char* to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kTap: return "TAP";
    case AttackKind::kCorrupt: return "CORRUPT";
    case AttackKind::kSever: return "SEVER";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view text) {
  if (text == "TAP") return AttackKind::kTap;
  if (text == "CORRUPT") return AttackKind::kCorrupt;
  if (text == "SEVER") return AttackKind::kSever;
  throw std::invalid_argument("unknown attack kind '" + std::string(text) + "'");
}

std::string AttackEvent::str() const {
  return std::string(to_string(kind)) + ' ' + edge.str() + ' ' +
         std::to_string(start_tick) + ' ' + std::to_string(duration_ticks);
}

AttackEvent AttackEvent::Parse(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    const auto end = std::min(line.find(' ', pos), line.size());
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  if (fields.size() != 4) {
    throw std::invalid_argument("attack event needs 4 fields: '" + std::string(line) + "'");
  }
  AttackEvent ev{parse_attack_kind(fields[0]), Edge::Parse(fields[1]),
                 parse_u64(fields[2], "start tick"), parse_u64(fields[3], "duration")};
  if (ev.duration_ticks == 0) throw std::invalid_argument("attack duration must be >= 1");
  return ev;
}

std::string AttackSchedule::Serialize() const {
  std::string out;
  for (const AttackEvent& ev : events) {
    out += ev.str();
    out += '\n';
  }
  return out;
}

AttackSchedule AttackSchedule::Deserialize(std::string_view text) {
  AttackSchedule s;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    s.events.push_back(AttackEvent::Parse(line));
  }
  return s;
}

Digest AttackSchedule::digest() const { return payload_digest(Serialize()); }

AttackSchedule schedule_attacks(const Topology& t, std::uint64_t ticks,
                                const AttackRates& rates, std::uint64_t seed,
                                const ScheduleOptions& options) {
  check_rate(rates.tap, "tap");
  check_rate(rates.corrupt, "corrupt");
  check_rate(rates.sever, "sever");
  if (options.min_duration == 0 || options.min_duration > options.max_duration) {
    throw std::invalid_argument("attack duration range must satisfy 1 <= min <= max");
  }

  std::vector<double> weight(t.edge_count(), 1.0);
  if (options.criticality_weighted && t.edge_count() > 0) {
    double sum = 0.0;
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
      weight[e] = static_cast<double>(edge_criticality(t, t.edges()[e]));
      sum += weight[e];
    }
    if (sum > 0.0) {
      const double mean = sum / static_cast<double>(t.edge_count());
      for (double& w : weight) w /= mean;
    } else {
      std::fill(weight.begin(), weight.end(), 1.0);
    }
  }

  AttackSchedule schedule;
  schedule.seed = seed;
  Rng rng(seed);
  const std::pair<AttackKind, double> kinds[] = {{AttackKind::kTap, rates.tap},
                                                 {AttackKind::kCorrupt, rates.corrupt},
                                                 {AttackKind::kSever, rates.sever}};
  for (std::uint64_t tick = 0; tick < ticks; ++tick) {
    for (std::size_t e = 0; e < t.edge_count(); ++e) {
      for (const auto& [kind, rate] : kinds) {
        const double p = std::min(1.0, rate * weight[e]);
        if (!rng.bernoulli(p)) continue;
        const std::uint64_t duration =
            rng.between(options.min_duration, options.max_duration);
        schedule.events.push_back({kind, t.edges()[e], tick, duration});
      }
    }
  }
  return schedule;
}

TickAttacks::TickAttacks(const Topology& t, const AttackSchedule& schedule,
                         std::uint64_t tick, bool consistent_corruption)
    : topology_(&t),
      consistent_(consistent_corruption),
      sever_(t.edge_count(), false),
      tap_(t.edge_count(), false),
      corrupt_(t.edge_count(), nullptr) {
  for (const AttackEvent& ev : schedule.events) {
    if (ev.start_tick > tick) break;
    if (!ev.active_at(tick)) continue;
    const std::size_t idx = t.edge_index(ev.edge);
    switch (ev.kind) {
      case AttackKind::kSever: sever_[idx] = true; break;
      case AttackKind::kTap: tap_[idx] = true; break;
      case AttackKind::kCorrupt:
        if (corrupt_[idx] == nullptr) corrupt_[idx] = &ev;
        break;
    }
  }
}

HopVerdict TickAttacks::apply(const Edge& edge, Packet& copy) {
  const std::size_t idx = topology_->edge_index(edge);
  if (sever_[idx]) return HopVerdict::kDrop;
  if (tap_[idx]) ++tapped_;
  if (const AttackEvent* ev = corrupt_[idx]) {
    copy.payload = attacker_bytes(*ev, copy, copy.payload.size());
    if (consistent_) copy.digest = payload_digest(copy.payload);
    ++corrupted_;
  }
  return HopVerdict::kForward;
}

FaultHook TickAttacks::hook() {
  return [this](const Edge& edge, Packet& copy) { return apply(edge, copy); };
}

void apply_severs(Topology& t, const AttackSchedule& schedule, std::uint64_t tick) {
  for (std::size_t e = 0; e < t.edge_count(); ++e) t.set_alive_at(e, true);
  for (const AttackEvent& ev : schedule.events) {
    if (ev.start_tick > tick) break;
    if (ev.kind == AttackKind::kSever && ev.active_at(tick)) t.set_alive(ev.edge, false);
  }
}

}  // namespace nodal
