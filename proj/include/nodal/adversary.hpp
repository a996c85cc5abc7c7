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

#ifndef NODAL_ADVERSARY_HPP_
#define NODAL_ADVERSARY_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nodal/digest.hpp"
#include "nodal/protocol.hpp"
#include "nodal/topology.hpp"

namespace nodal {

enum class AttackKind { kTap, kCorrupt, kSever };

const char* to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

struct AttackEvent {
  AttackKind kind;
  Edge edge;
  std::uint64_t start_tick = 0;
  std::uint64_t duration_ticks = 1;

  bool active_at(std::uint64_t tick) const {
    return tick >= start_tick && tick - start_tick < duration_ticks;
  }

  // "KIND A-B start duration"
  std::string str() const;
  static AttackEvent Parse(std::string_view line);

  friend bool operator==(const AttackEvent&, const AttackEvent&) = default;
};

struct AttackSchedule {
  std::vector<AttackEvent> events;  // sorted by start_tick
  std::uint64_t seed = 0;

  std::string Serialize() const;
  static AttackSchedule Deserialize(std::string_view text);
  Digest digest() const;
};

struct AttackRates {
  double tap = 0.0;
  double corrupt = 0.0;
  double sever = 0.0;

  friend bool operator==(const AttackRates&, const AttackRates&) = default;
};

struct ScheduleOptions {
  std::uint64_t min_duration = 1;
  std::uint64_t max_duration = 5;
  // Scale each edge's rate by edge_criticality / mean criticality (clamped
  // to 1). Falls back to uniform when no edge is critical.
  bool criticality_weighted = false;
};

// One Bernoulli draw per (tick, edge, kind), ticks outermost, edges in
// canonical order, kinds in TAP, CORRUPT, SEVER order.
AttackSchedule schedule_attacks(const Topology& t, std::uint64_t ticks,
                                const AttackRates& rates, std::uint64_t seed,
                                const ScheduleOptions& options = {});

// Attacks in force during one tick, indexed by edge.
//
// Physical effects on copies:
//   SEVER   drops the copy.
//   TAP     counts an exposure, nothing else.
//   CORRUPT replaces the payload with attacker bytes and, unless the
//           attacker is payload-only, rewrites the carried digest to match.
class TickAttacks {
 public:
  TickAttacks(const Topology& t, const AttackSchedule& schedule,
              std::uint64_t tick, bool consistent_corruption = true);

  bool severed(std::size_t edge_idx) const { return sever_[edge_idx]; }

  // Applies the active attacks on `edge` to `copy`.
  HopVerdict apply(const Edge& edge, Packet& copy);

  FaultHook hook();

  std::uint64_t tapped_copies() const { return tapped_; }
  std::uint64_t corrupted_copies() const { return corrupted_; }

 private:
  const Topology* topology_;
  bool consistent_;
  std::vector<bool> sever_;
  std::vector<bool> tap_;
  std::vector<const AttackEvent*> corrupt_;  // first active CORRUPT per edge
  std::uint64_t tapped_ = 0;
  std::uint64_t corrupted_ = 0;
};

// Marks every edge with an active SEVER at `tick` dead in `t` and every other
// edge alive.
void apply_severs(Topology& t, const AttackSchedule& schedule, std::uint64_t tick);

}  // namespace nodal

#endif  // NODAL_ADVERSARY_HPP_
