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

#ifndef NODAL_PROTOCOL_HPP_
#define NODAL_PROTOCOL_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nodal/digest.hpp"
#include "nodal/topology.hpp"

namespace nodal {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shared by an original transmission and its parallel duplicate; a
// retransmission keeps message_id and bumps attempt.
struct IdempotencyKey {
  std::uint64_t message_id = 0;
  std::uint32_t attempt = 0;

  friend bool operator==(const IdempotencyKey&, const IdempotencyKey&) = default;
  friend auto operator<=>(const IdempotencyKey&, const IdempotencyKey&) = default;
};

enum class CopyKind { kPrimary, kParallel };

struct Packet {
  IdempotencyKey key;
  NodeId src;
  NodeId dst;
  bool critical = false;
  Bytes payload;
  Digest digest;  // carried digest; the adversary may rewrite it
  CopyKind copy = CopyKind::kPrimary;
};

// Monotonic message id allocator, one per trial.
class MessageIdSource {
 public:
  explicit MessageIdSource(std::uint64_t first = 1) : next_(first) {}
  std::uint64_t next() { return next_++; }

 private:
  std::uint64_t next_;
};

Packet make_message(const NodeId& src, const NodeId& dst, Bytes payload,
                    bool critical, MessageIdSource& ids);

Packet duplicate_for_parallel(const Packet& p);

// Per-edge risk weights for the protection selector. Edges without an
// explicit weight use `default_risk`.
class RiskModel {
 public:
  explicit RiskModel(double default_risk = 1.0);

  void set(const Edge& e, double risk);
  double risk(const Edge& e) const;

 private:
  double default_risk_;
  std::map<Edge, double> overrides_;
};

double packet_risk(const Packet& p, const Path& primary_path, const RiskModel& rm);

struct Candidate {
  Packet packet;
  Path primary_path;
};

// Picks up to `budget` non-critical candidates with the highest path risk,
// ties broken by smaller message id. Since the objective is a plain sum of
// per-packet risks, the greedy choice is also the best subset of its size.
std::set<IdempotencyKey> select_protected_subset(const std::vector<Candidate>& candidates,
                                                 std::size_t budget,
                                                 const RiskModel& rm);

enum class Classification {
  kDeliveredClean,
  kDeliveredCorruptDetected,
  kDeliveredCorruptUndetected,
  kLost,
};

const char* to_string(Classification c);

enum class HopVerdict { kForward, kDrop };

// Called once per copy per traversed edge, in path order. May rewrite the
// copy's payload and carried digest, or drop it.
using FaultHook = std::function<HopVerdict(const Edge& edge, Packet& copy)>;

struct TransmissionOutcome {
  IdempotencyKey key;  // key of the final attempt
  int delivered_copies = 0;  // copies of the accepted payload held at the end
  int corrupted_copies = 0;  // mutated copies that arrived in the final attempt
  std::vector<Path> paths_used;  // every route, in send order
  Classification classification = Classification::kLost;
  std::uint32_t retransmissions = 0;

  std::uint32_t copies_sent = 0;
  std::uint32_t copies_dropped = 0;  // cut in flight or discarded for lack of route
  std::uint32_t degradations = 0;    // protected attempts sent as a single copy
  std::uint32_t dual_attempts = 0;
  std::uint32_t disjointness_violations = 0;
  bool primary_corrupted = false;  // primary copy mutated in some attempt
  bool primary_corrupted_dual = false;  // ...and that attempt carried two copies
  bool undetected_with_two_copies = false;  // must never be set
  std::vector<IdempotencyKey> attempt_keys;
};

// Sends `p` over `routing_view` with up to `max_retries` retransmissions in
// the same tick.
//
// Unprotected: one copy per attempt along shortest_path. Protected: a
// primary copy along the shortest path and a parallel copy along an
// edge-disjoint path; retransmissions prefer routes avoiding every edge
// used so far. The receiver checks each copy against its carried digest,
// cross-checks the pair, and after a conflict accepts a single copy only if
// it corroborates a digest already held.
TransmissionOutcome transmit(const Topology& routing_view, const Packet& p,
                             bool is_protected, std::uint32_t max_retries,
                             const FaultHook& fault_hook);

}  // namespace nodal

#endif  // NODAL_PROTOCOL_HPP_
