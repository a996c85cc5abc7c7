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

#include "nodal/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace nodal {

Packet make_message(const NodeId& src, const NodeId& dst, Bytes payload,
                    bool critical, MessageIdSource& ids) {
  if (src == dst) {
    throw ProtocolError("message source equals destination: " + src.str());
  }
  Packet p{.key = {ids.next(), 0},
           .src = src,
           .dst = dst,
           .critical = critical,
           .payload = std::move(payload),
           .digest = {},
           .copy = CopyKind::kPrimary};
  p.digest = payload_digest(p.payload);
  return p;
}

Packet duplicate_for_parallel(const Packet& p) {
  if (p.copy != CopyKind::kPrimary) {
    throw ProtocolError("only a primary copy can be duplicated");
  }
  Packet dup = p;
  dup.copy = CopyKind::kParallel;
  return dup;
}

RiskModel::RiskModel(double default_risk) : default_risk_(default_risk) {
  if (!std::isfinite(default_risk) || default_risk < 0.0) {
    throw std::invalid_argument("risk weights must be finite and >= 0");
  }
}

void RiskModel::set(const Edge& e, double risk) {
  if (!std::isfinite(risk) || risk < 0.0) {
    throw std::invalid_argument("risk weights must be finite and >= 0");
  }
  overrides_[e] = risk;
}

double RiskModel::risk(const Edge& e) const {
  const auto it = overrides_.find(e);
  return it == overrides_.end() ? default_risk_ : it->second;
}

double packet_risk(const Packet& /*p*/, const Path& primary_path,
                   const RiskModel& rm) {
  double total = 0.0;
  for (const Edge& e : primary_path.edges()) total += rm.risk(e);
  return total;
}

std::set<IdempotencyKey> select_protected_subset(
    const std::vector<Candidate>& candidates, std::size_t budget,
    const RiskModel& rm) {
  std::vector<std::pair<double, IdempotencyKey>> scored;
  scored.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    if (c.packet.critical) {
      throw ProtocolError("critical packets are always duplicated and cannot be budgeted");
    }
    scored.emplace_back(packet_risk(c.packet, c.primary_path, rm), c.packet.key);
  }
  const std::size_t take = std::min(budget, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), [](const auto& lhs, const auto& rhs) {
                      if (lhs.first != rhs.first) return lhs.first > rhs.first;
                      return lhs.second.message_id < rhs.second.message_id;
                    });
  std::set<IdempotencyKey> selected;
  for (std::size_t i = 0; i < take; ++i) selected.insert(scored[i].second);
  return selected;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::kDeliveredClean: return "DELIVERED_CLEAN";
    case Classification::kDeliveredCorruptDetected: return "DELIVERED_CORRUPT_DETECTED";
    case Classification::kDeliveredCorruptUndetected: return "DELIVERED_CORRUPT_UNDETECTED";
    case Classification::kLost: return "LOST";
  }
  return "?";
}

namespace {

struct Arrival {
  Packet copy;
  bool mutated = false;
};

// Runs one copy along its route. Returns the arrived copy or nothing when
// the hook drops it.
std::optional<Arrival> carry(const Path& route, Packet copy, const FaultHook& hook) {
  const Bytes original = copy.payload;
  for (const Edge& e : route.edges()) {
    if (hook && hook(e, copy) == HopVerdict::kDrop) return std::nullopt;
  }
  const bool mutated = copy.payload != original;
  return Arrival{std::move(copy), mutated};
}

std::set<Edge> edge_set(const Path& p) {
  const auto edges = p.edges();
  return {edges.begin(), edges.end()};
}

}  // namespace

TransmissionOutcome transmit(const Topology& routing_view, const Packet& p,
                             bool is_protected, std::uint32_t max_retries,
                             const FaultHook& fault_hook) {
  if (p.copy != CopyKind::kPrimary) {
    throw ProtocolError("transmit expects a primary copy");
  }
  // Reject unknown endpoints up front.
  routing_view.node_index(p.src);
  routing_view.node_index(p.dst);

  TransmissionOutcome out;
  const Digest original_digest = p.digest;
  const Bytes& original_payload = p.payload;

  std::set<Edge> used;
  std::set<Digest> held;  // verified digests received so far
  bool conflict_seen = false;
  bool corruption_observed = false;
  bool clean_received = false;

  for (std::uint32_t attempt = 0; attempt <= max_retries; ++attempt) {
    if (attempt > 0) ++out.retransmissions;
    Packet primary = p;
    primary.key.attempt = attempt;
    out.key = primary.key;
    out.attempt_keys.push_back(primary.key);

    std::optional<Path> primary_route;
    if (is_protected && attempt > 0) {
      primary_route = disjoint_path(routing_view, p.src, p.dst, used);
    }
    if (!primary_route) primary_route = shortest_path(routing_view, p.src, p.dst);
    if (!primary_route) {
      // No route in the sender's view: the copy is discarded at the source.
      ++out.copies_sent;
      ++out.copies_dropped;
      out.corrupted_copies = 0;
      continue;
    }

    std::optional<Path> parallel_route;
    if (is_protected) {
      std::set<Edge> forbidden = edge_set(*primary_route);
      if (attempt > 0) {
        std::set<Edge> with_used = forbidden;
        with_used.insert(used.begin(), used.end());
        parallel_route = disjoint_path(routing_view, p.src, p.dst, with_used);
      }
      if (!parallel_route) {
        parallel_route = disjoint_path(routing_view, p.src, p.dst, forbidden);
      }
      if (!parallel_route) {
        ++out.degradations;
      } else {
        ++out.dual_attempts;
        for (const Edge& e : parallel_route->edges()) {
          if (forbidden.count(e)) ++out.disjointness_violations;
        }
      }
    }

    std::vector<std::pair<Path, Packet>> sends;
    sends.emplace_back(*primary_route, primary);
    if (parallel_route) sends.emplace_back(*parallel_route, duplicate_for_parallel(primary));

    std::vector<Arrival> arrivals;
    for (auto& [route, copy] : sends) {
      const auto edges = route.edges();
      used.insert(edges.begin(), edges.end());
      out.paths_used.push_back(route);
      ++out.copies_sent;
      const bool is_primary = copy.copy == CopyKind::kPrimary;
      auto arrived = carry(route, std::move(copy), fault_hook);
      if (!arrived) {
        ++out.copies_dropped;
        continue;
      }
      if (is_primary && arrived->mutated && !out.primary_corrupted) {
        out.primary_corrupted = true;
        out.primary_corrupted_dual = sends.size() == 2;
      }
      arrivals.push_back(std::move(*arrived));
    }
    out.corrupted_copies = static_cast<int>(
        std::count_if(arrivals.begin(), arrivals.end(),
                      [](const Arrival& a) { return a.mutated; }));

    // Receiver: drop copies whose payload no longer matches the carried digest.
    std::vector<const Arrival*> verified;
    for (const Arrival& a : arrivals) {
      if (payload_digest(a.copy.payload) == a.copy.digest) {
        verified.push_back(&a);
      } else {
        corruption_observed = true;
      }
    }
    for (const Arrival* a : verified) {
      if (!a->mutated) clean_received = true;
    }
    if (verified.empty()) continue;  // loss or failed self-check: retry

    const Digest& first = verified.front()->copy.digest;
    const bool pair_agrees =
        verified.size() == 2 && verified[1]->copy.digest == first;
    if (verified.size() == 2 && !pair_agrees) {
      conflict_seen = true;
      corruption_observed = true;
      held.insert(first);
      held.insert(verified[1]->copy.digest);
      continue;
    }
    if (!pair_agrees && conflict_seen && held.count(first) == 0) {
      // A lone copy after a conflict must corroborate something already held.
      held.insert(first);
      continue;
    }

    const Arrival& accepted = *verified.front();
    out.delivered_copies = static_cast<int>(verified.size());
    if (accepted.copy.payload == original_payload &&
        accepted.copy.digest == original_digest) {
      out.classification = corruption_observed
                               ? Classification::kDeliveredCorruptDetected
                               : Classification::kDeliveredClean;
    } else {
      out.classification = Classification::kDeliveredCorruptUndetected;
      if (verified.size() == 2 || conflict_seen) out.undetected_with_two_copies = true;
    }
    return out;
  }

  // Retries exhausted without an accepted copy.
  if (corruption_observed && clean_received) {
    out.classification = Classification::kDeliveredCorruptDetected;
    out.delivered_copies = 1;
  } else {
    out.classification = Classification::kLost;
    out.delivered_copies = 0;
  }
  return out;
}

}  // namespace nodal
