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

#ifndef NODAL_TOPOLOGY_HPP_
#define NODAL_TOPOLOGY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nodal {

// Hierarchy level of a node: Nation, Upper, Lower, Outer.
enum class Level : char { kN = 'N', kU = 'U', kL = 'L', kO = 'O' };

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNodeError : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

class UnknownEdgeError : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

class InvalidPathError : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

// A node is identified by its level letter and a 1-based index ("N1", "O4").
// Ordering is lexicographic on the rendered form, which is the order used
// everywhere for deterministic tie-breaking.
class NodeId {
 public:
  NodeId(Level level, std::uint32_t index);

  static NodeId Parse(std::string_view text);

  Level level() const { return level_; }
  std::uint32_t index() const { return index_; }
  std::string str() const;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend bool operator<(const NodeId& lhs, const NodeId& rhs) {
    return lhs.str() < rhs.str();
  }

 private:
  Level level_;
  std::uint32_t index_;
};

// Undirected link. Endpoints are stored canonically (smaller rendered id
// first), so Edge(a, b) == Edge(b, a).
class Edge {
 public:
  Edge(NodeId a, NodeId b);

  // Parses "A-B".
  static Edge Parse(std::string_view text);

  const NodeId& a() const { return a_; }
  const NodeId& b() const { return b_; }
  std::string str() const { return a_.str() + "-" + b_.str(); }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend bool operator<(const Edge& lhs, const Edge& rhs) {
    if (!(lhs.a_ == rhs.a_)) return lhs.a_ < rhs.a_;
    return lhs.b_ < rhs.b_;
  }

 private:
  NodeId a_;
  NodeId b_;
};

// Simple path, source first.
struct Path {
  std::vector<NodeId> hops;

  std::size_t edge_count() const { return hops.empty() ? 0 : hops.size() - 1; }
  std::vector<Edge> edges() const;

  friend bool operator==(const Path&, const Path&) = default;
};

struct TraceHop {
  NodeId node;
  std::size_t ordinal;
};

// Leveled undirected graph with per-edge alive flags.
//
// Node and edge indices are dense and sorted by rendered id, so an index
// comparison is a lexicographic comparison. Copies are cheap enough that
// trial executors keep private copies and mutate only those.
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<NodeId> nodes, const std::vector<Edge>& edges);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(const NodeId& node) const;
  bool contains(const Edge& edge) const;
  bool is_alive(const Edge& edge) const;
  std::size_t alive_edge_count() const;

  // Dense index accessors; throw UnknownNodeError / UnknownEdgeError.
  std::size_t node_index(const NodeId& node) const;
  std::size_t edge_index(const Edge& edge) const;

  bool alive_at(std::size_t edge_idx) const { return alive_[edge_idx]; }
  void set_alive(const Edge& edge, bool alive);
  void set_alive_at(std::size_t edge_idx, bool alive) { alive_[edge_idx] = alive; }

  // (neighbor node index, edge index), sorted by neighbor index.
  const std::vector<std::pair<std::size_t, std::size_t>>& adjacency(
      std::size_t node_idx) const {
    return adjacency_[node_idx];
  }

  // Plain-text adjacency list: "nodes: A,B,..." then one "A-B" per line.
  // Severed edges are written with a trailing " dead".
  std::string Serialize() const;
  static Topology Deserialize(std::string_view text);

  friend bool operator==(const Topology& lhs, const Topology& rhs) {
    return lhs.nodes_ == rhs.nodes_ && lhs.edges_ == rhs.edges_ &&
           lhs.alive_ == rhs.alive_;
  }

 private:
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::vector<bool> alive_;
  std::map<std::string, std::size_t> node_lookup_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_lookup_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
};

// The O1..O4 chain of the nodal framework. With `redundant`, adds N3 and N4
// and the edges U1-N3, N3-N4, N4-U3 forming a second nation-level route.
Topology build_figure1(bool redundant);

// The N1-N2 nation cable of the framework.
Edge figure1_e1();

// Leveled graph: O(i) -> L((i mod l)+1), L -> U, U -> N with 0-based child
// position i; N nodes form a ring (single edge when n == 2). Each candidate
// extra link (child to a non-primary parent, or a non-ring N pair) is added
// independently with probability `redundancy_factor`.
Topology generate_topology(std::uint32_t n_count, std::uint32_t u_count,
                           std::uint32_t l_count, std::uint32_t o_count,
                           double redundancy_factor, std::uint64_t seed);

// Minimum-hop path over alive edges; lexicographically smallest hop sequence
// among ties. Empty optional when unreachable.
std::optional<Path> shortest_path(const Topology& t, const NodeId& src,
                                  const NodeId& dst);

// As shortest_path, never traversing an edge in `forbidden`.
std::optional<Path> disjoint_path(const Topology& t, const NodeId& src,
                                  const NodeId& dst,
                                  const std::set<Edge>& forbidden);

// Ordered pairs that are reachable in `t` but not once `e` is severed.
std::uint64_t edge_criticality(const Topology& t, const Edge& e);

// Ordered reachable pairs over alive edges divided by n(n-1).
double connectivity(const Topology& t);

Topology sever_edge(Topology t, const Edge& e);
Topology restore_edge(Topology t, const Edge& e);

// Throws InvalidPathError unless every hop is joined by an alive edge and
// the path is simple.
std::vector<TraceHop> trace_route(const Topology& t, const Path& p);
std::string render_trace(const std::vector<TraceHop>& trace);

// Validity check without throwing.
bool is_valid_path(const Topology& t, const Path& p);

}  // namespace nodal

#endif  // NODAL_TOPOLOGY_HPP_
