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

#include "nodal/topology.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <sstream>

#include "nodal/rng.hpp"

namespace nodal {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Sum over connected components of s*(s-1), ignoring dead edges and the
// optional `skip` edge index.
std::uint64_t reachable_ordered_pairs(const Topology& t,
                                      std::size_t skip = kUnreached) {
  const std::size_t n = t.node_count();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack;
  std::uint64_t total = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::uint64_t size = 0;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      ++size;
      for (const auto& [y, e] : t.adjacency(x)) {
        if (e == skip || !t.alive_at(e) || seen[y]) continue;
        seen[y] = true;
        stack.push_back(y);
      }
    }
    total += size * (size - 1);
  }
  return total;
}

std::optional<Path> bfs_route(const Topology& t, const NodeId& src,
                              const NodeId& dst,
                              const std::vector<bool>& forbidden) {
  const std::size_t s = t.node_index(src);
  const std::size_t d = t.node_index(dst);
  if (s == d) throw TopologyError("source equals destination: " + src.str());

  std::vector<std::size_t> dist(t.node_count(), kUnreached);
  std::deque<std::size_t> queue{d};
  dist[d] = 0;
  while (!queue.empty() && dist[s] == kUnreached) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (const auto& [y, e] : t.adjacency(x)) {
      if (!t.alive_at(e) || forbidden[e] || dist[y] != kUnreached) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  if (dist[s] == kUnreached) return std::nullopt;

  // Walking down the distance field picking the smallest neighbor index
  // yields the lexicographically smallest minimum-hop sequence.
  Path path;
  std::size_t cur = s;
  path.hops.push_back(t.nodes()[cur]);
  while (cur != d) {
    for (const auto& [y, e] : t.adjacency(cur)) {
      if (t.alive_at(e) && !forbidden[e] && dist[y] + 1 == dist[cur]) {
        cur = y;
        break;
      }
    }
    path.hops.push_back(t.nodes()[cur]);
  }
  return path;
}

}  // namespace

NodeId::NodeId(Level level, std::uint32_t index) : level_(level), index_(index) {
  if (index == 0) throw std::invalid_argument("node index must be >= 1");
  switch (level) {
    case Level::kN:
    case Level::kU:
    case Level::kL:
    case Level::kO:
      break;
    default:
      throw std::invalid_argument("unknown node level");
  }
}

NodeId NodeId::Parse(std::string_view text) {
  text = trim(text);
  if (text.size() < 2) {
    throw std::invalid_argument("malformed node id: '" + std::string(text) + "'");
  }
  Level level;
  switch (text.front()) {
    case 'N': level = Level::kN; break;
    case 'U': level = Level::kU; break;
    case 'L': level = Level::kL; break;
    case 'O': level = Level::kO; break;
    default:
      throw std::invalid_argument("unknown node level in '" + std::string(text) + "'");
  }
  std::uint32_t index = 0;
  const char* first = text.data() + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, index);
  if (ec != std::errc() || ptr != last || index == 0 || *first == '0') {
    throw std::invalid_argument("malformed node index in '" + std::string(text) + "'");
  }
  return NodeId(level, index);
}

std::string NodeId::str() const {
  return std::string(1, static_cast<char>(level_)) + std::to_string(index_);
}

Edge::Edge(NodeId a, NodeId b) : a_(a), b_(b) {
  if (a == b) throw std::invalid_argument("self-loop edge on " + a.str());
  if (b_ < a_) std::swap(a_, b_);
}

Edge Edge::Parse(std::string_view text) {
  text = trim(text);
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw std::invalid_argument("malformed edge: '" + std::string(text) + "'");
  }
  return Edge(NodeId::Parse(text.substr(0, dash)),
              NodeId::Parse(text.substr(dash + 1)));
}

std::vector<Edge> Path::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
    out.emplace_back(hops[i], hops[i + 1]);
  }
  return out;
}

Topology::Topology(std::vector<NodeId> nodes, const std::vector<Edge>& edges)
    : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw TopologyError("duplicate node in topology");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    node_lookup_.emplace(nodes_[i].str(), i);
  }
  edges_ = edges;
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw TopologyError("duplicate edge in topology");
  }
  alive_.assign(edges_.size(), true);
  adjacency_.resize(nodes_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto ia = node_lookup_.find(edges_[e].a().str());
    const auto ib = node_lookup_.find(edges_[e].b().str());
    if (ia == node_lookup_.end() || ib == node_lookup_.end()) {
      throw UnknownNodeError("edge " + edges_[e].str() +
                             " has an endpoint outside the node set");
    }
    edge_lookup_.emplace(std::make_pair(ia->second, ib->second), e);
    adjacency_[ia->second].emplace_back(ib->second, e);
    adjacency_[ib->second].emplace_back(ia->second, e);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

bool Topology::contains(const NodeId& node) const {
  return node_lookup_.count(node.str()) != 0;
}

bool Topology::contains(const Edge& edge) const {
  const auto ia = node_lookup_.find(edge.a().str());
  const auto ib = node_lookup_.find(edge.b().str());
  if (ia == node_lookup_.end() || ib == node_lookup_.end()) return false;
  return edge_lookup_.count({ia->second, ib->second}) != 0;
}

std::size_t Topology::node_index(const NodeId& node) const {
  const auto it = node_lookup_.find(node.str());
  if (it == node_lookup_.end()) throw UnknownNodeError("unknown node " + node.str());
  return it->second;
}

std::size_t Topology::edge_index(const Edge& edge) const {
  const auto ia = node_lookup_.find(edge.a().str());
  const auto ib = node_lookup_.find(edge.b().str());
  if (ia != node_lookup_.end() && ib != node_lookup_.end()) {
    const auto it = edge_lookup_.find({ia->second, ib->second});
    if (it != edge_lookup_.end()) return it->second;
  }
  throw UnknownEdgeError("unknown edge " + edge.str());
}

bool Topology::is_alive(const Edge& edge) const {
  return alive_[edge_index(edge)];
}

std::size_t Topology::alive_edge_count() const {
  return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), true));
}

void Topology::set_alive(const Edge& edge, bool alive) {
  alive_[edge_index(edge)] = alive;
}

std::string Topology::Serialize() const {
  std::ostringstream out;
  out << "nodes: ";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i) out << ',';
    out << nodes_[i].str();
  }
  out << '\n';
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    out << edges_[e].str();
    if (!alive_[e]) out << " dead";
    out << '\n';
  }
  return out.str();
}

Topology Topology::Deserialize(std::string_view text) {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  std::vector<Edge> dead;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (!have_header) {
      constexpr std::string_view kHeader = "nodes:";
      if (line.substr(0, kHeader.size()) != kHeader) {
        throw TopologyError("topology text must start with 'nodes:'");
      }
      std::string_view list = trim(line.substr(kHeader.size()));
      while (!list.empty()) {
        const auto comma = list.find(',');
        nodes.push_back(NodeId::Parse(list.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
      }
      have_header = true;
      continue;
    }
    const auto space = line.find(' ');
    Edge edge = Edge::Parse(line.substr(0, space));
    edges.push_back(edge);
    if (space != std::string_view::npos) {
      if (trim(line.substr(space)) != "dead") {
        throw TopologyError("unexpected edge suffix in '" + std::string(line) + "'");
      }
      dead.push_back(edge);
    }
  }
  if (!have_header) throw TopologyError("missing 'nodes:' header");
  Topology t(std::move(nodes), edges);
  for (const Edge& e : dead) t.set_alive(e, false);
  return t;
}

Topology build_figure1(bool redundant) {
  const auto id = [](std::string_view s) { return NodeId::Parse(s); };
  const std::vector<std::string_view> chain = {"O1", "L1", "U2", "U1", "N1",
                                               "N2", "U3", "L3", "O4"};
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    nodes.push_back(id(chain[i]));
    if (i > 0) edges.emplace_back(id(chain[i - 1]), id(chain[i]));
  }
  if (redundant) {
    nodes.push_back(id("N3"));
    nodes.push_back(id("N4"));
    edges.emplace_back(id("U1"), id("N3"));
    edges.emplace_back(id("N3"), id("N4"));
    edges.emplace_back(id("N4"), id("U3"));
  }
  return Topology(std::move(nodes), edges);
}

Edge figure1_e1() { return Edge(NodeId(Level::kN, 1), NodeId(Level::kN, 2)); }

Topology generate_topology(std::uint32_t n_count, std::uint32_t u_count,
                           std::uint32_t l_count, std::uint32_t o_count,
                           double redundancy_factor, std::uint64_t seed) {
  if (n_count == 0 || u_count == 0 || l_count == 0 || o_count == 0) {
    throw std::invalid_argument("generate_topology: every level count must be >= 1");
  }
  if (!(redundancy_factor >= 0.0 && redundancy_factor <= 1.0)) {
    throw std::invalid_argument("generate_topology: redundancy_factor must be in [0,1]");
  }
  Rng rng(derive_seed(seed, 0x746f706fULL));
  std::vector<NodeId> nodes;
  std::set<Edge> edges;

  const auto add_level = [&](Level level, std::uint32_t count) {
    for (std::uint32_t i = 1; i <= count; ++i) nodes.emplace_back(level, i);
  };
  add_level(Level::kN, n_count);
  add_level(Level::kU, u_count);
  add_level(Level::kL, l_count);
  add_level(Level::kO, o_count);

  struct Tier {
    Level child;
    std::uint32_t child_count;
    Level parent;
    std::uint32_t parent_count;
  };
  const Tier tiers[] = {{Level::kO, o_count, Level::kL, l_count},
                        {Level::kL, l_count, Level::kU, u_count},
                        {Level::kU, u_count, Level::kN, n_count}};
  for (const Tier& tier : tiers) {
    for (std::uint32_t i = 0; i < tier.child_count; ++i) {
      const NodeId child(tier.child, i + 1);
      const std::uint32_t primary = (i % tier.parent_count) + 1;
      edges.emplace(child, NodeId(tier.parent, primary));
      for (std::uint32_t p = 1; p <= tier.parent_count; ++p) {
        if (p == primary) continue;
        if (rng.bernoulli(redundancy_factor)) {
          edges.emplace(child, NodeId(tier.parent, p));
        }
      }
    }
  }

  if (n_count == 2) {
    edges.emplace(NodeId(Level::kN, 1), NodeId(Level::kN, 2));
  } else if (n_count >= 3) {
    for (std::uint32_t i = 1; i <= n_count; ++i) {
      edges.emplace(NodeId(Level::kN, i), NodeId(Level::kN, i % n_count + 1));
    }
  }
  for (std::uint32_t i = 1; i <= n_count; ++i) {
    for (std::uint32_t j = i + 1; j <= n_count; ++j) {
      const Edge chord(NodeId(Level::kN, i), NodeId(Level::kN, j));
      if (edges.count(chord)) continue;
      if (rng.bernoulli(redundancy_factor)) edges.insert(chord);
    }
  }
  return Topology(std::move(nodes), std::vector<Edge>(edges.begin(), edges.end()));
}

std::optional<Path> shortest_path(const Topology& t, const NodeId& src,
                                  const NodeId& dst) {
  return bfs_route(t, src, dst, std::vector<bool>(t.edge_count(), false));
}

std::optional<Path> disjoint_path(const Topology& t, const NodeId& src,
                                  const NodeId& dst,
                                  const std::set<Edge>& forbidden) {
  std::vector<bool> mask(t.edge_count(), false);
  for (const Edge& e : forbidden) {
    if (t.contains(e)) mask[t.edge_index(e)] = true;
  }
  return bfs_route(t, src, dst, mask);
}

std::uint64_t edge_criticality(const Topology& t, const Edge& e) {
  const std::size_t idx = t.edge_index(e);
  if (!t.alive_at(idx)) return 0;
  return reachable_ordered_pairs(t) - reachable_ordered_pairs(t, idx);
}

double connectivity(const Topology& t) {
  const auto n = static_cast<std::uint64_t>(t.node_count());
  if (n < 2) throw TopologyError("connectivity needs at least 2 nodes");
  return static_cast<double>(reachable_ordered_pairs(t)) /
         static_cast<double>(n * (n - 1));
}

Topology sever_edge(Topology t, const Edge& e) {
  t.set_alive(e, false);
  return t;
}

Topology restore_edge(Topology t, const Edge& e) {
  t.set_alive(e, true);
  return t;
}

bool is_valid_path(const Topology& t, const Path& p) {
  if (p.hops.size() < 2) return false;
  std::set<std::string> seen;
  for (const NodeId& hop : p.hops) {
    if (!t.contains(hop) || !seen.insert(hop.str()).second) return false;
  }
  for (std::size_t i = 0; i + 1 < p.hops.size(); ++i) {
    const Edge e(p.hops[i], p.hops[i + 1]);
    if (!t.contains(e) || !t.is_alive(e)) return false;
  }
  return true;
}

std::vector<TraceHop> trace_route(const Topology& t, const Path& p) {
  if (!is_valid_path(t, p)) {
    std::string rendered;
    for (const NodeId& hop : p.hops) {
      if (!rendered.empty()) rendered += "->";
      rendered += hop.str();
    }
    throw InvalidPathError("path is not valid in topology: " + rendered);
  }
  std::vector<TraceHop> trace;
  trace.reserve(p.hops.size());
  for (std::size_t i = 0; i < p.hops.size(); ++i) trace.push_back({p.hops[i], i});
  return trace;
}

std::string render_trace(const std::vector<TraceHop>& trace) {
  std::string out;
  for (const TraceHop& hop : trace) {
    if (!out.empty()) out += "->";
    out += hop.node.str();
  }
  return out;
}

}  // namespace nodal
