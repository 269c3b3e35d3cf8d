#pragma once

// Directed graphs with string node labels, plus bipartite attendance data
// and its one-mode projection. Edges always point in the direction of
// information flow (u -> v means content moves from u to v).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace proxnet {

using NodeId = std::uint32_t;

// How an external edge list should be read. `Flows` lines already point in
// the flow direction; `Follows` lines are "a follows b", i.e. content flows
// b -> a, so each edge is reversed on ingest.
enum class EdgeSemantics { Flows, Follows };

enum class Direction { Out, In, Both };

class GraphBuilder;

// Immutable directed graph. Out- and in-adjacency lists are kept sorted and
// mutually transposed; neither duplicates nor self-loops are representable.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  std::size_t node_count() const { return out_adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  // Sorted neighbor views. Out-neighbors of u receive flow from u;
  // in-neighbors of u send flow to u.
  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {adj(out_adj_, u).data(), adj(out_adj_, u).size()};
  }
  std::span<const NodeId> in_neighbors(NodeId u) const {
    return {adj(in_adj_, u).data(), adj(in_adj_, u).size()};
  }

  // Sorted neighborhood in the requested direction; `Both` is the union of
  // the out- and in-neighborhoods (each node at most once).
  std::vector<NodeId> neighborhood(NodeId u, Direction dir) const {
    switch (dir) {
      case Direction::Out: {
        auto s = out_neighbors(u);
        return {s.begin(), s.end()};
      }
      case Direction::In: {
        auto s = in_neighbors(u);
        return {s.begin(), s.end()};
      }
      case Direction::Both: {
        std::vector<NodeId> both;
        auto out = out_neighbors(u);
        auto in = in_neighbors(u);
        both.reserve(out.size() + in.size());
        std::set_union(out.begin(), out.end(), in.begin(), in.end(),
                       std::back_inserter(both));
        return both;
      }
    }
    throw std::invalid_argument("invalid Direction");
  }

  std::size_t out_degree(NodeId u) const { return adj(out_adj_, u).size(); }
  std::size_t in_degree(NodeId u) const { return adj(in_adj_, u).size(); }

  // Total degree d(u) = d_out(u) + d_in(u); reciprocated edges count twice.
  std::size_t total_degree(NodeId u) const {
    return out_degree(u) + in_degree(u);
  }

  // Number of distinct neighbors in either direction.
  std::size_t undirected_degree(NodeId u) const {
    return neighborhood(u, Direction::Both).size();
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto s = out_neighbors(u);
    check(v);
    return std::binary_search(s.begin(), s.end(), v);
  }

  // True when every edge is reciprocated (the graph equals its transpose).
  bool symmetric() const { return symmetric_; }

  const std::string& label(NodeId u) const {
    check(u);
    return labels_[u];
  }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // All directed edges in (source, target) id order.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < out_adj_.size(); ++u) {
      for (NodeId v : out_adj_[u]) out.emplace_back(u, v);
    }
    return out;
  }

  // Unordered pairs {u, v}, u < v, joined by an edge in either direction,
  // in ascending (u, v) order.
  std::vector<std::pair<NodeId, NodeId>> linked_pairs() const {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId u = 0; u < out_adj_.size(); ++u) {
      for (NodeId v : out_adj_[u]) {
        pairs.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
  }

 private:
  friend class GraphBuilder;

  void check(NodeId u) const {
    if (u >= out_adj_.size()) {
      throw std::out_of_range("node id " + std::to_string(u) +
                              " out of range (node count " +
                              std::to_string(out_adj_.size()) + ")");
    }
  }

  const std::vector<NodeId>& adj(const std::vector<std::vector<NodeId>>& a,
                                 NodeId u) const {
    check(u);
    return a[u];
  }

  std::vector<std::vector<NodeId>> out_adj_;
  std::vector<std::vector<NodeId>> in_adj_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::size_t edge_count_ = 0;
  bool symmetric_ = true;
};

// Incremental construction; `build()` finalizes into a DirectedGraph.
// Duplicate edges and self-loops are dropped silently and counted.
class GraphBuilder {
 public:
  GraphBuilder() = default;

  // Pre-creates `node_count` nodes labeled "0".."node_count-1".
  explicit GraphBuilder(std::size_t node_count) {
    for (std::size_t i = 0; i < node_count; ++i) {
      add_node(std::to_string(i));
    }
  }

  // Interns `label`, returning its id (existing id if already present).
  NodeId add_node(std::string_view label) {
    auto [it, inserted] =
        index_.try_emplace(std::string(label),
                           static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.push_back(it->first);
    return it->second;
  }

  // Edge in flow direction, by label.
  void add_edge(std::string_view src, std::string_view dst) {
    add_edge(add_node(src), add_node(dst));
  }

  // Edge in flow direction, by id (ids must already exist).
  void add_edge(NodeId src, NodeId dst) {
    if (src >= labels_.size() || dst >= labels_.size()) {
      throw std::out_of_range("GraphBuilder: edge endpoint id out of range");
    }
    if (src == dst) {
      ++dropped_;
      return;
    }
    pending_.emplace_back(src, dst);
  }

  // Number of self-loops and duplicate edges discarded. Duplicates are only
  // detected during build(), so call this afterwards for the full count.
  std::size_t dropped_edges() const { return dropped_; }

  DirectedGraph build() {
    std::sort(pending_.begin(), pending_.end());
    auto last = std::unique(pending_.begin(), pending_.end());
    dropped_ += static_cast<std::size_t>(pending_.end() - last);
    pending_.erase(last, pending_.end());

    DirectedGraph g;
    g.labels_ = labels_;
    g.out_adj_.resize(labels_.size());
    g.in_adj_.resize(labels_.size());
    for (NodeId u = 0; u < labels_.size(); ++u) g.index_[labels_[u]] = u;
    for (auto [u, v] : pending_) {
      g.out_adj_[u].push_back(v);
      g.in_adj_[v].push_back(u);
    }
    for (auto& nbrs : g.in_adj_) std::sort(nbrs.begin(), nbrs.end());
    g.edge_count_ = pending_.size();
    g.symmetric_ = true;
    for (auto [u, v] : pending_) {
      if (!std::binary_search(g.out_adj_[v].begin(), g.out_adj_[v].end(), u)) {
        g.symmetric_ = false;
        break;
      }
    }
    return g;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::pair<NodeId, NodeId>> pending_;
  std::size_t dropped_ = 0;
};

struct LabeledEdge {
  std::string src;
  std::string dst;
};

struct GraphBuildResult {
  DirectedGraph graph;
  std::size_t dropped_edges = 0;  // self-loops + duplicates
};

// Builds a graph from labeled edges. Node ids follow first appearance in
// the (already semantics-adjusted) edge stream. Under `Follows`, the line
// (a, b) means "a follows b" and is stored as the flow edge b -> a.
inline GraphBuildResult build_graph(std::span<const LabeledEdge> edges,
                                    EdgeSemantics semantics) {
  GraphBuilder b;
  for (const auto& e : edges) {
    if (semantics == EdgeSemantics::Flows) {
      b.add_edge(e.src, e.dst);
    } else {
      b.add_edge(e.dst, e.src);
    }
  }
  GraphBuildResult r;
  r.graph = b.build();
  r.dropped_edges = b.dropped_edges();
  return r;
}

// Actor-by-event 0/1 attendance table.
class BipartiteAttendance {
 public:
  BipartiteAttendance(std::vector<std::string> actors,
                      std::vector<std::string> events,
                      std::vector<std::vector<std::uint8_t>> attended)
      : actors_(std::move(actors)),
        events_(std::move(events)),
        attended_(std::move(attended)) {
    if (attended_.size() != actors_.size()) {
      throw std::invalid_argument("attendance row count != actor count");
    }
    for (const auto& row : attended_) {
      if (row.size() != events_.size()) {
        throw std::invalid_argument("attendance row width != event count");
      }
    }
  }

  std::size_t actor_count() const { return actors_.size(); }
  std::size_t event_count() const { return events_.size(); }

  bool attended(std::size_t actor, std::size_t event) const {
    if (actor >= actors_.size() || event >= events_.size()) {
      throw std::out_of_range("attendance index out of range");
    }
    return attended_[actor][event] != 0;
  }

  const std::vector<std::string>& actors() const { return actors_; }
  const std::vector<std::string>& events() const { return events_; }

  // Actors attending event `e`, ascending.
  std::vector<std::size_t> attendees(std::size_t e) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < actors_.size(); ++a) {
      if (attended(a, e)) out.push_back(a);
    }
    return out;
  }

 private:
  std::vector<std::string> actors_;
  std::vector<std::string> events_;
  std::vector<std::vector<std::uint8_t>> attended_;
};

// One-mode projection onto actors over a subset of events: actors u != v are
// joined by the reciprocal edge pair u <-> v iff they co-attended at least
// one selected event. Every actor becomes a node, co-attending or not, so
// the result is a symmetric digraph on actor_count() nodes.
inline DirectedGraph project_attendance(const BipartiteAttendance& data,
                                        std::span<const std::size_t> events) {
  GraphBuilder b;
  for (const auto& name : data.actors()) b.add_node(name);
  for (std::size_t e : events) {
    if (e >= data.event_count()) {
      throw std::out_of_range("event index out of range");
    }
    auto who = data.attendees(e);
    for (std::size_t i = 0; i < who.size(); ++i) {
      for (std::size_t j = i + 1; j < who.size(); ++j) {
        b.add_edge(static_cast<NodeId>(who[i]), static_cast<NodeId>(who[j]));
        b.add_edge(static_cast<NodeId>(who[j]), static_cast<NodeId>(who[i]));
      }
    }
  }
  return b.build();
}

// Projection over all events.
inline DirectedGraph project_attendance(const BipartiteAttendance& data) {
  std::vector<std::size_t> all(data.event_count());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
  return project_attendance(data, all);
}

}  // namespace proxnet
