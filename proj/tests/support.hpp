#pragma once

// Shared fixtures and generators for the test suites.

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <utility>

#include "proxnet/detail/rng.hpp"
#include "proxnet/graph.hpp"

namespace testsupport {

inline proxnet::DirectedGraph make_graph(
    std::initializer_list<std::pair<std::string_view, std::string_view>>
        edges) {
  proxnet::GraphBuilder b;
  for (const auto& [src, dst] : edges) b.add_edge(src, dst);
  return b.build();
}

// Four-cycle u -> z -> v -> zp -> u. Every pair score is hand-checkable:
// {u, v} has exactly the mediators z (forward) and zp (reverse), all degrees
// are 1, and none of the four linked pairs has any mediator at all.
inline proxnet::DirectedGraph g1() {
  return make_graph({{"u", "z"}, {"z", "v"}, {"v", "zp"}, {"zp", "u"}});
}

// Fan-in/fan-out hub: u -> z, x -> z, z -> v, z -> w. The pair {u, v} has
// the single forward mediator z with d_in(z) = d_out(z) = 2 and no reverse
// mediator.
inline proxnet::DirectedGraph g2() {
  return make_graph({{"u", "z"}, {"x", "z"}, {"z", "v"}, {"z", "w"}});
}

// Seeded G(n, p) digraph over nodes "0".."n-1": each ordered pair u != v
// carries an edge independently with probability p.
inline proxnet::DirectedGraph random_digraph(std::size_t n, double p,
                                             std::uint64_t seed) {
  auto rng = proxnet::detail::make_stream(seed, 0xD19'74F);
  proxnet::GraphBuilder b(n);
  for (proxnet::NodeId u = 0; u < n; ++u) {
    for (proxnet::NodeId v = 0; v < n; ++v) {
      if (u != v && proxnet::detail::unit_double(rng) < p) b.add_edge(u, v);
    }
  }
  return b.build();
}

// Seeded symmetric digraph: each unordered pair gets both directions with
// probability p.
inline proxnet::DirectedGraph random_symmetric_digraph(std::size_t n, double p,
                                                       std::uint64_t seed) {
  auto rng = proxnet::detail::make_stream(seed, 0x5EED'CAFE);
  proxnet::GraphBuilder b(n);
  for (proxnet::NodeId u = 0; u < n; ++u) {
    for (proxnet::NodeId v = u + 1; v < n; ++v) {
      if (proxnet::detail::unit_double(rng) < p) {
        b.add_edge(u, v);
        b.add_edge(v, u);
      }
    }
  }
  return b.build();
}

}  // namespace testsupport
