#pragma once

// Exact enumeration of the two-step spreading processes behind the proximity
// metrics, plus a seeded synthetic cascade generator for end-to-end tests.
//
// The reach oracles deliberately avoid the set-intersection machinery of
// proximity.hpp: they enumerate length-2 paths u -> z -> v directly via
// adjacency probes, so agreement between symmetrized_reach and the metric
// implementations is evidence, not tautology.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "proxnet/activity.hpp"
#include "proxnet/detail/rng.hpp"
#include "proxnet/graph.hpp"

namespace proxnet {

// The four spreading processes. Walk processes move one unit of content to a
// single random out-neighbor per step; broadcast processes replicate to all
// out-neighbors. Attention variants discount delivery by the receiver's
// in-degree (a node with many sources notices any one of them with
// probability 1/d_in).
enum class ProcessKind {
  RandomWalk,
  RandomWalkAttention,
  Broadcast,
  BroadcastAttention,
};

inline std::string_view to_string(ProcessKind p) {
  switch (p) {
    case ProcessKind::RandomWalk: return "random_walk";
    case ProcessKind::RandomWalkAttention: return "random_walk_attention";
    case ProcessKind::Broadcast: return "broadcast";
    case ProcessKind::BroadcastAttention: return "broadcast_attention";
  }
  throw std::invalid_argument("invalid ProcessKind");
}

inline std::optional<ProcessKind> process_from_string(std::string_view name) {
  if (name == "random_walk") return ProcessKind::RandomWalk;
  if (name == "random_walk_attention") return ProcessKind::RandomWalkAttention;
  if (name == "broadcast") return ProcessKind::Broadcast;
  if (name == "broadcast_attention") return ProcessKind::BroadcastAttention;
  return std::nullopt;
}

// Probability (broadcast: expected count) that content starting at u reaches
// v over some length-2 path u -> z -> v, summed exactly over all such paths:
//   random_walk            1 / (d_out(u) d_out(z))
//   random_walk_attention  1 / (d_out(u) d_in(z) d_out(z) d_in(v))
//   broadcast              1
//   broadcast_attention    1 / (d_in(z) d_in(v))
// Direct u -> v edges are ignored; only two-step transfer counts.
inline double two_step_reach(const DirectedGraph& g, NodeId u, NodeId v,
                             ProcessKind process) {
  if (u >= g.node_count() || v >= g.node_count()) {
    throw std::out_of_range("two_step_reach: node id out of range");
  }
  if (u == v) {
    throw std::invalid_argument("two_step_reach: u and v must be distinct");
  }
  double sum = 0.0;
  for (NodeId z : g.out_neighbors(u)) {
    if (!g.has_edge(z, v)) continue;
    switch (process) {
      case ProcessKind::RandomWalk:
        sum += 1.0 / (static_cast<double>(g.out_degree(u)) *
                      static_cast<double>(g.out_degree(z)));
        break;
      case ProcessKind::RandomWalkAttention:
        sum += 1.0 / (static_cast<double>(g.out_degree(u)) *
                      static_cast<double>(g.in_degree(z)) *
                      static_cast<double>(g.out_degree(z)) *
                      static_cast<double>(g.in_degree(v)));
        break;
      case ProcessKind::Broadcast:
        sum += 1.0;
        break;
      case ProcessKind::BroadcastAttention:
        sum += 1.0 / (static_cast<double>(g.in_degree(z)) *
                      static_cast<double>(g.in_degree(v)));
        break;
    }
  }
  return sum;
}

// ½ [reach(u -> v) + reach(v -> u)]. Equals the metric of the matching
// process family: random_walk -> CS, random_walk_attention -> CS_AL,
// broadcast -> NC, broadcast_attention -> NC_AL.
inline double symmetrized_reach(const DirectedGraph& g, NodeId u, NodeId v,
                                ProcessKind process) {
  return 0.5 * (two_step_reach(g, u, v, process) +
                two_step_reach(g, v, u, process));
}

struct CascadeOptions {
  std::size_t item_count = 1;
  ProcessKind process = ProcessKind::Broadcast;
  // Seeds per item, drawn uniformly without replacement — unless
  // `seed_nodes` is nonempty, in which case those exact nodes seed every
  // item and `seeds_per_item` is ignored.
  std::size_t seeds_per_item = 1;
  std::vector<NodeId> seed_nodes;
  double adoption_probability = 1.0;
  std::size_t max_hops = 6;  // propagation depth cap
  std::uint64_t rng_seed = 0;
};

// Simulates `item_count` independent cascades and returns them as an
// activity log (user label, item label "item1"..., time = hop number).
//
// Mechanics per item: seed nodes recommend at t=0. At each hop every node
// that adopted in the previous hop exposes targets (broadcast: all
// out-neighbors in ascending id order; walk: one uniformly random
// out-neighbor). The first exposure that *reaches* a node resolves it: it
// adopts (and will recommend next hop) with adoption_probability, or
// permanently declines. Under attention processes an exposure reaches its
// target only with probability 1/d_in(target); a failed attention draw does
// not resolve the target, which may still be reached by a later recommender.
//
// Each item consumes its own RNG stream derived from (rng_seed, item index),
// so a log is a pure function of (graph, options) and items could be
// generated in parallel without changing the output.
inline ActivityLog generate_cascades(const DirectedGraph& g,
                                     const CascadeOptions& opt) {
  if (opt.adoption_probability < 0.0 || opt.adoption_probability > 1.0) {
    throw std::invalid_argument(
        "generate_cascades: adoption_probability must be in [0, 1]");
  }
  if (g.node_count() == 0) {
    throw std::invalid_argument("generate_cascades: graph has no nodes");
  }
  std::vector<NodeId> fixed = opt.seed_nodes;
  if (!fixed.empty()) {
    std::sort(fixed.begin(), fixed.end());
    if (std::adjacent_find(fixed.begin(), fixed.end()) != fixed.end()) {
      throw std::invalid_argument("generate_cascades: duplicate seed node");
    }
    if (fixed.back() >= g.node_count()) {
      throw std::out_of_range("generate_cascades: seed node out of range");
    }
  } else if (opt.seeds_per_item == 0 || opt.seeds_per_item > g.node_count()) {
    throw std::invalid_argument(
        "generate_cascades: seeds_per_item must be in [1, node count]");
  }

  const bool walk = opt.process == ProcessKind::RandomWalk ||
                    opt.process == ProcessKind::RandomWalkAttention;
  const bool attention = opt.process == ProcessKind::RandomWalkAttention ||
                         opt.process == ProcessKind::BroadcastAttention;

  ActivityLog log;

  for (std::size_t item = 0; item < opt.item_count; ++item) {
    auto rng = detail::make_stream(opt.rng_seed, item);
    const std::string item_label = "item" + std::to_string(item + 1);

    std::vector<NodeId> seeds;
    if (!fixed.empty()) {
      seeds = fixed;
    } else {
      // Partial Fisher-Yates over a fresh identity permutation (cascades
      // must not depend on earlier items): the first seeds_per_item slots
      // become a uniform sample without replacement.
      std::vector<NodeId> ids(g.node_count());
      for (NodeId u = 0; u < g.node_count(); ++u) ids[u] = u;
      for (std::size_t i = 0; i + 1 < g.node_count() && i < opt.seeds_per_item;
           ++i) {
        const std::size_t j =
            i + detail::bounded(rng, g.node_count() - i);
        std::swap(ids[i], ids[j]);
      }
      seeds.assign(ids.begin(), ids.begin() + opt.seeds_per_item);
      std::sort(seeds.begin(), seeds.end());
    }

    std::vector<std::uint8_t> resolved(g.node_count(), 0);
    std::vector<NodeId> frontier;
    for (NodeId s : seeds) {
      resolved[s] = 1;
      log.add(g.label(s), item_label, 0);
      frontier.push_back(s);
    }

    for (std::size_t hop = 1; hop <= opt.max_hops && !frontier.empty();
         ++hop) {
      std::vector<NodeId> next;
      for (NodeId r : frontier) {
        std::vector<NodeId> targets;
        if (walk) {
          const std::size_t dout = g.out_degree(r);
          if (dout == 0) continue;
          targets.push_back(
              g.out_neighbors(r)[detail::bounded(rng, dout)]);
        } else {
          auto outs = g.out_neighbors(r);
          targets.assign(outs.begin(), outs.end());
        }
        for (NodeId z : targets) {
          if (resolved[z]) continue;
          if (attention) {
            const double p_notice =
                1.0 / static_cast<double>(g.in_degree(z));
            if (detail::unit_double(rng) >= p_notice) continue;
          }
          resolved[z] = 1;
          if (detail::unit_double(rng) < opt.adoption_probability) {
            log.add(g.label(z), item_label,
                    static_cast<std::int64_t>(hop));
            next.push_back(z);
          }
        }
      }
      std::sort(next.begin(), next.end());
      frontier = std::move(next);
    }
  }
  return log;
}

}  // namespace proxnet
