#pragma once

// Structural proximity metrics for directed graphs.
//
// All metrics score an unordered pair {u, v} by combining the two directed
// mediator sets
//
//   forward(u, v) = out(u) ∩ in(v)   (two-step paths u -> z -> v)
//   forward(v, u) = out(v) ∩ in(u)   (two-step paths v -> z -> u)
//
// as score(u, v) = [term(u, v) + term(v, u)] / 2, which makes every metric
// symmetric by construction. On a symmetric digraph both mediator sets
// collapse to the common-neighbor set of the underlying undirected graph.

#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "proxnet/graph.hpp"

namespace proxnet {

// `Uniform` is not a graph metric: it is the constant-weight baseline used
// by the activity predictor. Functions that score graph pairs reject it.
enum class Metric { CN, JC, AA, CS, CS_AL, NC, NC_AL, Uniform };

inline constexpr std::array<Metric, 7> kGraphMetrics = {
    Metric::CN, Metric::JC, Metric::AA,    Metric::CS,
    Metric::CS_AL, Metric::NC, Metric::NC_AL};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::CN: return "CN";
    case Metric::JC: return "JC";
    case Metric::AA: return "AA";
    case Metric::CS: return "CS";
    case Metric::CS_AL: return "CS_AL";
    case Metric::NC: return "NC";
    case Metric::NC_AL: return "NC_AL";
    case Metric::Uniform: return "Uniform";
  }
  throw std::invalid_argument("invalid Metric");
}

// Case-insensitive parse of the names above; nullopt when unrecognized.
inline std::optional<Metric> metric_from_string(std::string_view name) {
  std::string up;
  up.reserve(name.size());
  for (char c : name) up.push_back(static_cast<char>(std::toupper(c)));
  if (up == "CN") return Metric::CN;
  if (up == "JC") return Metric::JC;
  if (up == "AA") return Metric::AA;
  if (up == "CS") return Metric::CS;
  if (up == "CS_AL") return Metric::CS_AL;
  if (up == "NC") return Metric::NC;
  if (up == "NC_AL") return Metric::NC_AL;
  if (up == "UNIFORM") return Metric::Uniform;
  return std::nullopt;
}

// Directed mediator sets for the pair (u, v), each sorted ascending.
struct CommonNeighborSets {
  std::vector<NodeId> forward;  // out(u) ∩ in(v)
  std::vector<NodeId> reverse;  // in(u) ∩ out(v)
};

namespace detail {

inline std::vector<NodeId> sorted_intersection(std::span<const NodeId> a,
                                               std::span<const NodeId> b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline void check_pair(const DirectedGraph& g, NodeId u, NodeId v) {
  if (u >= g.node_count() || v >= g.node_count()) {
    throw std::out_of_range("proximity: node id out of range");
  }
  if (u == v) {
    throw std::invalid_argument("proximity: u and v must be distinct");
  }
}

// Mediator degree for AA. On symmetric digraphs the two directions carry
// the same information, so the distinct-neighbor degree is used; otherwise
// the total degree d_in + d_out. Any mediator of a valid pair touches two
// distinct nodes, so the degree is >= 2 and ln() below never hits zero.
inline double aa_degree(const DirectedGraph& g, NodeId z) {
  return static_cast<double>(g.symmetric() ? g.undirected_degree(z)
                                           : g.total_degree(z));
}

// One directed term per metric: the sum over forward mediators z of (a, b),
// i.e. over two-step paths a -> z -> b. Mediators are visited in ascending
// id order so accumulation order is reproducible.

inline double cn_term(const DirectedGraph& g, NodeId a, NodeId b) {
  return static_cast<double>(
      sorted_intersection(g.out_neighbors(a), g.in_neighbors(b)).size());
}

inline double jc_term(const DirectedGraph& g, NodeId a, NodeId b) {
  auto out = g.out_neighbors(a);
  auto in = g.in_neighbors(b);
  const std::size_t inter = sorted_intersection(out, in).size();
  const std::size_t uni = out.size() + in.size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double aa_term(const DirectedGraph& g, NodeId a, NodeId b) {
  double sum = 0.0;
  for (NodeId z : sorted_intersection(g.out_neighbors(a), g.in_neighbors(b))) {
    sum += 1.0 / std::log(aa_degree(g, z));
  }
  return sum;
}

inline double cs_term(const DirectedGraph& g, NodeId a, NodeId b,
                      bool attention_limited) {
  double sum = 0.0;
  for (NodeId z : sorted_intersection(g.out_neighbors(a), g.in_neighbors(b))) {
    if (attention_limited) {
      sum += 1.0 / (static_cast<double>(g.out_degree(a)) *
                    static_cast<double>(g.in_degree(z)) *
                    static_cast<double>(g.out_degree(z)) *
                    static_cast<double>(g.in_degree(b)));
    } else {
      sum += 1.0 / (static_cast<double>(g.out_degree(a)) *
                    static_cast<double>(g.out_degree(z)));
    }
  }
  return sum;
}

inline double nc_term(const DirectedGraph& g, NodeId a, NodeId b,
                      bool attention_limited) {
  if (!attention_limited) return cn_term(g, a, b);
  double sum = 0.0;
  for (NodeId z : sorted_intersection(g.out_neighbors(a), g.in_neighbors(b))) {
    sum += 1.0 / (static_cast<double>(g.in_degree(z)) *
                  static_cast<double>(g.in_degree(b)));
  }
  return sum;
}

}  // namespace detail

inline CommonNeighborSets common_neighbor_sets(const DirectedGraph& g,
                                               NodeId u, NodeId v) {
  detail::check_pair(g, u, v);
  CommonNeighborSets s;
  s.forward = detail::sorted_intersection(g.out_neighbors(u),
                                          g.in_neighbors(v));
  s.reverse = detail::sorted_intersection(g.in_neighbors(u),
                                          g.out_neighbors(v));
  return s;
}

// CN, JC, AA: neighborhood-overlap metrics.
//   CN(u,v) = [ |fwd(u,v)| + |fwd(v,u)| ] / 2
//   JC(u,v) = [ |out(u)∩in(v)|/|out(u)∪in(v)| + |out(v)∩in(u)|/|out(v)∪in(u)| ] / 2
//   AA(u,v) = [ Σ_z 1/ln d(z) over fwd(u,v) + the same over fwd(v,u) ] / 2
inline double classic_score(const DirectedGraph& g, NodeId u, NodeId v,
                            Metric m) {
  detail::check_pair(g, u, v);
  switch (m) {
    case Metric::CN:
      return 0.5 * (detail::cn_term(g, u, v) + detail::cn_term(g, v, u));
    case Metric::JC:
      return 0.5 * (detail::jc_term(g, u, v) + detail::jc_term(g, v, u));
    case Metric::AA:
      return 0.5 * (detail::aa_term(g, u, v) + detail::aa_term(g, v, u));
    default:
      throw std::invalid_argument(
          "classic_score: metric must be CN, JC, or AA");
  }
}

// Conservative two-step transfer (a random walk splits its unit of
// attention/content across out-edges):
//   CS    term over fwd(a,b): Σ_z 1 / (d_out(a) d_out(z))
//   CS_AL term over fwd(a,b): Σ_z 1 / (d_out(a) d_in(z) d_out(z) d_in(b)),
// the attention-limited variant discounting each hop by the receiver's
// in-degree.
inline double conservative_score(const DirectedGraph& g, NodeId u, NodeId v,
                                 bool attention_limited) {
  detail::check_pair(g, u, v);
  return 0.5 * (detail::cs_term(g, u, v, attention_limited) +
                detail::cs_term(g, v, u, attention_limited));
}

// Non-conservative two-step transfer (a broadcast replicates across all
// out-edges):
//   NC    = CN
//   NC_AL term over fwd(a,b): Σ_z 1 / (d_in(z) d_in(b))
inline double nonconservative_score(const DirectedGraph& g, NodeId u, NodeId v,
                                    bool attention_limited) {
  detail::check_pair(g, u, v);
  return 0.5 * (detail::nc_term(g, u, v, attention_limited) +
                detail::nc_term(g, v, u, attention_limited));
}

// Unified dispatch over the seven graph metrics; rejects Uniform, which has
// no graph definition.
inline double proximity(const DirectedGraph& g, NodeId u, NodeId v, Metric m) {
  switch (m) {
    case Metric::CN:
    case Metric::JC:
    case Metric::AA:
      return classic_score(g, u, v, m);
    case Metric::CS:
      return conservative_score(g, u, v, /*attention_limited=*/false);
    case Metric::CS_AL:
      return conservative_score(g, u, v, /*attention_limited=*/true);
    case Metric::NC:
      return nonconservative_score(g, u, v, /*attention_limited=*/false);
    case Metric::NC_AL:
      return nonconservative_score(g, u, v, /*attention_limited=*/true);
    case Metric::Uniform:
      break;
  }
  throw std::invalid_argument(
      "proximity: Uniform is a prediction baseline, not a graph metric");
}

struct ScoredPair {
  NodeId u;
  NodeId v;
  double score;
};

// Scores every linked pair {u, v}, u < v, in ascending (u, v) order.
inline std::vector<ScoredPair> edge_proximity_table(const DirectedGraph& g,
                                                    Metric m) {
  std::vector<ScoredPair> table;
  for (auto [u, v] : g.linked_pairs()) {
    table.push_back({u, v, proximity(g, u, v, m)});
  }
  return table;
}

}  // namespace proxnet
