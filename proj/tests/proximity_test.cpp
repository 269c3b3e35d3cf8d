#include "proxnet/proximity.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "support.hpp"

using namespace proxnet;
using Catch::Approx;

namespace {

// Every metric score for one pair, keyed by enum order.
std::array<double, kGraphMetrics.size()> all_scores(const DirectedGraph& g,
                                                    NodeId u, NodeId v) {
  std::array<double, kGraphMetrics.size()> out{};
  for (std::size_t i = 0; i < kGraphMetrics.size(); ++i)
    out[i] = proximity(g, u, v, kGraphMetrics[i]);
  return out;
}

}  // namespace

TEST_CASE("four-cycle pair values") {
  // u -> z -> v -> zp -> u: one mediator each way, every degree is 1.
  const auto g = testsupport::g1();
  const NodeId u = *g.find("u");
  const NodeId v = *g.find("v");

  CHECK(proximity(g, u, v, Metric::CN) == 1.0);
  CHECK(proximity(g, u, v, Metric::JC) == 1.0);
  CHECK(proximity(g, u, v, Metric::AA) ==
        Approx(1.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(proximity(g, u, v, Metric::CS) == 1.0);
  CHECK(proximity(g, u, v, Metric::CS_AL) == 1.0);
  CHECK(proximity(g, u, v, Metric::NC) == 1.0);
  CHECK(proximity(g, u, v, Metric::NC_AL) == 1.0);
}

TEST_CASE("fan-out pair values") {
  // u -> z, x -> z, z -> v, z -> w. Pair (u, v): forward mediator {z},
  // reverse empty; d_out(u)=1, d_out(z)=2, d_in(z)=2, d_in(v)=1.
  const auto g = testsupport::g2();
  const NodeId u = *g.find("u");
  const NodeId v = *g.find("v");

  CHECK(proximity(g, u, v, Metric::CN) == 0.5);
  CHECK(proximity(g, u, v, Metric::JC) == 0.5);
  // z has total degree 4 (in: u, x; out: v, w).
  CHECK(proximity(g, u, v, Metric::AA) ==
        Approx(1.0 / (2.0 * std::log(4.0))).epsilon(1e-15));
  CHECK(proximity(g, u, v, Metric::CS) == 0.25);
  CHECK(proximity(g, u, v, Metric::CS_AL) == 0.125);
  CHECK(proximity(g, u, v, Metric::NC) == 0.5);
  CHECK(proximity(g, u, v, Metric::NC_AL) == 0.25);
}

TEST_CASE("pairs without mediators score zero") {
  const auto g = testsupport::g2();
  const NodeId u = *g.find("u");
  const NodeId x = *g.find("x");
  for (Metric m : kGraphMetrics) CHECK(proximity(g, u, x, m) == 0.0);

  const auto iso = testsupport::make_graph({{"a", "b"}, {"c", "d"}});
  for (Metric m : kGraphMetrics)
    CHECK(proximity(iso, *iso.find("a"), *iso.find("c"), m) == 0.0);
}

TEST_CASE("proximity argument validation") {
  const auto g = testsupport::g1();
  const NodeId u = *g.find("u");
  REQUIRE_THROWS_AS(proximity(g, u, u, Metric::CN),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(proximity(g, u, 99, Metric::CN),
                    std::out_of_range);
  REQUIRE_THROWS_AS(proximity(g, 99, u, Metric::CN),
                    std::out_of_range);
  REQUIRE_THROWS_AS(proximity(g, u, *g.find("v"), Metric::Uniform),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(classic_score(g, u, *g.find("v"), Metric::CS),
                    std::invalid_argument);
}

TEST_CASE("common neighbor sets are directional") {
  const auto g = testsupport::g2();
  const NodeId u = *g.find("u");
  const NodeId v = *g.find("v");
  const NodeId z = *g.find("z");

  const auto sets = common_neighbor_sets(g, u, v);
  REQUIRE(sets.forward == std::vector<NodeId>{z});
  REQUIRE(sets.reverse.empty());
}

TEST_CASE("metric names round-trip") {
  for (Metric m : kGraphMetrics) {
    CHECK(metric_from_string(to_string(m)) == m);
  }
  CHECK(metric_from_string("uniform") == Metric::Uniform);
  CHECK(metric_from_string("cs_al") == Metric::CS_AL);
  CHECK(metric_from_string("Cn") == Metric::CN);  // case-blind
  CHECK_FALSE(metric_from_string("bogus").has_value());
}

TEST_CASE("structural identities on random digraphs") {
  std::size_t pairs_checked = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto g = testsupport::random_digraph(20, 0.12, seed);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        const auto fwd = all_scores(g, u, v);
        const auto rev = all_scores(g, v, u);
        for (std::size_t i = 0; i < fwd.size(); ++i) {
          // Symmetric by construction, bit-for-bit.
          CHECK(fwd[i] == rev[i]);
          CHECK(fwd[i] >= 0.0);
          CHECK(std::isfinite(fwd[i]));
        }
        // NC is CN; attention limits never raise a score.
        CHECK(fwd[5] == fwd[0]);
        CHECK(fwd[1] <= 1.0);
        CHECK(fwd[3] <= 1.0);
        CHECK(fwd[4] <= fwd[3] + 1e-12);
        CHECK(fwd[6] <= fwd[5] + 1e-12);
        ++pairs_checked;
      }
    }
  }
  REQUIRE(pairs_checked >= 1000);
}

TEST_CASE("conservative equals attention-limited non-conservative on symmetric graphs") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = testsupport::random_symmetric_digraph(16, 0.25, seed);
    REQUIRE(g.symmetric());
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        const double cs = proximity(g, u, v, Metric::CS);
        const double nc_al =
            proximity(g, u, v, Metric::NC_AL);
        CHECK(cs == nc_al);  // identical arithmetic, so bit-exact

        // Closed form on symmetric graphs: both directional terms collapse
        // to (1/d(u) + 1/d(v)) / 2 * sum_z 1/d(z) over shared neighbors.
        const auto sets = common_neighbor_sets(g, u, v);
        if (sets.forward.empty()) {
          CHECK(cs == 0.0);  // no mediators; endpoint degrees may be zero
          continue;
        }
        double zsum = 0.0;
        for (NodeId z : sets.forward) zsum += 1.0 / g.out_degree(z);
        const double expect = 0.5 *
                              (1.0 / g.out_degree(u) + 1.0 / g.out_degree(v)) *
                              zsum;
        CHECK(cs == Approx(expect).margin(1e-12));
      }
    }
  }
}

TEST_CASE("edge proximity table covers linked pairs in order") {
  const auto g1 = testsupport::g1();
  const auto table = edge_proximity_table(g1, Metric::CN);
  REQUIRE(table.size() == 4);
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    REQUIRE(std::pair(table[i].u, table[i].v) <
            std::pair(table[i + 1].u, table[i + 1].v));
  }
  // Adjacent nodes on the 4-cycle share no mediators.
  for (const auto& row : table) CHECK(row.score == 0.0);

  const auto empty = build_graph({}, EdgeSemantics::Flows).graph;
  REQUIRE(edge_proximity_table(empty, Metric::JC).empty());
}
