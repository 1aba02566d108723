#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace causalmec;
using namespace causalmec::testing;

namespace {

bool connected(const MixedGraph& g, VertexId x, VertexId y, std::initializer_list<VertexId> z) {
  return is_d_connected(g, x, y, VertexSet(g.num_vertices(), z));
}

bool oracle(const MixedGraph& g, VertexId x, VertexId y, std::initializer_list<VertexId> z) {
  return is_d_connected_oracle(g, {x, y, VertexSet(g.num_vertices(), z)});
}

/// Every valid query on g, x < y.
std::vector<DsepQuery> queries(int n) { return detail::all_queries(n); }

}  // namespace

TEST(Dsep, Examples) {
  for (auto* fn : {&connected, &oracle}) {
    EXPECT_FALSE(fn(chain3(), 1, 3, {2}));
    EXPECT_TRUE(fn(chain3(), 1, 3, {}));
    EXPECT_FALSE(fn(collider3(), 1, 3, {}));
    EXPECT_TRUE(fn(collider3(), 1, 3, {2}));
    EXPECT_TRUE(fn(s_graph(), 1, 3, {2}));
    const auto cyc = dcg(4, {{1, 2}, {2, 3}, {3, 1}});
    EXPECT_FALSE(fn(cyc, 1, 4, {}));
    EXPECT_FALSE(fn(cyc, 1, 4, {2, 3}));
    EXPECT_TRUE(fn(dag(2, {{1, 2}}), 1, 2, {}));
  }
}

TEST(Dsep, ColliderOpenedByDescendant) {
  const auto g = dag(4, {{1, 2}, {3, 2}, {2, 4}});
  EXPECT_TRUE(connected(g, 1, 3, {4}));
  EXPECT_TRUE(oracle(g, 1, 3, {4}));
}

TEST(Dsep, InvalidQueries) {
  const auto g = chain3();
  EXPECT_THROW(is_d_connected(g, 1, 1, VertexSet(3)), Error);
  EXPECT_THROW(is_d_connected(g, 1, 4, VertexSet(3)), Error);
  EXPECT_THROW(is_d_connected(g, 1, 3, VertexSet(3, {1})), Error);
  EXPECT_THROW(is_d_connected(g, 1, 3, VertexSet(4)), Error);
}

TEST(Dsep, OracleCap) {
  Limits limits;
  limits.oracle_max_n = 3;
  const auto g = dag(4, {});
  try {
    is_d_connected_oracle(g, {1, 2, VertexSet(4)}, limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GraphTooLargeForOracle);
  }
}

TEST(Dsep, OracleAgreesExhaustivelyOnThreeVertices) {
  for (GraphKind kind : {GraphKind::Dag, GraphKind::Admg, GraphKind::Dcg})
    for_each_graph(3, kind, [](const MixedGraph& g) {
      for (const auto& q : queries(3)) EXPECT_EQ(is_d_connected(g, q), is_d_connected_oracle(g, q)) << format_graph(g);
    });
}

TEST(Dsep, OracleAgreesOnRandomGraphs) {
  Rng rng(2024);
  for (int t = 0; t < 40; ++t) {
    const int n = 4 + static_cast<int>(rng.below(3));
    const MixedGraph g = t % 3 == 0 ? sample_dnp_tower(n, 0.4, rng) : t % 3 == 1 ? sample_uniform_admg(n, rng) : sample_uniform_dcg(n, rng);
    for (const auto& q : queries(n)) ASSERT_EQ(is_d_connected(g, q), is_d_connected_oracle(g, q)) << format_graph(g);
  }
}

TEST(Dsep, Symmetry) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto g = sample_uniform_admg(6, rng);
    for (const auto& q : queries(6)) EXPECT_EQ(is_d_connected(g, q), is_d_connected(g, DsepQuery{q.y, q.x, q.z}));
  }
}

TEST(Dsep, MonotoneUnderEdgeSubsets) {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto g = sample_uniform_dcg(5, rng);
    std::vector<Edge> kept;
    for (const Edge& e : g.directed_edges())
      if (rng.bernoulli(0.5)) kept.push_back(e);
    const auto sub = g.with_edges(kept, {});
    for (const auto& q : queries(5))
      if (is_d_connected(sub, q)) EXPECT_TRUE(is_d_connected(g, q));
  }
}

TEST(Dsep, AdjacentDagVerticesAlwaysConnected) {
  for_each_graph(4, GraphKind::Dag, [](const MixedGraph& g) {
    for (const auto& q : queries(4))
      if (g.adjacent(q.x, q.y)) EXPECT_TRUE(is_d_connected(g, q));
  });
}

TEST(Dsep, GeneralPathMatchesMaskPath) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto g = t % 2 ? sample_uniform_admg(6, rng) : sample_uniform_dcg(6, rng);
    for (const auto& q : queries(6)) EXPECT_EQ(detail::d_connected_general(g, q), is_d_connected(g, q));
  }
}

TEST(Dsep, LargeGraphs) {
  // A long chain with a collider at the end exercises the n > 64 path.
  std::vector<Edge> edges;
  for (VertexId v = 1; v < 99; ++v) edges.push_back({v, v + 1});
  edges.push_back({100, 99});
  const auto g = dag(100, edges);
  EXPECT_TRUE(is_d_connected(g, 1, 99, VertexSet(100)));
  EXPECT_FALSE(is_d_connected(g, 1, 100, VertexSet(100)));
  EXPECT_TRUE(is_d_connected(g, 1, 100, VertexSet(100, {99})));
  EXPECT_FALSE(is_d_connected(g, 1, 100, VertexSet(100, {50, 99})));
}

TEST(DsepSignature, Examples) {
  const auto empty = dsep_signature(dag(3, {}));
  EXPECT_EQ(empty.size(), 6u);
  EXPECT_EQ(empty.count_connected(), 0u);
  EXPECT_EQ(dsep_signature(s_graph()), dsep_signature(s_graph(true)));

  const auto chain = dsep_signature(chain3());
  const auto coll = dsep_signature(collider3());
  EXPECT_TRUE(chain.connected(1, 3, 0));
  EXPECT_FALSE(coll.connected(1, 3, 0));
  EXPECT_FALSE(chain.connected(1, 3, vertex_bit(2)));
  EXPECT_TRUE(coll.connected(1, 3, vertex_bit(2)));
  EXPECT_NE(chain, coll);
}

TEST(DsepSignature, CanonicalLayout) {
  const auto g = dag(4, {{1, 2}, {3, 2}, {2, 4}});
  const auto sig = dsep_signature(g);
  EXPECT_EQ(sig.entries_per_pair(), 4u);
  EXPECT_EQ(sig.size(), 24u);
  std::size_t i = 0;
  for (VertexId x = 1; x <= 4; ++x)
    for (VertexId y = x + 1; y <= 4; ++y) {
      std::vector<VertexId> rest;
      for (VertexId v = 1; v <= 4; ++v)
        if (v != x && v != y) rest.push_back(v);
      for (std::size_t code = 0; code < 4; ++code, ++i) {
        VertexSet z(4);
        for (std::size_t b = 0; b < rest.size(); ++b)
          if ((code >> b) & 1u) z.insert(rest[b]);
        EXPECT_EQ(sig.bit(i), is_d_connected(g, x, y, z));
      }
    }
}

TEST(DsepSignature, Cap) {
  Limits limits;
  limits.signature_max_n = 4;
  try {
    dsep_signature(dag(5, {}), limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GraphTooLarge);
  }
}
