#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace causalmec;
using namespace causalmec::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::SuiteFailed;
}

}  // namespace

TEST(VertexSet, SetAlgebraAndOrder) {
  VertexSet a(70, {3, 1, 65});
  VertexSet b(70, {1, 2});
  EXPECT_EQ(a.members(), (std::vector<VertexId>{1, 3, 65}));
  EXPECT_EQ((a | b).members(), (std::vector<VertexId>{1, 2, 3, 65}));
  EXPECT_EQ((a & b).members(), (std::vector<VertexId>{1}));
  EXPECT_EQ((a - b).members(), (std::vector<VertexId>{3, 65}));
  EXPECT_EQ(a.size(), 3u);
  a.erase(65);
  EXPECT_FALSE(a.contains(65));
  EXPECT_EQ(VertexSet::from_mask(5, 0b10110).members(), (std::vector<VertexId>{2, 3, 5}));
}

TEST(MakeGraph, ValidGraphs) {
  const auto chain = chain3();
  EXPECT_EQ(chain.num_directed(), 2u);
  const auto s = s_graph();
  EXPECT_EQ(s.kind(), GraphKind::Admg);
  EXPECT_TRUE(s.has_directed(2, 3));
  EXPECT_TRUE(s.has_bidirected(3, 2));
}

TEST(MakeGraph, DuplicatesCollapse) {
  const auto g = make_graph(3, {{1, 2}, {1, 2}}, {{2, 3}, {3, 2}}, GraphKind::Admg);
  EXPECT_EQ(g.num_directed(), 1u);
  EXPECT_EQ(g.num_bidirected(), 1u);
}

TEST(MakeGraph, Errors) {
  EXPECT_EQ(code_of([] { dag(3, {{1, 2}, {2, 3}, {3, 1}}); }), ErrorCode::CycleInAcyclicKind);
  EXPECT_EQ(code_of([] { make_graph(3, {{1, 2}, {2, 1}}, {}, GraphKind::Admg); }), ErrorCode::CycleInAcyclicKind);
  EXPECT_EQ(code_of([] { dag(2, {{1, 1}}); }), ErrorCode::SelfLoop);
  EXPECT_EQ(code_of([] { dag(2, {{1, 3}}); }), ErrorCode::VertexOutOfRange);
  EXPECT_EQ(code_of([] { make_graph(2, {}, {{1, 2}}, GraphKind::Dag); }), ErrorCode::BidirectedInWrongKind);
  EXPECT_EQ(code_of([] { make_graph(2, {}, {{1, 2}}, GraphKind::Dcg); }), ErrorCode::BidirectedInWrongKind);
  EXPECT_EQ(code_of([] { make_graph(2, {}, {{1, 1}}, GraphKind::Admg); }), ErrorCode::SelfLoop);
}

TEST(MakeGraph, DcgAllowsCycles) {
  EXPECT_NO_THROW(dcg(2, {{1, 2}, {2, 1}}));
  EXPECT_NO_THROW(dcg(3, {{1, 2}, {2, 3}, {3, 1}}));
}

TEST(IsAcyclic, Examples) {
  EXPECT_TRUE(is_acyclic(chain3()));
  EXPECT_FALSE(is_acyclic(dcg(3, {{1, 2}, {2, 3}, {3, 1}})));
  EXPECT_FALSE(is_acyclic(dcg(2, {{1, 2}, {2, 1}})));
  EXPECT_TRUE(is_acyclic(s_graph(true)));
}

TEST(ParentsChildren, Examples) {
  const auto g = layered_example();
  EXPECT_EQ(parents(g, 6).members(), (std::vector<VertexId>{2, 4}));
  EXPECT_TRUE(parents(g, 3).empty());
  EXPECT_EQ(children(g, 2).members(), (std::vector<VertexId>{5, 6, 10}));
  EXPECT_EQ(parents(s_graph(), 3).members(), (std::vector<VertexId>{2}));
}

TEST(Descendants, Examples) {
  EXPECT_EQ(descendants(chain3(), 1).members(), (std::vector<VertexId>{2, 3}));
  EXPECT_EQ(descendants(dcg(3, {{1, 2}, {2, 3}, {3, 1}}), 1).members(), (std::vector<VertexId>{2, 3}));
  EXPECT_EQ(descendants(layered_example(), 5).members(), (std::vector<VertexId>{8, 11}));
}

TEST(Descendants, TransitiveOnAllSmallDcgs) {
  for_each_graph(3, GraphKind::Dcg, [](const MixedGraph& g) {
    for (VertexId v = 1; v <= 3; ++v)
      for (VertexId x : descendants(g, v))
        for (VertexId y : descendants(g, x))
          if (y != v) EXPECT_TRUE(descendants(g, v).contains(y));
  });
}

TEST(Descendants, MasksMatchSets) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto g = sample_uniform_dcg(8, rng);
    const auto masks = descendant_masks(g);
    for (VertexId v = 1; v <= 8; ++v) EXPECT_EQ(masks[static_cast<std::size_t>(v - 1)], descendants(g, v).mask());
  }
}

TEST(TowerDecomposition, Examples) {
  const auto t = tower_decomposition(layered_example());
  EXPECT_EQ(t.vector(), (std::vector<int>{4, 2, 3, 2}));
  EXPECT_EQ(t.layers[0], (std::vector<VertexId>{1, 2, 3, 4}));
  EXPECT_EQ(t.layers[1], (std::vector<VertexId>{5, 6}));
  EXPECT_EQ(t.layers[2], (std::vector<VertexId>{7, 8, 9}));
  EXPECT_EQ(t.layers[3], (std::vector<VertexId>{10, 11}));
  EXPECT_EQ(tower_decomposition(dag(5, {})).vector(), (std::vector<int>{5}));
  EXPECT_EQ(tower_decomposition(chain3()).vector(), (std::vector<int>{1, 1, 1}));
}

TEST(TowerDecomposition, AdmgUsesDirectedPart) {
  EXPECT_EQ(tower_decomposition(s_graph()).vector(), (std::vector<int>{1, 1, 1}));
}

TEST(TowerDecomposition, CyclicInput) {
  EXPECT_EQ(code_of([] { tower_decomposition(dcg(3, {{1, 2}, {2, 3}, {3, 1}})); }), ErrorCode::CyclicInput);
  EXPECT_EQ(code_of([] { tower_graph(dcg(2, {{1, 2}, {2, 1}})); }), ErrorCode::CyclicInput);
}

TEST(TowerDecomposition, InvariantsOnRandomDags) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(30));
    const auto g = sample_dnp_tower(n, 0.1 + 0.5 * rng.uniform(), rng);
    const auto t = tower_decomposition(g);
    std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
    int total = 0;
    for (const auto& layer : t.layers) {
      EXPECT_FALSE(layer.empty());
      total += static_cast<int>(layer.size());
      for (VertexId v : layer) ++seen[static_cast<std::size_t>(v)];
    }
    EXPECT_EQ(total, n);
    for (VertexId v = 1; v <= n; ++v) EXPECT_EQ(seen[static_cast<std::size_t>(v)], 1);
    for (const Edge& e : g.directed_edges()) EXPECT_LT(t.layer(e.from), t.layer(e.to));
    for (VertexId v = 1; v <= n; ++v) {
      const auto pa = g.parent_list(v);
      if (t.layer(v) == 1) {
        EXPECT_TRUE(pa.empty());
        continue;
      }
      EXPECT_TRUE(std::any_of(pa.begin(), pa.end(), [&](VertexId u) { return t.layer(u) == t.layer(v) - 1; }));
    }
    EXPECT_EQ(tower_decomposition(tower_graph(g)).layers, t.layers);
  }
}

TEST(TowerGraph, LayeredExample) {
  const auto g = layered_example();
  const auto sigma = tower_graph(g);
  // Non-adjacent-layer edges: 1->7 and 4->9 skip one layer, 2->10 and 4->8
  // skip two (4 is a source and 8 sits in the third layer).
  for (const Edge e : {Edge{1, 7}, Edge{4, 9}, Edge{2, 10}, Edge{4, 8}}) EXPECT_FALSE(sigma.has_directed(e.from, e.to));
  EXPECT_EQ(sigma.num_directed(), 8u);
  for (const Edge& e : sigma.directed_edges()) EXPECT_TRUE(g.has_directed(e.from, e.to));
}

TEST(TowerGraph, DegenerateInputs) {
  EXPECT_EQ(tower_graph(dag(4, {})), dag(4, {}));
  EXPECT_EQ(tower_graph(chain3()), chain3());
  EXPECT_EQ(tower_graph(s_graph()).num_bidirected(), 0u);
}

TEST(InducedSubgraph, Examples) {
  const auto sub = induced_subgraph(s_graph(true), set(3, {1, 3}));
  EXPECT_EQ(sub.num_vertices(), 2);
  EXPECT_EQ(sub.directed_vector(), (std::vector<Edge>{{1, 2}}));
  EXPECT_EQ(sub.kind(), GraphKind::Admg);

  const auto g = layered_example();
  EXPECT_EQ(induced_subgraph(g, VertexSet::full(11)), g);
  EXPECT_EQ(induced_subgraph(g, set(11, {2, 5, 8})), dag(3, {{1, 2}, {2, 3}}));
}
