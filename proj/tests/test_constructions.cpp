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
  return ErrorCode::SuiteFailed;
}

MixedGraph two_s_copies() {
  return make_graph(6, {{1, 2}, {2, 3}, {4, 5}, {5, 6}}, {{2, 3}, {5, 6}}, GraphKind::Admg);
}

MixedGraph two_triangles() { return dcg(6, {{1, 2}, {2, 3}, {3, 1}, {4, 5}, {5, 6}, {6, 4}}); }

}  // namespace

TEST(Layer2Matching, MatchingExample) {
  const auto m = layer2_matching(matching_example());
  EXPECT_EQ(m.single_parent.members(), (std::vector<VertexId>{7, 8, 11}));
  EXPECT_EQ(m.unique_parent.members(), (std::vector<VertexId>{7}));
  EXPECT_EQ(m.edges, (std::vector<Edge>{{1, 7}, {5, 8}}));
  EXPECT_TRUE(is_valid_matching(matching_example(), m.edges));
  // The alternative choice for parent 5 is just as valid.
  const std::vector<Edge> alternative{{1, 7}, {5, 11}};
  EXPECT_TRUE(is_valid_matching(matching_example(), alternative));
}

TEST(Layer2Matching, DegenerateInputs) {
  EXPECT_EQ(layer2_matching(dag(4, {})).size(), 0u);
  const auto star = layer2_matching(dag(3, {{1, 2}, {1, 3}}));
  EXPECT_EQ(star.single_parent.members(), (std::vector<VertexId>{2, 3}));
  EXPECT_TRUE(star.unique_parent.empty());
  EXPECT_EQ(star.edges, (std::vector<Edge>{{1, 2}}));
  EXPECT_EQ(code_of([] { layer2_matching(s_graph()); }), ErrorCode::NotADag);
}

TEST(Layer2Matching, InvariantsOnRandomDags) {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + static_cast<int>(rng.below(60));
    const auto g = sample_dnp_tower(n, std::min(0.9, 3.0 / n + 0.3 * rng.uniform()), rng);
    const auto m = layer2_matching(g);
    const auto tower = tower_decomposition(g);
    EXPECT_TRUE(is_valid_matching(g, m.edges));
    EXPECT_GE(m.size(), m.unique_parent.size());
    for (const Edge& e : m.edges) {
      EXPECT_EQ(tower.layer(e.from), 1);
      EXPECT_EQ(tower.layer(e.to), 2);
      EXPECT_TRUE(m.single_parent.contains(e.to));
    }
  }
}

TEST(FlipMatching, MatchingExample) {
  const auto g = matching_example();
  const auto m = layer2_matching(g);
  EXPECT_EQ(flip_matching_subset(g, m, 0), g);
  const auto both = flip_matching_subset(g, m, 3);
  EXPECT_TRUE(both.has_directed(7, 1));
  EXPECT_TRUE(both.has_directed(8, 5));
  EXPECT_TRUE(markov_equivalent_dag_fast(g, both));
  std::vector<MixedGraph> variants;
  for (std::uint64_t mask = 0; mask < 4; ++mask) variants.push_back(flip_matching_subset(g, m, mask));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      EXPECT_NE(variants[i], variants[j]);
      EXPECT_TRUE(markov_equivalent_exact(variants[i], variants[j]));
    }
}

TEST(FlipMatching, RejectsInvalidMatchings) {
  const auto g = matching_example();
  ReversibleMatching bogus;
  bogus.edges = {{1, 9}};
  EXPECT_EQ(code_of([&] { flip_matching_subset(g, bogus, 1); }), ErrorCode::InvalidMatching);
  bogus.edges = {{5, 8}, {5, 11}};
  EXPECT_EQ(code_of([&] { flip_matching_subset(g, bogus, 1); }), ErrorCode::InvalidMatching);
  bogus.edges = {{3, 4}};
  EXPECT_EQ(code_of([&] { flip_matching_subset(g, bogus, 0); }), ErrorCode::InvalidMatching);
}

TEST(SStructures, Examples) {
  const auto bar = find_s_structures(s_graph(true));
  ASSERT_EQ(bar.size(), 1u);
  EXPECT_EQ(bar.selection.size(), 1u);
  EXPECT_EQ(bar.triples[0], (SStructure{1, 2, 3, true}));
  EXPECT_EQ(find_s_structures(layered_example()).size(), 0u);
  const auto two = find_s_structures(two_s_copies());
  EXPECT_EQ(two.size(), 2u);
  EXPECT_EQ(two.selection.size(), 2u);
  EXPECT_EQ(certificate(two_s_copies()).log2_bound, 2u);
  EXPECT_EQ(code_of([] { find_s_structures(two_triangles()); }), ErrorCode::NotAnAdmg);
}

TEST(SStructures, ExtraInducedEdgesAllowed) {
  // 1 <-> 2 on top of S-bar still contains the gadget.
  const auto g = make_graph(3, {{1, 2}, {2, 3}, {1, 3}}, {{2, 3}, {1, 2}}, GraphKind::Admg);
  EXPECT_EQ(find_s_structures(g).size(), 1u);
}

TEST(SStructures, Toggle) {
  const SStructure roles{1, 2, 3, false};
  EXPECT_EQ(toggle_underdetermined_edge(s_graph(), roles), s_graph(true));
  EXPECT_EQ(toggle_underdetermined_edge(s_graph(true), roles), s_graph());
  EXPECT_EQ(code_of([&] { toggle_underdetermined_edge(s_graph(), SStructure{2, 1, 3, false}); }), ErrorCode::TripleNotAnSStructure);
  EXPECT_EQ(code_of([&] { toggle_underdetermined_edge(dag(3, {{1, 2}, {2, 3}}), roles); }), ErrorCode::TripleNotAnSStructure);
}

TEST(SStructures, SelectionPropertiesOnRandomAdmgs) {
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng.below(9));
    const auto g = sample_uniform_admg(n, rng);
    const auto s = find_s_structures(g);
    for (const auto& st : s.triples) EXPECT_TRUE(contains_s(g, st.v1, st.v2, st.v3));
    for (std::size_t i = 0; i < s.selection.size(); ++i)
      for (std::size_t j = i + 1; j < s.selection.size(); ++j) {
        const auto a = s.selection[i].vertices();
        const auto b = s.selection[j].vertices();
        int shared = 0;
        for (VertexId x : a) shared += static_cast<int>(std::count(b.begin(), b.end(), x));
        EXPECT_LE(shared, 1);
      }
    EXPECT_GE(static_cast<double>(s.selection.size()), std::ceil(static_cast<double>(s.size()) / (3.0 * n)));
    const auto sig = dsep_signature(g);
    for (const auto& st : s.triples) EXPECT_EQ(dsep_signature(toggle_underdetermined_edge(g, st)), sig);
  }
}

TEST(ReverseCycle, CycleWithExternalInEdge) {
  const auto g = dcg(4, {{1, 2}, {2, 3}, {3, 1}, {4, 2}});
  const std::vector<VertexId> cycle{1, 2, 3};
  EXPECT_EQ(reverse_cycle(g, cycle), dcg(4, {{2, 1}, {3, 2}, {1, 3}, {4, 1}}));
  EXPECT_TRUE(markov_equivalent_exact(g, reverse_cycle(g, cycle)));
}

TEST(ReverseCycle, PureCycleAndInvolution) {
  const auto g = dcg(3, {{1, 2}, {2, 3}, {3, 1}});
  const std::vector<VertexId> cycle{1, 2, 3};
  const auto h = reverse_cycle(g, cycle);
  EXPECT_EQ(h, dcg(3, {{1, 3}, {3, 2}, {2, 1}}));
  EXPECT_EQ(reversed_cycle(cycle), (std::vector<VertexId>{1, 3, 2}));
  EXPECT_EQ(reverse_cycle(h, reversed_cycle(cycle)), g);
}

TEST(ReverseCycle, Errors) {
  const auto g = dcg(4, {{1, 2}, {2, 3}, {3, 1}, {1, 4}, {4, 1}});
  EXPECT_EQ(code_of([&] { reverse_cycle(layered_example(), std::vector<VertexId>{1, 2, 3}); }), ErrorCode::NotADcg);
  EXPECT_EQ(code_of([&] { reverse_cycle(g, std::vector<VertexId>{1, 4}); }), ErrorCode::CycleTooShort);
  EXPECT_EQ(code_of([&] { reverse_cycle(g, std::vector<VertexId>{1, 3, 2}); }), ErrorCode::NotACycle);
  EXPECT_EQ(code_of([&] { reverse_cycle(g, std::vector<VertexId>{1, 2, 2}); }), ErrorCode::NotACycle);
  EXPECT_EQ(code_of([&] { reverse_cycle(g, std::vector<VertexId>{1, 2, 9}); }), ErrorCode::VertexOutOfRange);
}

// Every cycle of every DCG on four vertices, overlapping cycles included.
TEST(ReverseCycle, ExhaustiveOnFourVertices) {
  std::size_t instances = 0;
  for_each_graph(4, GraphKind::Dcg, [&](const MixedGraph& g) {
    const auto sig = dsep_signature(g);
    for (const auto& cycle : simple_cycles(g)) {
      ++instances;
      const auto h = reverse_cycle(g, cycle);
      ASSERT_FALSE(reverse_cycle_merges(g, cycle));
      ASSERT_EQ(dsep_signature(h), sig) << format_graph(g);
      ASSERT_EQ(reverse_cycle(h, reversed_cycle(cycle)), g);
      for (VertexId v = 1; v <= 4; ++v) ASSERT_EQ(descendants(g, v), descendants(h, v));
    }
  });
  EXPECT_GT(instances, 1000u);
}

TEST(SimpleCycles, ListsEachCycleOnce) {
  const auto g = dcg(4, {{1, 2}, {2, 3}, {3, 1}, {1, 3}, {3, 4}, {4, 1}, {2, 1}});
  const auto cycles = simple_cycles(g);
  // The 2-cycles 1<->2 and 1<->3 are skipped.
  EXPECT_EQ(cycles, (std::vector<std::vector<VertexId>>{{1, 2, 3}, {1, 2, 3, 4}, {1, 3, 4}}));
  EXPECT_EQ(simple_cycles(g, 2).size(), 5u);
}

TEST(CyclePacking, Examples) {
  EXPECT_EQ(cycle_packing(two_triangles()).size(), 2u);
  EXPECT_EQ(cycle_packing(dcg(4, {{1, 2}, {2, 3}, {3, 4}})).size(), 0u);
  EXPECT_EQ(cycle_packing(dcg(2, {{1, 2}, {2, 1}})).size(), 0u);
  EXPECT_EQ(code_of([] { cycle_packing(layered_example()); }), ErrorCode::NotADcg);
}

TEST(CyclePacking, PrefersShortestCycle) {
  // A 4-cycle through 1 and a 3-cycle 2->5->6->2 sharing vertex 2.
  const auto g = dcg(6, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {2, 5}, {5, 6}, {6, 2}});
  const auto packing = cycle_packing(g);
  ASSERT_EQ(packing.size(), 1u);
  EXPECT_EQ(packing.cycles[0], (std::vector<VertexId>{2, 5, 6}));
}

TEST(CyclePacking, FindsThreeForcedTriangles) {
  Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    // Random edges only go forward between triples, so every cycle lies
    // inside one triple.
    std::vector<Edge> edges;
    for (int k = 0; k < 3; ++k) {
      const VertexId a = 3 * k + 1, b = a + 1, c = a + 2;
      edges.insert(edges.end(), {{a, b}, {b, c}, {c, a}});
      if (rng.bernoulli(0.5)) edges.push_back({b, a});
      if (rng.bernoulli(0.5)) edges.push_back({a, c});
    }
    for (VertexId u = 1; u <= 9; ++u)
      for (VertexId w = 1; w <= 9; ++w)
        if ((u - 1) / 3 < (w - 1) / 3 && rng.bernoulli(0.5)) edges.push_back({u, w});
    const auto packing = cycle_packing(dcg(9, edges));
    EXPECT_EQ(packing.size(), 3u);
  }
}

TEST(CyclePacking, DisjointValidCyclesOnRandomDcgs) {
  Rng rng(43);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng.below(20));
    const auto g = sample_uniform_dcg(n, rng);
    const auto packing = cycle_packing(g);
    std::vector<int> used(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& c : packing.cycles) {
      EXPECT_GE(c.size(), 3u);
      EXPECT_TRUE(is_directed_cycle(g, c));
      for (VertexId v : c) EXPECT_EQ(used[static_cast<std::size_t>(v)]++, 0);
    }
    // Greedy is maximal: what is left over is free of cycles of length >= 3.
    VertexSet rest(n);
    for (VertexId v = 1; v <= n; ++v)
      if (!used[static_cast<std::size_t>(v)]) rest.insert(v);
    if (n <= 12 && !rest.empty()) EXPECT_TRUE(simple_cycles(induced_subgraph(g, rest)).empty());
  }
}

TEST(Certificate, Dispatch) {
  EXPECT_EQ(certificate(matching_example()).log2_bound, 2u);
  EXPECT_EQ(certificate(s_graph(true)).log2_bound, 1u);
  EXPECT_EQ(certificate(two_triangles()).log2_bound, 2u);
  const std::string text = format_certificate(certificate(matching_example()));
  EXPECT_NE(text.find("edge 1 -> 7"), std::string::npos);
  EXPECT_TRUE(text.ends_with("log2_mec_lower_bound=2\n"));
}

TEST(Certificate, NeverExceedsOracleClassSize) {
  const std::pair<GraphKind, int> cases[] = {{GraphKind::Dag, 5}, {GraphKind::Admg, 4}, {GraphKind::Dcg, 5}};
  for (const auto& [kind, max_n] : cases)
    for (int n = 1; n <= max_n; ++n) {
      const SignatureIndex index(n, kind);
      for_each_graph(n, kind, [&](const MixedGraph& g) {
        ASSERT_LE(std::size_t{1} << certificate(g).log2_bound, index.class_size(g)) << format_graph(g);
      });
    }
}
