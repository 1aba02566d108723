#pragma once

#include <algorithm>
#include <vector>

#include "causalmec/causalmec.hpp"

namespace causalmec::testing {

inline MixedGraph dag(int n, std::vector<Edge> edges) { return make_graph(n, std::move(edges), {}, GraphKind::Dag); }
inline MixedGraph dcg(int n, std::vector<Edge> edges) { return make_graph(n, std::move(edges), {}, GraphKind::Dcg); }

inline MixedGraph chain3() { return dag(3, {{1, 2}, {2, 3}}); }
inline MixedGraph collider3() { return dag(3, {{1, 2}, {3, 2}}); }

/// Eleven-vertex DAG with layers {1,2,3,4}, {5,6}, {7,8,9}, {10,11}.
inline MixedGraph layered_example() {
  return dag(11, {{2, 6}, {6, 7}, {4, 6}, {2, 5}, {4, 8}, {5, 8}, {6, 9}, {1, 7}, {2, 10}, {9, 10}, {8, 11}, {4, 9}});
}

/// Eleven-vertex DAG whose layer-2 single-parent vertices are 7, 8 and 11.
inline MixedGraph matching_example() {
  return dag(11, {{5, 11}, {1, 7}, {1, 9}, {2, 10}, {4, 9}, {4, 10}, {5, 8}, {6, 10}});
}

/// v1 -> v2, v2 -> v3, v2 <-> v3 on {1,2,3}, with or without 1 -> 3.
inline MixedGraph s_graph(bool with_optional_edge = false) {
  std::vector<Edge> directed{{1, 2}, {2, 3}};
  if (with_optional_edge) directed.push_back({1, 3});
  return make_graph(3, directed, {{2, 3}}, GraphKind::Admg);
}

inline VertexSet set(int n, std::initializer_list<VertexId> members) { return VertexSet(n, members); }

inline bool contains_graph(const std::vector<MixedGraph>& gs, const MixedGraph& g) {
  return std::find(gs.begin(), gs.end(), g) != gs.end();
}

}  // namespace causalmec::testing
