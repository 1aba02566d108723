#pragma once

#include <algorithm>
#include <deque>
#include <set>
#include <utility>
#include <vector>

#include "causalmec/dsep.hpp"
#include "causalmec/enumerate.hpp"
#include "causalmec/error.hpp"
#include "causalmec/graph.hpp"
#include "causalmec/limits.hpp"

namespace causalmec {

/// Unshielded collider a -> c <- b with a < b and a, b non-adjacent.
struct VStructure {
  VertexId a = 0;
  VertexId c = 0;
  VertexId b = 0;

  auto operator<=>(const VStructure&) const = default;
};

inline void require_dag(const MixedGraph& g) {
  if (g.kind() != GraphKind::Dag) throw Error(ErrorCode::NotADag, "expected a DAG");
}

inline void require_same_size(const MixedGraph& g1, const MixedGraph& g2) {
  if (g1.num_vertices() != g2.num_vertices())
    throw Error(ErrorCode::SizeMismatch, "graphs have different vertex counts");
}

/// Exact test: identical d-separation signatures. Kinds may differ.
inline bool markov_equivalent_exact(const MixedGraph& g1, const MixedGraph& g2, const Limits& limits = {}) {
  require_same_size(g1, g2);
  return dsep_signature(g1, limits) == dsep_signature(g2, limits);
}

/// Unordered adjacencies of a DAG, each as (min, max), sorted.
inline std::vector<Edge> skeleton(const MixedGraph& g) {
  std::vector<Edge> out;
  out.reserve(g.num_directed());
  for (const Edge& e : g.directed_edges()) out.push_back({std::min(e.from, e.to), std::max(e.from, e.to)});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<VStructure> v_structures(const MixedGraph& g) {
  std::vector<VStructure> out;
  for (VertexId c = 1; c <= g.num_vertices(); ++c) {
    const auto pa = g.parent_list(c);
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = i + 1; j < pa.size(); ++j)
        if (!g.adjacent(pa[i], pa[j])) out.push_back({pa[i], c, pa[j]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Equal skeletons and equal v-structures.
inline bool markov_equivalent_dag_fast(const MixedGraph& g1, const MixedGraph& g2) {
  require_dag(g1);
  require_dag(g2);
  require_same_size(g1, g2);
  return skeleton(g1) == skeleton(g2) && v_structures(g1) == v_structures(g2);
}

/// An edge v -> w is reversible iff Pa(v) = Pa(w) \ {v}.
inline bool is_reversible(const MixedGraph& g, Edge e) {
  const auto pv = g.parent_list(e.from);
  const auto pw = g.parent_list(e.to);
  if (pw.size() != pv.size() + 1) return false;
  std::size_t i = 0;
  for (VertexId u : pw) {
    if (u == e.from) continue;
    if (i >= pv.size() || pv[i] != u) return false;
    ++i;
  }
  return i == pv.size();
}

inline std::vector<Edge> reversible_edges(const MixedGraph& g) {
  require_dag(g);
  std::vector<Edge> out;
  for (const Edge& e : g.directed_edges())
    if (is_reversible(g, e)) out.push_back(e);
  return out;
}

inline MixedGraph reverse_edge(const MixedGraph& g, Edge e) {
  auto edges = g.directed_vector();
  const auto it = std::find(edges.begin(), edges.end(), e);
  if (it == edges.end()) throw Error(ErrorCode::InvalidQuery, "edge not present");
  *it = e.reversed();
  return g.with_edges(std::move(edges), g.bidirected_vector());
}

struct MecEnumeration {
  std::vector<MixedGraph> members;  // canonical order
  std::size_t size() const { return members.size(); }
  bool contains(const MixedGraph& g) const {
    return std::any_of(members.begin(), members.end(), [&](const MixedGraph& m) { return m == g; });
  }
};

/// Closure of g under reversals of reversible edges.
inline MecEnumeration mec_enumerate(const MixedGraph& g, const Limits& limits = {}) {
  require_dag(g);
  std::set<std::vector<Edge>> seen{g.directed_vector()};
  std::deque<MixedGraph> queue{g};
  MecEnumeration out;
  while (!queue.empty()) {
    MixedGraph current = std::move(queue.front());
    queue.pop_front();
    for (const Edge& e : reversible_edges(current)) {
      MixedGraph next = reverse_edge(current, e);
      if (seen.insert(next.directed_vector()).second) {
        if (seen.size() > limits.mec_cap)
          throw Error(ErrorCode::EnumerationCapExceeded, "MEC larger than cap " + std::to_string(limits.mec_cap));
        queue.push_back(std::move(next));
      }
    }
    out.members.push_back(std::move(current));
  }
  std::sort(out.members.begin(), out.members.end(),
            [](const MixedGraph& a, const MixedGraph& b) { return a.canonical_less(b); });
  return out;
}

/// Every graph of g's kind on the same vertices with g's signature.
inline MecEnumeration mec_enumerate_oracle(const MixedGraph& g, const Limits& limits = {}) {
  const DsepSignature target = dsep_signature(g, limits);
  MecEnumeration out;
  for_each_graph(g.num_vertices(), g.kind(), [&](const MixedGraph& h) {
    if (dsep_signature(h, limits) == target) out.members.push_back(h);
  });
  std::sort(out.members.begin(), out.members.end(),
            [](const MixedGraph& a, const MixedGraph& b) { return a.canonical_less(b); });
  return out;
}

}  // namespace causalmec
