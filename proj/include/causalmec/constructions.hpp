#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "causalmec/equivalence.hpp"
#include "causalmec/error.hpp"
#include "causalmec/graph.hpp"

namespace causalmec {

// ---------------------------------------------------------------------------
// DAGs: matchings of reversible layer-2 edges
// ---------------------------------------------------------------------------

/// Vertex-disjoint reversible edges from the first tower layer into the
/// second. Any subset of them can be reversed at once without leaving the
/// Markov equivalence class.
struct ReversibleMatching {
  std::vector<Edge> edges;
  VertexSet single_parent;  // layer-2 vertices with exactly one parent
  VertexSet unique_parent;  // members of single_parent whose parent is not shared within it

  std::size_t size() const { return edges.size(); }
};

inline ReversibleMatching layer2_matching(const MixedGraph& g) {
  require_dag(g);
  const int n = g.num_vertices();
  ReversibleMatching out{{}, VertexSet(n), VertexSet(n)};
  const TowerDecomposition tower = tower_decomposition(g);
  if (tower.depth() < 2) return out;

  std::map<VertexId, std::vector<VertexId>> by_parent;
  for (VertexId v : tower.layers[1]) {
    const auto pa = g.parent_list(v);
    if (pa.size() != 1) continue;
    out.single_parent.insert(v);
    by_parent[pa.front()].push_back(v);
  }
  for (auto& [parent, kids] : by_parent) {
    std::sort(kids.begin(), kids.end());
    out.edges.push_back({parent, kids.front()});
    if (kids.size() == 1) out.unique_parent.insert(kids.front());
  }
  return out;
}

/// Checks that the edges are present, reversible, and pairwise vertex-disjoint.
inline bool is_valid_matching(const MixedGraph& g, std::span<const Edge> edges) {
  if (g.kind() != GraphKind::Dag) return false;
  VertexSet used(g.num_vertices());
  for (const Edge& e : edges) {
    if (!g.has_directed(e.from, e.to) || !is_reversible(g, e)) return false;
    if (used.contains(e.from) || used.contains(e.to)) return false;
    used.insert(e.from);
    used.insert(e.to);
  }
  return true;
}

/// Reverses the matching edges selected by bit i of `mask`.
inline MixedGraph flip_matching_subset(const MixedGraph& g, const ReversibleMatching& m, std::uint64_t mask) {
  if (m.edges.size() > 64) throw Error(ErrorCode::InvalidMatching, "at most 64 edges can be addressed by a mask");
  if (!is_valid_matching(g, m.edges)) throw Error(ErrorCode::InvalidMatching, "matching is not a set of disjoint reversible edges of the graph");
  auto edges = g.directed_vector();
  for (std::size_t i = 0; i < m.edges.size(); ++i) {
    if (!((mask >> i) & 1u)) continue;
    *std::find(edges.begin(), edges.end(), m.edges[i]) = m.edges[i].reversed();
  }
  return g.with_edges(std::move(edges), {});
}

// ---------------------------------------------------------------------------
// ADMGs: the S / S-bar gadget
// ---------------------------------------------------------------------------

/// Role-labelled copy of S on (v1, v2, v3): v1 -> v2, v2 -> v3, v2 <-> v3.
/// `present` records whether the optional edge v1 -> v3 is in the graph.
struct SStructure {
  VertexId v1 = 0, v2 = 0, v3 = 0;
  bool present = false;

  std::array<VertexId, 3> vertices() const {
    std::array<VertexId, 3> s{v1, v2, v3};
    std::sort(s.begin(), s.end());
    return s;
  }
  auto operator<=>(const SStructure&) const = default;
};

struct SStructureSet {
  std::vector<SStructure> triples;    // one per vertex triple, ascending by vertex set
  std::vector<SStructure> selection;  // pairwise sharing at most one vertex

  std::size_t size() const { return triples.size(); }
};

inline bool contains_s(const MixedGraph& g, VertexId v1, VertexId v2, VertexId v3) {
  return g.has_directed(v1, v2) && g.has_directed(v2, v3) && g.has_bidirected(v2, v3);
}

inline SStructureSet find_s_structures(const MixedGraph& g) {
  if (g.kind() == GraphKind::Dcg) throw Error(ErrorCode::NotAnAdmg, "S-structures are defined on ADMGs");
  // Lexicographically smallest role assignment per vertex triple.
  std::map<std::array<VertexId, 3>, SStructure> best;
  for (VertexId v2 = 1; v2 <= g.num_vertices(); ++v2) {
    for (VertexId v3 : g.child_list(v2)) {
      if (!g.has_bidirected(v2, v3)) continue;
      for (VertexId v1 : g.parent_list(v2)) {
        if (v1 == v3) continue;
        const SStructure s{v1, v2, v3, g.has_directed(v1, v3)};
        const auto key = s.vertices();
        auto it = best.find(key);
        if (it == best.end())
          best.emplace(key, s);
        else if (std::tie(s.v1, s.v2, s.v3) < std::tie(it->second.v1, it->second.v2, it->second.v3))
          it->second = s;
      }
    }
  }
  SStructureSet out;
  for (const auto& [key, s] : best) {
    out.triples.push_back(s);
    const bool compatible = std::all_of(out.selection.begin(), out.selection.end(), [&](const SStructure& t) {
      const auto a = key;
      const auto b = t.vertices();
      int shared = 0;
      for (VertexId x : a) shared += static_cast<int>(std::count(b.begin(), b.end(), x));
      return shared <= 1;
    });
    if (compatible) out.selection.push_back(s);
  }
  return out;
}

/// Adds v1 -> v3 if absent, removes it if present.
inline MixedGraph toggle_underdetermined_edge(const MixedGraph& g, const SStructure& s) {
  if (g.kind() == GraphKind::Dcg || !contains_s(g, s.v1, s.v2, s.v3))
    throw Error(ErrorCode::TripleNotAnSStructure, "graph does not contain S on the given roles");
  auto edges = g.directed_vector();
  const Edge optional{s.v1, s.v3};
  if (const auto it = std::find(edges.begin(), edges.end(), optional); it != edges.end())
    edges.erase(it);
  else
    edges.push_back(optional);
  return g.with_edges(std::move(edges), g.bidirected_vector());
}

// ---------------------------------------------------------------------------
// DCGs: cycle reversal and packing
// ---------------------------------------------------------------------------

inline bool is_directed_cycle(const MixedGraph& g, std::span<const VertexId> cycle) {
  const std::size_t k = cycle.size();
  if (k < 2) return false;
  std::vector<VertexId> sorted(cycle.begin(), cycle.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 0; i < k; ++i)
    if (!g.has_directed(cycle[i], cycle[(i + 1) % k])) return false;
  return true;
}

namespace detail {

inline std::vector<Edge> reversed_cycle_edges(const MixedGraph& g, std::span<const VertexId> cycle) {
  if (g.kind() != GraphKind::Dcg) throw Error(ErrorCode::NotADcg, "cycle reversal is defined on DCGs");
  if (cycle.size() < 3) throw Error(ErrorCode::CycleTooShort, "cycle must have length >= 3");
  for (VertexId v : cycle)
    if (v < 1 || v > g.num_vertices()) throw Error(ErrorCode::VertexOutOfRange, "cycle vertex " + std::to_string(v));
  if (!is_directed_cycle(g, cycle)) throw Error(ErrorCode::NotACycle, "vertex list is not a directed cycle of the graph");

  const auto k = static_cast<int>(cycle.size());
  std::vector<int> pos(static_cast<std::size_t>(g.num_vertices()) + 1, -1);
  for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(cycle[static_cast<std::size_t>(i)])] = i;
  auto at = [&](int i) { return cycle[static_cast<std::size_t>(((i % k) + k) % k)]; };

  std::vector<Edge> out;
  out.reserve(g.num_directed());
  for (const Edge& e : g.directed_edges()) {
    const int pa = pos[static_cast<std::size_t>(e.from)];
    const int pb = pos[static_cast<std::size_t>(e.to)];
    if (pa >= 0 && pb >= 0 && pb == (pa + 1) % k)
      out.push_back(e.reversed());  // cycle edge
    else if (pb >= 0)
      out.push_back({e.from, at(pb - 1)});  // in-edge shifted one step back along the cycle
    else
      out.push_back(e);
  }
  return out;
}

}  // namespace detail

/// Reverses the cycle and moves every other in-edge w -> v_i of a cycle
/// vertex to w -> v_{i-1}. Parallel edges produced by the move merge.
inline MixedGraph reverse_cycle(const MixedGraph& g, std::span<const VertexId> cycle) {
  return g.with_edges(detail::reversed_cycle_edges(g, cycle), {});
}

/// True when reverse_cycle would merge two edges into one.
inline bool reverse_cycle_merges(const MixedGraph& g, std::span<const VertexId> cycle) {
  auto edges = detail::reversed_cycle_edges(g, cycle);
  std::sort(edges.begin(), edges.end());
  return std::adjacent_find(edges.begin(), edges.end()) != edges.end();
}

/// The reversed orientation of a cycle, (v1, vk, ..., v2).
inline std::vector<VertexId> reversed_cycle(std::span<const VertexId> cycle) {
  std::vector<VertexId> out(cycle.begin(), cycle.end());
  if (out.size() > 1) std::reverse(out.begin() + 1, out.end());
  return out;
}

/// All simple directed cycles with at least `min_length` vertices, each
/// listed once starting from its smallest vertex. Exponential; small graphs only.
inline std::vector<std::vector<VertexId>> simple_cycles(const MixedGraph& g, std::size_t min_length = 3) {
  std::vector<std::vector<VertexId>> out;
  const int n = g.num_vertices();
  std::vector<VertexId> path;
  std::vector<char> on_path(static_cast<std::size_t>(n) + 1, 0);
  auto dfs = [&](auto&& self, VertexId start, VertexId u) -> void {
    for (VertexId w : g.child_list(u)) {
      if (w == start && path.size() >= min_length) out.push_back(path);
      if (w <= start || on_path[static_cast<std::size_t>(w)]) continue;
      path.push_back(w);
      on_path[static_cast<std::size_t>(w)] = 1;
      self(self, start, w);
      on_path[static_cast<std::size_t>(w)] = 0;
      path.pop_back();
    }
  };
  for (VertexId s = 1; s <= n; ++s) {
    path.assign(1, s);
    on_path[static_cast<std::size_t>(s)] = 1;
    dfs(dfs, s, s);
    on_path[static_cast<std::size_t>(s)] = 0;
  }
  return out;
}

struct CyclePacking {
  std::vector<std::vector<VertexId>> cycles;
  std::size_t size() const { return cycles.size(); }
};

/// Greedy packing: repeatedly take a shortest cycle of length >= 3 among the
/// remaining vertices and delete its vertices. A cycle is listed from its
/// smallest vertex s; ties in length go to the smaller s, then the smaller
/// second vertex, then the smaller last vertex.
inline CyclePacking cycle_packing(const MixedGraph& g) {
  if (g.kind() != GraphKind::Dcg) throw Error(ErrorCode::NotADcg, "cycle packing is defined on DCGs");
  const int n = g.num_vertices();
  const auto idx = [](VertexId v) { return static_cast<std::size_t>(v); };
  std::vector<char> alive(idx(n) + 1, 1);
  std::vector<int> dist(idx(n) + 1);
  std::vector<VertexId> from(idx(n) + 1), queue;
  CyclePacking out;

  while (true) {
    std::optional<std::vector<VertexId>> best;
    for (VertexId s = 1; s <= n; ++s) {
      if (!alive[idx(s)]) continue;
      if (best && best->size() == 3) break;
      for (VertexId a : g.child_list(s)) {
        if (a <= s || !alive[idx(a)]) continue;
        // BFS from a over vertices > s, excluding s.
        std::fill(dist.begin(), dist.end(), -1);
        queue.assign(1, a);
        dist[idx(a)] = 0;
        const int limit = best ? static_cast<int>(best->size()) - 2 : n;
        VertexId closing = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
          const VertexId u = queue[head];
          if (dist[idx(u)] >= 1 && g.has_directed(u, s)) {
            // first vertex at minimal depth; BFS order is not vertex order,
            // so keep scanning this depth for a smaller one
            if (closing == 0 || (dist[idx(u)] == dist[idx(closing)] && u < closing)) closing = u;
          }
          if (closing != 0 && dist[idx(u)] > dist[idx(closing)]) break;
          if (dist[idx(u)] + 1 > limit) continue;
          for (VertexId w : g.child_list(u)) {
            if (w <= s || !alive[idx(w)] || dist[idx(w)] >= 0) continue;
            dist[idx(w)] = dist[idx(u)] + 1;
            from[idx(w)] = u;
            queue.push_back(w);
          }
        }
        if (closing == 0) continue;
        const std::size_t length = static_cast<std::size_t>(dist[idx(closing)]) + 2;
        if (best && length >= best->size()) continue;
        std::vector<VertexId> cycle;
        for (VertexId v = closing; v != a; v = from[idx(v)]) cycle.push_back(v);
        cycle.push_back(a);
        cycle.push_back(s);
        std::reverse(cycle.begin(), cycle.end());
        best = std::move(cycle);
      }
    }
    if (!best) break;
    for (VertexId v : *best) alive[idx(v)] = 0;
    out.cycles.push_back(std::move(*best));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// Witness that |MEC(g)| >= 2^log2_bound.
struct LowerBoundCertificate {
  std::variant<ReversibleMatching, SStructureSet, CyclePacking> payload;
  std::size_t log2_bound = 0;
};

inline LowerBoundCertificate certificate(const MixedGraph& g) {
  switch (g.kind()) {
    case GraphKind::Dag: {
      auto m = layer2_matching(g);
      const std::size_t bound = m.size();
      return {std::move(m), bound};
    }
    case GraphKind::Admg: {
      auto s = find_s_structures(g);
      const std::size_t bound = s.selection.size();
      return {std::move(s), bound};
    }
    case GraphKind::Dcg: {
      auto c = cycle_packing(g);
      const std::size_t bound = c.size();
      return {std::move(c), bound};
    }
  }
  return {};
}

inline std::string format_certificate(const LowerBoundCertificate& cert) {
  std::ostringstream out;
  std::visit(
      [&](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, ReversibleMatching>) {
          out << "certificate=reversible-layer2-matching\n";
          for (const Edge& e : payload.edges) out << "edge " << e.from << " -> " << e.to << '\n';
        } else if constexpr (std::is_same_v<T, SStructureSet>) {
          out << "certificate=s-structures triples=" << payload.size() << '\n';
          for (const SStructure& s : payload.selection)
            out << "triple " << s.v1 << ' ' << s.v2 << ' ' << s.v3 << " optional_edge=" << (s.present ? "present" : "absent") << '\n';
        } else {
          out << "certificate=cycle-packing\n";
          for (const auto& c : payload.cycles) {
            out << "cycle";
            for (VertexId v : c) out << ' ' << v;
            out << '\n';
          }
        }
      },
      cert.payload);
  out << "log2_mec_lower_bound=" << cert.log2_bound << '\n';
  return out.str();
}

}  // namespace causalmec
