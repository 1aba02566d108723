#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalmec/error.hpp"
#include "causalmec/vertex_set.hpp"

namespace causalmec {

enum class GraphKind { Dag, Admg, Dcg };

constexpr std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Dag: return "dag";
    case GraphKind::Admg: return "admg";
    case GraphKind::Dcg: return "dcg";
  }
  return "?";
}

inline std::optional<GraphKind> parse_kind(std::string_view s) {
  if (s == "dag") return GraphKind::Dag;
  if (s == "admg") return GraphKind::Admg;
  if (s == "dcg") return GraphKind::Dcg;
  return std::nullopt;
}

/// Directed edge from -> to, or (when used for bidirected edges) the
/// unordered pair {from, to} normalized so that from < to.
struct Edge {
  VertexId from = 0;
  VertexId to = 0;

  auto operator<=>(const Edge&) const = default;
  Edge reversed() const { return {to, from}; }
};

/// Immutable directed mixed graph on vertices 1..n.
///
/// Edge lists are kept sorted and deduplicated; per-vertex adjacency is
/// stored as sorted lists, and for n <= 64 additionally as bit masks which
/// the exhaustive oracles and d-separation engine use.
class MixedGraph {
 public:
  static constexpr int kMaskLimit = 64;

  MixedGraph() = default;

  /// Validates and builds the graph. Duplicate edges collapse to one.
  MixedGraph(int n, std::vector<Edge> directed, std::vector<Edge> bidirected, GraphKind kind)
      : n_(n), kind_(kind), directed_(std::move(directed)), bidirected_(std::move(bidirected)) {
    if (n < 1) throw Error(ErrorCode::VertexOutOfRange, "graph needs n >= 1");
    auto check_edge = [n](const Edge& e) {
      if (e.from < 1 || e.from > n || e.to < 1 || e.to > n)
        throw Error(ErrorCode::VertexOutOfRange,
                    "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ") with n=" + std::to_string(n));
      if (e.from == e.to) throw Error(ErrorCode::SelfLoop, "self-loop at " + std::to_string(e.from));
    };
    for (const Edge& e : directed_) check_edge(e);
    for (Edge& e : bidirected_) {
      check_edge(e);
      if (e.from > e.to) std::swap(e.from, e.to);
    }
    std::sort(directed_.begin(), directed_.end());
    directed_.erase(std::unique(directed_.begin(), directed_.end()), directed_.end());
    std::sort(bidirected_.begin(), bidirected_.end());
    bidirected_.erase(std::unique(bidirected_.begin(), bidirected_.end()), bidirected_.end());

    if (kind_ != GraphKind::Admg && !bidirected_.empty())
      throw Error(ErrorCode::BidirectedInWrongKind, std::string("bidirected edge in a ") + std::string(to_string(kind_)));

    build_adjacency();

    if (kind_ != GraphKind::Dcg && !directed_part_acyclic())
      throw Error(ErrorCode::CycleInAcyclicKind, std::string("directed cycle in a ") + std::string(to_string(kind_)));
  }

  int num_vertices() const { return n_; }
  GraphKind kind() const { return kind_; }

  std::span<const Edge> directed_edges() const { return directed_; }
  std::span<const Edge> bidirected_edges() const { return bidirected_; }
  std::size_t num_directed() const { return directed_.size(); }
  std::size_t num_bidirected() const { return bidirected_.size(); }

  std::span<const VertexId> parent_list(VertexId v) const { return parents_[index(v)]; }
  std::span<const VertexId> child_list(VertexId v) const { return children_[index(v)]; }
  std::span<const VertexId> sibling_list(VertexId v) const { return siblings_[index(v)]; }

  bool has_directed(VertexId u, VertexId v) const {
    if (u < 1 || u > n_ || v < 1 || v > n_) return false;
    const auto& c = children_[static_cast<std::size_t>(u - 1)];
    return std::binary_search(c.begin(), c.end(), v);
  }
  bool has_bidirected(VertexId u, VertexId v) const {
    if (u < 1 || u > n_ || v < 1 || v > n_) return false;
    const auto& s = siblings_[static_cast<std::size_t>(u - 1)];
    return std::binary_search(s.begin(), s.end(), v);
  }
  /// Any edge, of any type or direction, between u and v.
  bool adjacent(VertexId u, VertexId v) const {
    return has_directed(u, v) || has_directed(v, u) || has_bidirected(u, v);
  }

  bool has_masks() const { return n_ <= kMaskLimit; }
  Mask parent_mask(VertexId v) const { return parent_masks_[index(v)]; }
  Mask child_mask(VertexId v) const { return child_masks_[index(v)]; }
  Mask sibling_mask(VertexId v) const { return sibling_masks_[index(v)]; }

  /// Same kind and vertex count, with a different edge set.
  MixedGraph with_edges(std::vector<Edge> directed, std::vector<Edge> bidirected) const {
    return MixedGraph(n_, std::move(directed), std::move(bidirected), kind_);
  }
  std::vector<Edge> directed_vector() const { return directed_; }
  std::vector<Edge> bidirected_vector() const { return bidirected_; }

  bool operator==(const MixedGraph& o) const {
    return n_ == o.n_ && kind_ == o.kind_ && directed_ == o.directed_ && bidirected_ == o.bidirected_;
  }
  /// Canonical order: (directed edge list, bidirected edge list), lexicographic.
  bool canonical_less(const MixedGraph& o) const {
    if (directed_ != o.directed_) return directed_ < o.directed_;
    return bidirected_ < o.bidirected_;
  }

  bool directed_part_acyclic() const {
    std::vector<int> indegree(static_cast<std::size_t>(n_), 0);
    for (const Edge& e : directed_) ++indegree[static_cast<std::size_t>(e.to - 1)];
    std::vector<VertexId> stack;
    for (VertexId v = 1; v <= n_; ++v)
      if (indegree[static_cast<std::size_t>(v - 1)] == 0) stack.push_back(v);
    int removed = 0;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      ++removed;
      for (VertexId w : children_[static_cast<std::size_t>(u - 1)])
        if (--indegree[static_cast<std::size_t>(w - 1)] == 0) stack.push_back(w);
    }
    return removed == n_;
  }

 private:
  std::size_t index(VertexId v) const {
    if (v < 1 || v > n_) throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v));
    return static_cast<std::size_t>(v - 1);
  }

  void build_adjacency() {
    const auto n = static_cast<std::size_t>(n_);
    parents_.assign(n, {});
    children_.assign(n, {});
    siblings_.assign(n, {});
    for (const Edge& e : directed_) {
      children_[static_cast<std::size_t>(e.from - 1)].push_back(e.to);
      parents_[static_cast<std::size_t>(e.to - 1)].push_back(e.from);
    }
    for (const Edge& e : bidirected_) {
      siblings_[static_cast<std::size_t>(e.from - 1)].push_back(e.to);
      siblings_[static_cast<std::size_t>(e.to - 1)].push_back(e.from);
    }
    for (auto* lists : {&parents_, &children_, &siblings_})
      for (auto& l : *lists) std::sort(l.begin(), l.end());

    if (has_masks()) {
      parent_masks_.assign(n, 0);
      child_masks_.assign(n, 0);
      sibling_masks_.assign(n, 0);
      for (const Edge& e : directed_) {
        child_masks_[static_cast<std::size_t>(e.from - 1)] |= vertex_bit(e.to);
        parent_masks_[static_cast<std::size_t>(e.to - 1)] |= vertex_bit(e.from);
      }
      for (const Edge& e : bidirected_) {
        sibling_masks_[static_cast<std::size_t>(e.from - 1)] |= vertex_bit(e.to);
        sibling_masks_[static_cast<std::size_t>(e.to - 1)] |= vertex_bit(e.from);
      }
    }
  }

  int n_ = 0;
  GraphKind kind_ = GraphKind::Dag;
  std::vector<Edge> directed_;
  std::vector<Edge> bidirected_;
  std::vector<std::vector<VertexId>> parents_, children_, siblings_;
  std::vector<Mask> parent_masks_, child_masks_, sibling_masks_;
};

inline MixedGraph make_graph(int n, std::vector<Edge> directed, std::vector<Edge> bidirected, GraphKind kind) {
  return MixedGraph(n, std::move(directed), std::move(bidirected), kind);
}

/// True iff the directed part has no directed cycle; bidirected edges are ignored.
inline bool is_acyclic(const MixedGraph& g) { return g.directed_part_acyclic(); }

inline VertexSet parents(const MixedGraph& g, VertexId v) {
  return VertexSet::from_range(g.num_vertices(), g.parent_list(v));
}

inline VertexSet children(const MixedGraph& g, VertexId v) {
  return VertexSet::from_range(g.num_vertices(), g.child_list(v));
}

/// Vertices reachable from v by a directed path; v itself is never included.
inline VertexSet descendants(const MixedGraph& g, VertexId v) {
  VertexSet seen(g.num_vertices());
  std::vector<VertexId> stack(g.child_list(v).begin(), g.child_list(v).end());
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    if (u == v || seen.contains(u)) continue;
    seen.insert(u);
    for (VertexId w : g.child_list(u))
      if (!seen.contains(w)) stack.push_back(w);
  }
  return seen;
}

/// Descendant masks for all vertices of a graph with n <= 64.
inline std::vector<Mask> descendant_masks(const MixedGraph& g) {
  const int n = g.num_vertices();
  std::vector<Mask> out(static_cast<std::size_t>(n), 0);
  for (VertexId v = 1; v <= n; ++v) {
    Mask reach = g.child_mask(v);
    Mask frontier = reach;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= g.child_mask(std::countr_zero(f) + 1);
      frontier = next & ~reach;
      reach |= next;
    }
    out[static_cast<std::size_t>(v - 1)] = reach & ~vertex_bit(v);
  }
  return out;
}

/// Layer partition (H_1, ..., H_s) of an acyclic directed part by repeated
/// source stripping.
struct TowerDecomposition {
  std::vector<std::vector<VertexId>> layers;
  std::vector<int> layer_of;  // indexed by vertex-1, 1-based layer number

  std::vector<int> vector() const {
    std::vector<int> h;
    h.reserve(layers.size());
    for (const auto& l : layers) h.push_back(static_cast<int>(l.size()));
    return h;
  }
  int layer(VertexId v) const { return layer_of[static_cast<std::size_t>(v - 1)]; }
  std::size_t depth() const { return layers.size(); }
};

inline TowerDecomposition tower_decomposition(const MixedGraph& g) {
  const int n = g.num_vertices();
  TowerDecomposition t;
  t.layer_of.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.directed_edges()) ++indegree[static_cast<std::size_t>(e.to - 1)];
  std::vector<VertexId> current;
  for (VertexId v = 1; v <= n; ++v)
    if (indegree[static_cast<std::size_t>(v - 1)] == 0) current.push_back(v);
  int placed = 0;
  while (!current.empty()) {
    const int layer_number = static_cast<int>(t.layers.size()) + 1;
    std::vector<VertexId> next;
    for (VertexId u : current) {
      t.layer_of[static_cast<std::size_t>(u - 1)] = layer_number;
      for (VertexId w : g.child_list(u))
        if (--indegree[static_cast<std::size_t>(w - 1)] == 0) next.push_back(w);
    }
    placed += static_cast<int>(current.size());
    std::sort(next.begin(), next.end());
    t.layers.push_back(std::move(current));
    current = std::move(next);
  }
  if (placed != n) throw Error(ErrorCode::CyclicInput, "tower decomposition needs an acyclic directed part");
  return t;
}

/// Keeps only directed edges between consecutive layers; drops bidirected edges.
inline MixedGraph tower_graph(const MixedGraph& g) {
  const TowerDecomposition t = tower_decomposition(g);
  std::vector<Edge> kept;
  for (const Edge& e : g.directed_edges())
    if (t.layer(e.to) == t.layer(e.from) + 1) kept.push_back(e);
  return g.with_edges(std::move(kept), {});
}

/// Restriction to w, relabelled 1..|w| in ascending order.
inline MixedGraph induced_subgraph(const MixedGraph& g, const VertexSet& w) {
  std::vector<int> relabel(static_cast<std::size_t>(g.num_vertices()) + 1, 0);
  int next = 0;
  for (VertexId v : w) relabel[static_cast<std::size_t>(v)] = ++next;
  if (next == 0) throw Error(ErrorCode::VertexOutOfRange, "induced subgraph on an empty vertex set");
  auto in_w = [&](VertexId v) { return relabel[static_cast<std::size_t>(v)] != 0; };
  auto map = [&](VertexId v) { return relabel[static_cast<std::size_t>(v)]; };
  std::vector<Edge> directed, bidirected;
  for (const Edge& e : g.directed_edges())
    if (in_w(e.from) && in_w(e.to)) directed.push_back({map(e.from), map(e.to)});
  for (const Edge& e : g.bidirected_edges())
    if (in_w(e.from) && in_w(e.to)) bidirected.push_back({map(e.from), map(e.to)});
  return MixedGraph(next, std::move(directed), std::move(bidirected), g.kind());
}

}  // namespace causalmec
