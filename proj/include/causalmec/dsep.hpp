#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "causalmec/error.hpp"
#include "causalmec/graph.hpp"
#include "causalmec/limits.hpp"
#include "causalmec/vertex_set.hpp"

namespace causalmec {

struct DsepQuery {
  VertexId x = 0;
  VertexId y = 0;
  VertexSet z;
};

inline void validate_query(const MixedGraph& g, const DsepQuery& q) {
  const int n = g.num_vertices();
  if (q.x < 1 || q.x > n || q.y < 1 || q.y > n) throw Error(ErrorCode::InvalidQuery, "query endpoint out of range");
  if (q.x == q.y) throw Error(ErrorCode::InvalidQuery, "query endpoints must differ");
  if (q.z.universe() != n) throw Error(ErrorCode::InvalidQuery, "conditioning set over the wrong universe");
  if (q.z.contains(q.x) || q.z.contains(q.y))
    throw Error(ErrorCode::InvalidQuery, "conditioning set must exclude both endpoints");
}

namespace detail {

/// Z together with every vertex that has a descendant in Z: the set of
/// vertices at which a collider is open.
inline Mask open_colliders(const MixedGraph& g, Mask z) {
  Mask reach = z;
  Mask frontier = z;
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= g.parent_mask(std::countr_zero(f) + 1);
    frontier = next & ~reach;
    reach |= next;
  }
  return reach;
}

/// State search over (vertex, arrived-with-arrowhead). Requires n <= 64.
inline bool d_connected_masks(const MixedGraph& g, VertexId x, VertexId y, Mask z, Mask open) {
  Mask seen_head = 0;  // reached via an edge with an arrowhead at the vertex
  Mask seen_tail = 0;  // reached via an edge with a tail at the vertex
  VertexId stack_v[2 * MixedGraph::kMaskLimit];
  bool stack_h[2 * MixedGraph::kMaskLimit];
  int top = 0;
  const Mask target = vertex_bit(y);

  auto arrive = [&](Mask targets, bool head) {
    Mask& seen = head ? seen_head : seen_tail;
    Mask fresh = targets & ~seen;
    seen |= fresh;
    for (; fresh; fresh &= fresh - 1) {
      stack_v[top] = std::countr_zero(fresh) + 1;
      stack_h[top] = head;
      ++top;
    }
  };

  arrive(g.child_mask(x) | g.sibling_mask(x), true);
  arrive(g.parent_mask(x), false);
  while (top > 0) {
    if ((seen_head | seen_tail) & target) return true;
    --top;
    const VertexId u = stack_v[top];
    const bool head_in = stack_h[top];
    const Mask bit = vertex_bit(u);
    const bool blocked = (z & bit) != 0;
    if (head_in) {
      if (open & bit) {
        arrive(g.parent_mask(u), false);
        arrive(g.sibling_mask(u), true);
      }
      if (!blocked) arrive(g.child_mask(u), true);
    } else if (!blocked) {
      arrive(g.child_mask(u) | g.sibling_mask(u), true);
      arrive(g.parent_mask(u), false);
    }
  }
  return ((seen_head | seen_tail) & target) != 0;
}

inline bool d_connected_general(const MixedGraph& g, const DsepQuery& q) {
  const int n = g.num_vertices();
  const auto idx = [](VertexId v) { return static_cast<std::size_t>(v - 1); };
  std::vector<char> open(static_cast<std::size_t>(n), 0);
  std::vector<VertexId> work;
  for (VertexId v : q.z) {
    open[idx(v)] = 1;
    work.push_back(v);
  }
  while (!work.empty()) {
    const VertexId u = work.back();
    work.pop_back();
    for (VertexId p : g.parent_list(u))
      if (!open[idx(p)]) {
        open[idx(p)] = 1;
        work.push_back(p);
      }
  }

  std::vector<char> seen_head(static_cast<std::size_t>(n), 0), seen_tail(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<VertexId, bool>> stack;
  auto arrive = [&](std::span<const VertexId> targets, bool head) {
    auto& seen = head ? seen_head : seen_tail;
    for (VertexId t : targets)
      if (!seen[idx(t)]) {
        seen[idx(t)] = 1;
        stack.emplace_back(t, head);
      }
  };
  arrive(g.child_list(q.x), true);
  arrive(g.sibling_list(q.x), true);
  arrive(g.parent_list(q.x), false);
  while (!stack.empty()) {
    if (seen_head[idx(q.y)] || seen_tail[idx(q.y)]) return true;
    const auto [u, head_in] = stack.back();
    stack.pop_back();
    const bool blocked = q.z.contains(u);
    if (head_in) {
      if (open[idx(u)]) {
        arrive(g.parent_list(u), false);
        arrive(g.sibling_list(u), true);
      }
      if (!blocked) arrive(g.child_list(u), true);
    } else if (!blocked) {
      arrive(g.child_list(u), true);
      arrive(g.sibling_list(u), true);
      arrive(g.parent_list(u), false);
    }
  }
  return seen_head[idx(q.y)] || seen_tail[idx(q.y)];
}

}  // namespace detail

/// True iff some (possibly self-intersecting) path between x and y is active
/// given z: every non-collider lies outside z and every collider is in z or
/// has a descendant in z.
inline bool is_d_connected(const MixedGraph& g, const DsepQuery& q) {
  validate_query(g, q);
  if (g.has_masks()) {
    const Mask z = q.z.mask();
    return detail::d_connected_masks(g, q.x, q.y, z, detail::open_colliders(g, z));
  }
  return detail::d_connected_general(g, q);
}

inline bool is_d_connected(const MixedGraph& g, VertexId x, VertexId y, const VertexSet& z) {
  return is_d_connected(g, DsepQuery{x, y, z});
}

/// Exhaustive walk enumeration. Independent of is_d_connected: it builds its
/// own traversal table and descendant closure and checks the path condition
/// at every interior vertex of every walk that never repeats an
/// (edge, direction, arrival-type) triple.
inline bool is_d_connected_oracle(const MixedGraph& g, const DsepQuery& q, const Limits& limits = {}) {
  const int n = g.num_vertices();
  if (n > limits.oracle_max_n)
    throw Error(ErrorCode::GraphTooLargeForOracle, "oracle limited to n <= " + std::to_string(limits.oracle_max_n));
  validate_query(g, q);

  struct Traversal {
    VertexId from, to;
    bool head_at_from, head_at_to;
  };
  std::vector<Traversal> moves;
  for (const Edge& e : g.directed_edges()) {
    moves.push_back({e.from, e.to, false, true});
    moves.push_back({e.to, e.from, true, false});
  }
  for (const Edge& e : g.bidirected_edges()) {
    moves.push_back({e.from, e.to, true, true});
    moves.push_back({e.to, e.from, true, true});
  }

  // reach[a][b]: directed path a ~> b, by Warshall closure.
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(n + 1), std::vector<char>(static_cast<std::size_t>(n + 1), 0));
  for (const Edge& e : g.directed_edges()) reach[e.from][e.to] = 1;
  for (int k = 1; k <= n; ++k)
    for (int a = 1; a <= n; ++a)
      if (reach[a][k])
        for (int b = 1; b <= n; ++b)
          if (reach[k][b]) reach[a][b] = 1;
  auto collider_open = [&](VertexId v) {
    if (q.z.contains(v)) return true;
    for (VertexId w : q.z)
      if (w != v && reach[v][w]) return true;
    return false;
  };

  std::vector<char> used(moves.size() * 2, 0);
  std::function<bool(VertexId, bool, bool)> walk = [&](VertexId u, bool head_in, bool at_start) -> bool {
    for (std::size_t i = 0; i < moves.size(); ++i) {
      const Traversal& t = moves[i];
      if (t.from != u) continue;
      const std::size_t key = i * 2 + (head_in ? 1 : 0);
      if (used[key]) continue;
      if (!at_start) {
        const bool collider = head_in && t.head_at_from;
        if (collider ? !collider_open(u) : q.z.contains(u)) continue;
      }
      if (t.to == q.y) return true;
      used[key] = 1;
      const bool found = walk(t.to, t.head_at_to, false);
      used[key] = 0;
      if (found) return true;
    }
    return false;
  };
  return walk(q.x, false, true);
}

/// Full table of d-connection answers: for each pair x < y (lexicographic)
/// and each Z over V \ {x, y}, encoded as a bitmask over the remaining
/// vertices in ascending order. A set bit means d-connected.
class DsepSignature {
 public:
  DsepSignature() = default;
  explicit DsepSignature(int n) : n_(n) {
    const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
    per_pair_ = n >= 2 ? std::size_t{1} << (n - 2) : 0;
    size_ = pairs * per_pair_;
    bits_.assign((size_ + 63) / 64, 0);
  }

  int num_vertices() const { return n_; }
  std::size_t size() const { return size_; }
  std::size_t entries_per_pair() const { return per_pair_; }

  bool bit(std::size_t i) const { return (bits_[i / 64] >> (i % 64)) & 1u; }
  void set_bit(std::size_t i) { bits_[i / 64] |= Mask{1} << (i % 64); }

  static std::size_t pair_index(int n, VertexId x, VertexId y) {
    if (x > y) std::swap(x, y);
    // pairs (1,2),(1,3),...,(1,n),(2,3),...
    const auto a = static_cast<std::size_t>(x - 1);
    const auto un = static_cast<std::size_t>(n);
    return a * un - a * (a + 1) / 2 + static_cast<std::size_t>(y - x - 1);
  }
  /// Entry for (x, y, z); z is a full vertex mask avoiding x and y.
  bool connected(VertexId x, VertexId y, Mask z) const {
    if (x > y) std::swap(x, y);
    std::size_t code = 0;
    int pos = 0;
    for (VertexId v = 1; v <= n_; ++v) {
      if (v == x || v == y) continue;
      if (z & vertex_bit(v)) code |= std::size_t{1} << pos;
      ++pos;
    }
    return bit(pair_index(n_, x, y) * per_pair_ + code);
  }
  std::size_t count_connected() const {
    std::size_t total = 0;
    for (Mask w : bits_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool operator==(const DsepSignature& o) const = default;

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(n_) * 0x9E3779B97F4A7C15ull;
    for (Mask w : bits_) h ^= std::hash<Mask>{}(w) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
  }

 private:
  int n_ = 0;
  std::size_t per_pair_ = 0;
  std::size_t size_ = 0;
  std::vector<Mask> bits_;
};

struct DsepSignatureHash {
  std::size_t operator()(const DsepSignature& s) const { return s.hash(); }
};

inline DsepSignature dsep_signature(const MixedGraph& g, const Limits& limits = {}) {
  const int n = g.num_vertices();
  if (n > limits.signature_max_n || n > 30)
    throw Error(ErrorCode::GraphTooLarge, "signature limited to n <= " + std::to_string(limits.signature_max_n));
  DsepSignature sig(n);
  if (n < 2) return sig;

  std::vector<VertexId> rest;
  rest.reserve(static_cast<std::size_t>(n));
  std::size_t index = 0;
  const std::size_t per_pair = sig.entries_per_pair();
  std::vector<Mask> open_cache(std::size_t{1} << n, 0);
  std::vector<char> open_known(std::size_t{1} << n, 0);
  for (VertexId x = 1; x <= n; ++x) {
    for (VertexId y = x + 1; y <= n; ++y) {
      rest.clear();
      for (VertexId v = 1; v <= n; ++v)
        if (v != x && v != y) rest.push_back(v);
      for (std::size_t code = 0; code < per_pair; ++code, ++index) {
        Mask z = 0;
        for (std::size_t b = 0; b < rest.size(); ++b)
          if ((code >> b) & 1u) z |= vertex_bit(rest[b]);
        if (!open_known[z]) {
          open_cache[z] = detail::open_colliders(g, z);
          open_known[z] = 1;
        }
        if (detail::d_connected_masks(g, x, y, z, open_cache[z])) sig.set_bit(index);
      }
    }
  }
  return sig;
}

}  // namespace causalmec
