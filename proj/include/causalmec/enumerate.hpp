#pragma once

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "causalmec/dsep.hpp"
#include "causalmec/error.hpp"
#include "causalmec/graph.hpp"
#include "causalmec/limits.hpp"

namespace causalmec {

constexpr int max_enumeration_n(GraphKind kind) { return kind == GraphKind::Admg ? 4 : 5; }

namespace detail {

inline bool masks_acyclic(int n, const std::vector<Mask>& parent_of) {
  Mask remaining = n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
  while (remaining) {
    Mask sources = 0;
    for (Mask r = remaining; r; r &= r - 1) {
      const int i = std::countr_zero(r);
      if ((parent_of[static_cast<std::size_t>(i)] & remaining) == 0) sources |= Mask{1} << i;
    }
    if (!sources) return false;
    remaining &= ~sources;
  }
  return true;
}

inline std::vector<Edge> unordered_pairs(int n) {
  std::vector<Edge> pairs;
  for (VertexId a = 1; a <= n; ++a)
    for (VertexId b = a + 1; b <= n; ++b) pairs.push_back({a, b});
  return pairs;
}

/// Every labelled DAG on n vertices as a directed edge list, in the order of
/// a base-3 counter over unordered pairs (digit 0: absent, 1: a->b, 2: b->a).
template <typename Fn>
void for_each_dag_edges(int n, Fn&& fn) {
  const auto pairs = unordered_pairs(n);
  const std::size_t m = pairs.size();
  std::vector<int> digit(m, 0);
  std::vector<Mask> parent_of(static_cast<std::size_t>(n));
  std::vector<Edge> edges;
  while (true) {
    std::fill(parent_of.begin(), parent_of.end(), 0);
    edges.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (digit[i] == 0) continue;
      const Edge e = digit[i] == 1 ? pairs[i] : pairs[i].reversed();
      edges.push_back(e);
      parent_of[static_cast<std::size_t>(e.to - 1)] |= vertex_bit(e.from);
    }
    if (masks_acyclic(n, parent_of)) fn(edges);
    std::size_t i = 0;
    while (i < m && digit[i] == 2) digit[i++] = 0;
    if (i == m) break;
    ++digit[i];
  }
}

}  // namespace detail

/// Visits every graph of the given kind on n vertices exactly once.
/// DCG: all 2^(n(n-1)) directed graphs; ADMG: every DAG times every
/// bidirected pattern.
template <typename Fn>
void for_each_graph(int n, GraphKind kind, Fn&& fn) {
  if (n < 1) throw Error(ErrorCode::VertexOutOfRange, "n must be >= 1");
  if (n > max_enumeration_n(kind))
    throw Error(ErrorCode::GraphTooLargeForOracle,
                std::string("enumeration of ") + std::string(to_string(kind)) + " limited to n <= " + std::to_string(max_enumeration_n(kind)));
  switch (kind) {
    case GraphKind::Dag:
      detail::for_each_dag_edges(n, [&](const std::vector<Edge>& edges) { fn(MixedGraph(n, edges, {}, GraphKind::Dag)); });
      break;
    case GraphKind::Admg: {
      const auto pairs = detail::unordered_pairs(n);
      detail::for_each_dag_edges(n, [&](const std::vector<Edge>& edges) {
        for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << pairs.size()); ++pattern) {
          std::vector<Edge> bidirected;
          for (std::size_t i = 0; i < pairs.size(); ++i)
            if ((pattern >> i) & 1u) bidirected.push_back(pairs[i]);
          fn(MixedGraph(n, edges, std::move(bidirected), GraphKind::Admg));
        }
      });
      break;
    }
    case GraphKind::Dcg: {
      std::vector<Edge> ordered;
      for (VertexId a = 1; a <= n; ++a)
        for (VertexId b = 1; b <= n; ++b)
          if (a != b) ordered.push_back({a, b});
      for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << ordered.size()); ++pattern) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < ordered.size(); ++i)
          if ((pattern >> i) & 1u) edges.push_back(ordered[i]);
        fn(MixedGraph(n, std::move(edges), {}, GraphKind::Dcg));
      }
      break;
    }
  }
}

inline std::vector<MixedGraph> enumerate_graphs(int n, GraphKind kind) {
  std::vector<MixedGraph> out;
  for_each_graph(n, kind, [&](const MixedGraph& g) { out.push_back(g); });
  return out;
}

using BigInt = boost::multiprecision::cpp_int;

/// Number of labelled DAGs on n vertices by inclusion-exclusion over the
/// set of sources: a_n = sum_k (-1)^(k+1) C(n,k) 2^(k(n-k)) a_(n-k).
inline BigInt dag_count_oracle(int n) {
  if (n < 0) throw Error(ErrorCode::VertexOutOfRange, "n must be >= 0");
  std::vector<BigInt> a(static_cast<std::size_t>(n) + 1);
  a[0] = 1;
  for (int m = 1; m <= n; ++m) {
    BigInt total = 0;
    BigInt binom = 1;
    for (int k = 1; k <= m; ++k) {
      binom = binom * (m - k + 1) / k;
      BigInt term = binom * (BigInt(1) << (k * (m - k))) * a[static_cast<std::size_t>(m - k)];
      if (k % 2 == 1)
        total += term;
      else
        total -= term;
    }
    a[static_cast<std::size_t>(m)] = total;
  }
  return a[static_cast<std::size_t>(n)];
}

/// Groups every graph of one kind and size by d-separation signature, so
/// the oracle MEC size of any such graph is a lookup.
class SignatureIndex {
 public:
  SignatureIndex(int n, GraphKind kind, const Limits& limits = {}) : n_(n), kind_(kind), limits_(limits) {
    for_each_graph(n, kind, [&](const MixedGraph& g) {
      ++counts_[dsep_signature(g, limits_)];
      ++total_;
    });
  }

  std::size_t class_size(const MixedGraph& g) const {
    if (g.num_vertices() != n_ || g.kind() != kind_) throw Error(ErrorCode::SizeMismatch, "graph does not match index");
    const auto it = counts_.find(dsep_signature(g, limits_));
    return it == counts_.end() ? 0 : it->second;
  }
  std::size_t num_classes() const { return counts_.size(); }
  std::size_t num_graphs() const { return total_; }

 private:
  int n_;
  GraphKind kind_;
  Limits limits_;
  std::size_t total_ = 0;
  std::unordered_map<DsepSignature, std::size_t, DsepSignatureHash> counts_;
};

}  // namespace causalmec
