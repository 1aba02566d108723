#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "causalmec/error.hpp"
#include "causalmec/graph.hpp"
#include "causalmec/log_weight.hpp"
#include "causalmec/rng.hpp"

namespace causalmec {

inline void validate_p(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidP, "edge probability must lie in [0, 1), got " + std::to_string(p));
}

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(1 - (1-p)^k) for p in [0, 1).
inline double log_one_minus_q_pow(double log_q, double k) {
  const double x = -std::expm1(k * log_q);
  return x > 0.0 ? std::log(x) : kNegInf;
}

}  // namespace detail

/// Unnormalized weight of a tower vector under D(n, p):
///   n! / prod(h_i!) * prod_{k>=2} (1-(1-p)^{h_{k-1}})^{h_k} / (1-p)^{h_k * (h_1+...+h_{k-1})}.
inline LogWeight tower_vector_weight(std::span<const int> h, int n, double p) {
  validate_p(p);
  long long sum = 0;
  for (int x : h) {
    if (x < 1) throw Error(ErrorCode::InvalidTowerVector, "tower vector entries must be positive");
    sum += x;
  }
  if (h.empty() || sum != n) throw Error(ErrorCode::InvalidTowerVector, "tower vector must sum to n");
  const double log_q = std::log1p(-p);
  double acc = std::lgamma(n + 1.0);
  double placed = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    acc -= std::lgamma(h[k] + 1.0);
    if (k > 0) {
      const double ratio = detail::log_one_minus_q_pow(log_q, h[k - 1]);
      if (ratio == detail::kNegInf) return LogWeight::zero();
      acc += h[k] * ratio - h[k] * placed * log_q;
    }
    placed += h[k];
  }
  return LogWeight::from_log(acc);
}

/// Backward dynamic program over tower vectors of D(n, p).
///
/// completion(m, l) is the log of the total weight of all ways to finish a
/// tower vector when m vertices have been placed and the last layer has l
/// vertices. Layer factors carry 1/l! each; the n! of the multinomial is
/// left to the uniform label assignment.
class TowerVectorDp {
 public:
  TowerVectorDp(int n, double p) : n_(n), p_(p), log_q_(std::log1p(-p)) {
    validate_p(p);
    if (n < 1) throw Error(ErrorCode::VertexOutOfRange, "n must be >= 1");
    table_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2, detail::kNegInf);
    for (int l = 1; l <= n; ++l) at(n, l) = 0.0;
    if (p > 0.0) fill();

    std::vector<double> first(static_cast<std::size_t>(n));
    for (int l = 1; l <= n; ++l) first[static_cast<std::size_t>(l - 1)] = log_first_factor(l) + completion(l, l);
    log_total_ = log_sum_exp(first);
  }

  int n() const { return n_; }
  double p() const { return p_; }

  double completion(int m, int l) const { return table_[offset(m, l)]; }

  /// Log of sum over all tower vectors of w(h) / n!.
  double log_total() const { return log_total_; }

  /// log[(1-(1-p)^prev)^l / ((1-p)^(l*placed) * l!)]
  double log_layer_factor(int prev, int l, int placed) const {
    if (p_ == 0.0) return detail::kNegInf;
    return l * detail::log_one_minus_q_pow(log_q_, prev) - static_cast<double>(l) * placed * log_q_ - std::lgamma(l + 1.0);
  }
  double log_first_factor(int l) const { return -std::lgamma(l + 1.0); }

  /// Exact probability of a tower vector.
  double probability(std::span<const int> h) const {
    return std::exp(tower_vector_weight(h, n_, p_).log() - std::lgamma(n_ + 1.0) - log_total_);
  }

  std::vector<int> sample_tower_vector(Rng& rng) const {
    std::vector<int> h;
    int placed = 0;
    int last = 0;
    std::vector<double> terms;
    while (placed < n_) {
      const int room = n_ - placed;
      terms.resize(static_cast<std::size_t>(room));
      for (int l = 1; l <= room; ++l) {
        const double factor = placed == 0 ? log_first_factor(l) : log_layer_factor(last, l, placed);
        terms[static_cast<std::size_t>(l - 1)] = factor + completion(placed + l, l);
      }
      const double norm = placed == 0 ? log_total_ : completion(placed, last);
      const double u = rng.uniform();
      double cumulative = 0.0;
      int chosen = 0;
      for (int l = 1; l <= room; ++l) {
        const double t = terms[static_cast<std::size_t>(l - 1)];
        if (t == detail::kNegInf) continue;
        chosen = l;
        cumulative += std::exp(t - norm);
        if (u < cumulative) break;
      }
      h.push_back(chosen);
      placed += chosen;
      last = chosen;
    }
    return h;
  }

 private:
  std::size_t offset(int m, int l) const {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(m - 1) / 2 + static_cast<std::size_t>(l - 1);
  }
  double& at(int m, int l) { return table_[offset(m, l)]; }

  // For fixed m, completion(m, l) = log sum_{l'} a_l^{l'} B(l') with
  // a_l = 1-(1-p)^l and B independent of l. The sum is evaluated in linear
  // space after scaling B by its maximum, falling back to a log-space sum
  // when the scaled result underflows.
  void fill() {
    const int n = n_;
    std::vector<double> log_a(static_cast<std::size_t>(n) + 1), a(static_cast<std::size_t>(n) + 1);
    for (int l = 1; l <= n; ++l) {
      log_a[static_cast<std::size_t>(l)] = detail::log_one_minus_q_pow(log_q_, l);
      a[static_cast<std::size_t>(l)] = std::exp(log_a[static_cast<std::size_t>(l)]);
    }
    std::vector<double> log_b(static_cast<std::size_t>(n) + 1), scaled_b(static_cast<std::size_t>(n) + 1);
    std::vector<double> power(static_cast<std::size_t>(n) + 1), acc(static_cast<std::size_t>(n) + 1);
    std::vector<double> fallback(static_cast<std::size_t>(n));
    for (int m = n - 1; m >= 1; --m) {
      const int room = n - m;
      double hi = detail::kNegInf;
      for (int l2 = 1; l2 <= room; ++l2) {
        const double v = -static_cast<double>(l2) * m * log_q_ - std::lgamma(l2 + 1.0) + completion(m + l2, l2);
        log_b[static_cast<std::size_t>(l2)] = v;
        hi = std::max(hi, v);
      }
      for (int l2 = 1; l2 <= room; ++l2) scaled_b[static_cast<std::size_t>(l2)] = std::exp(log_b[static_cast<std::size_t>(l2)] - hi);

      double* const pw = power.data();
      double* const ac = acc.data();
      const double* const av = a.data();
      for (int l = 1; l <= m; ++l) {
        pw[l] = 1.0;
        ac[l] = 0.0;
      }
      for (int l2 = 1; l2 <= room; ++l2) {
        const double b = scaled_b[static_cast<std::size_t>(l2)];
        for (int l = 1; l <= m; ++l) {
          pw[l] *= av[l];
          ac[l] += pw[l] * b;
        }
      }
      for (int l = 1; l <= m; ++l) {
        if (ac[l] > 1e-250) {
          at(m, l) = hi + std::log(ac[l]);
          continue;
        }
        for (int l2 = 1; l2 <= room; ++l2)
          fallback[static_cast<std::size_t>(l2 - 1)] = l2 * log_a[static_cast<std::size_t>(l)] + log_b[static_cast<std::size_t>(l2)];
        at(m, l) = log_sum_exp(std::span<const double>(fallback.data(), static_cast<std::size_t>(room)));
      }
    }
  }

  int n_;
  double p_;
  double log_q_;
  double log_total_ = 0.0;
  std::vector<double> table_;
};

/// Shared, lazily built DP tables keyed by (n, p).
inline std::shared_ptr<const TowerVectorDp> tower_dp(int n, double p) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const TowerVectorDp>> cache;
  validate_p(p);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, p}); it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const TowerVectorDp>(n, p);
  std::lock_guard lock(mutex);
  return cache.emplace(std::make_pair(n, p), std::move(table)).first->second;
}

namespace detail {

/// Size k of a Binomial(trials, p) draw conditioned on k >= 1, by inverse CDF.
inline int conditioned_binomial(Rng& rng, int trials, double p) {
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_norm = log_one_minus_q_pow(log_q, trials);
  double log_pmf = std::log(static_cast<double>(trials)) + log_p + (trials - 1) * log_q - log_norm;
  double cumulative = std::exp(log_pmf);
  const double u = rng.uniform();
  int k = 1;
  while (u >= cumulative && k < trials) {
    log_pmf += std::log(static_cast<double>(trials - k) / (k + 1)) + log_p - log_q;
    cumulative += std::exp(log_pmf);
    ++k;
  }
  return k;
}

inline bool edges_acyclic(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<VertexId>> out(static_cast<std::size_t>(n));
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges) {
    out[static_cast<std::size_t>(e.from - 1)].push_back(e.to);
    ++indegree[static_cast<std::size_t>(e.to - 1)];
  }
  std::vector<VertexId> stack;
  for (VertexId v = 1; v <= n; ++v)
    if (indegree[static_cast<std::size_t>(v - 1)] == 0) stack.push_back(v);
  int removed = 0;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    ++removed;
    for (VertexId w : out[static_cast<std::size_t>(u - 1)])
      if (--indegree[static_cast<std::size_t>(w - 1)] == 0) stack.push_back(w);
  }
  return removed == n;
}

}  // namespace detail

/// A D(n, p) draw together with the layers the sampler assigned.
struct LayeredSample {
  MixedGraph graph;
  std::vector<std::vector<VertexId>> layers;  // each sorted ascending
};

/// Exact D(n, p) sampler: tower vector from the DP, uniformly random labels,
/// then independent parent sets given the layers.
inline LayeredSample sample_dnp_tower_layers(int n, double p, Rng& rng) {
  validate_p(p);
  if (n < 1) throw Error(ErrorCode::VertexOutOfRange, "n must be >= 1");
  if (p == 0.0) {
    std::vector<VertexId> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);
    return {MixedGraph(n, {}, {}, GraphKind::Dag), {all}};
  }
  const auto dp = tower_dp(n, p);
  const std::vector<int> h = dp->sample_tower_vector(rng);

  std::vector<VertexId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  std::vector<std::size_t> start(h.size() + 1, 0);
  for (std::size_t k = 0; k < h.size(); ++k) start[k + 1] = start[k] + static_cast<std::size_t>(h[k]);

  std::vector<Edge> edges;
  std::vector<VertexId> scratch;
  for (std::size_t k = 1; k < h.size(); ++k) {
    const std::size_t prev_begin = start[k - 1];
    const auto prev_size = static_cast<std::size_t>(h[k - 1]);
    for (std::size_t idx = start[k]; idx < start[k + 1]; ++idx) {
      const VertexId v = order[idx];
      // Layers before k-1: independent Bernoulli(p) by geometric skips.
      for (std::uint64_t j = rng.geometric(p, prev_begin); j < prev_begin; j += 1 + rng.geometric(p, prev_begin))
        edges.push_back({order[j], v});
      // Layer k-1: nonempty subset, size from the conditioned binomial.
      const int count = detail::conditioned_binomial(rng, static_cast<int>(prev_size), p);
      scratch.assign(order.begin() + static_cast<std::ptrdiff_t>(prev_begin),
                     order.begin() + static_cast<std::ptrdiff_t>(prev_begin + prev_size));
      for (int c = 0; c < count; ++c) {
        const auto pick = static_cast<std::size_t>(c) + rng.below(prev_size - static_cast<std::size_t>(c));
        std::swap(scratch[static_cast<std::size_t>(c)], scratch[pick]);
        edges.push_back({scratch[static_cast<std::size_t>(c)], v});
      }
    }
  }

  LayeredSample out{MixedGraph(n, std::move(edges), {}, GraphKind::Dag), {}};
  for (std::size_t k = 0; k < h.size(); ++k) {
    std::vector<VertexId> layer(order.begin() + static_cast<std::ptrdiff_t>(start[k]),
                                order.begin() + static_cast<std::ptrdiff_t>(start[k + 1]));
    std::sort(layer.begin(), layer.end());
    out.layers.push_back(std::move(layer));
  }
  return out;
}

inline MixedGraph sample_dnp_tower(int n, double p, Rng& rng) { return sample_dnp_tower_layers(n, p, rng).graph; }

inline MixedGraph sample_dnp_tower(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return sample_dnp_tower(n, p, rng);
}

/// Independent edges with probability p, resampled until acyclic.
inline MixedGraph sample_dnp_rejection(int n, double p, Rng& rng, std::uint64_t max_attempts = 10'000'000) {
  validate_p(p);
  if (n < 1) throw Error(ErrorCode::VertexOutOfRange, "n must be >= 1");
  std::vector<Edge> edges;
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    edges.clear();
    for (VertexId a = 1; a <= n; ++a)
      for (VertexId b = 1; b <= n; ++b)
        if (a != b && rng.bernoulli(p)) edges.push_back({a, b});
    if (detail::edges_acyclic(n, edges)) return MixedGraph(n, std::move(edges), {}, GraphKind::Dag);
  }
  throw Error(ErrorCode::RejectionBudgetExceeded, "no acyclic draw within " + std::to_string(max_attempts) + " attempts");
}

inline MixedGraph sample_dnp_rejection(int n, double p, std::uint64_t seed, std::uint64_t max_attempts = 10'000'000) {
  Rng rng(seed);
  return sample_dnp_rejection(n, p, rng, max_attempts);
}

/// Uniform DAG plus a bidirected edge on each pair with probability 1/2.
inline MixedGraph sample_uniform_admg(int n, Rng& rng) {
  const MixedGraph dag = sample_dnp_tower(n, 0.5, rng);
  std::vector<Edge> bidirected;
  for (VertexId a = 1; a <= n; ++a)
    for (VertexId b = a + 1; b <= n; ++b)
      if (rng.bernoulli(0.5)) bidirected.push_back({a, b});
  return MixedGraph(n, dag.directed_vector(), std::move(bidirected), GraphKind::Admg);
}

inline MixedGraph sample_uniform_admg(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_uniform_admg(n, rng);
}

/// Each ordered pair independently with probability 1/2.
inline MixedGraph sample_uniform_dcg(int n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::VertexOutOfRange, "n must be >= 1");
  std::vector<Edge> edges;
  for (VertexId a = 1; a <= n; ++a)
    for (VertexId b = 1; b <= n; ++b)
      if (a != b && rng.bernoulli(0.5)) edges.push_back({a, b});
  return MixedGraph(n, std::move(edges), {}, GraphKind::Dcg);
}

inline MixedGraph sample_uniform_dcg(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_uniform_dcg(n, rng);
}

}  // namespace causalmec
