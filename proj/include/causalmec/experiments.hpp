#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "causalmec/constructions.hpp"
#include "causalmec/dsep.hpp"
#include "causalmec/enumerate.hpp"
#include "causalmec/equivalence.hpp"
#include "causalmec/graph.hpp"
#include "causalmec/graph_io.hpp"
#include "causalmec/limits.hpp"
#include "causalmec/parallel.hpp"
#include "causalmec/rng.hpp"
#include "causalmec/sampling.hpp"

namespace causalmec {

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Census of DAG equivalence classes
// ---------------------------------------------------------------------------

struct CensusRow {
  int n = 0;
  std::uint64_t dag_count = 0;
  std::uint64_t mec_count = 0;
  double mean_mec_size = 0.0;
  std::uint64_t max_mec_size = 0;
  bool matches_count_oracle = false;  // dag_count == dag_count_oracle(n)
  bool matches_signatures = false;    // grouping agrees with d-separation signatures
};

namespace detail {

using FastKey = std::pair<std::vector<Edge>, std::vector<VStructure>>;

/// Whether the (skeleton, v-structure) grouping of `dags` is the same
/// partition as grouping by signature. For n <= 4 every class is checked;
/// above that one class picked by `seed` is compared.
inline bool census_grouping_agrees(const std::vector<MixedGraph>& dags, const std::vector<std::size_t>& fast_class,
                                   std::size_t classes, std::uint64_t seed, const Limits& limits) {
  const int n = dags.front().num_vertices();
  if (n <= 4) {
    std::unordered_map<DsepSignature, std::size_t, DsepSignatureHash> sig_class;
    std::vector<std::optional<std::size_t>> fast_to_sig(classes);
    for (std::size_t i = 0; i < dags.size(); ++i) {
      const auto [it, inserted] = sig_class.emplace(dsep_signature(dags[i], limits), sig_class.size());
      auto& slot = fast_to_sig[fast_class[i]];
      if (!slot) slot = it->second;
      if (*slot != it->second) return false;
    }
    return sig_class.size() == classes;
  }
  Rng rng(seed);
  const std::size_t pick = fast_class[rng.below(dags.size())];
  std::optional<DsepSignature> target;
  for (std::size_t i = 0; i < dags.size(); ++i)
    if (fast_class[i] == pick) {
      target = dsep_signature(dags[i], limits);
      break;
    }
  for (std::size_t i = 0; i < dags.size(); ++i) {
    const bool same_sig = dsep_signature(dags[i], limits) == *target;
    if (same_sig != (fast_class[i] == pick)) return false;
  }
  return true;
}

}  // namespace detail

inline std::vector<CensusRow> run_census(int max_n, std::uint64_t seed = 1, const Limits& limits = {}) {
  if (max_n > max_enumeration_n(GraphKind::Dag))
    throw Error(ErrorCode::GraphTooLargeForOracle, "census limited to n <= 5");
  std::vector<CensusRow> rows;
  for (int n = 1; n <= max_n; ++n) {
    const auto dags = enumerate_graphs(n, GraphKind::Dag);
    std::map<detail::FastKey, std::size_t> class_of;
    std::vector<std::size_t> fast_class;
    std::vector<std::uint64_t> class_size;
    fast_class.reserve(dags.size());
    for (const MixedGraph& g : dags) {
      const auto [it, inserted] = class_of.emplace(detail::FastKey{skeleton(g), v_structures(g)}, class_of.size());
      if (inserted) class_size.push_back(0);
      ++class_size[it->second];
      fast_class.push_back(it->second);
    }
    CensusRow row;
    row.n = n;
    row.dag_count = dags.size();
    row.mec_count = class_of.size();
    row.mean_mec_size = static_cast<double>(row.dag_count) / static_cast<double>(row.mec_count);
    row.max_mec_size = *std::max_element(class_size.begin(), class_size.end());
    row.matches_count_oracle = dag_count_oracle(n) == BigInt(row.dag_count);
    row.matches_signatures = detail::census_grouping_agrees(dags, fast_class, class_of.size(), derive_seed(seed, static_cast<std::uint64_t>(n)), limits);
    rows.push_back(row);
  }
  return rows;
}

inline std::string census_csv(const std::vector<CensusRow>& rows) {
  std::ostringstream out;
  out << "# causalmec census v1\n";
  out << "n,dag_count,mec_count,mean_mec_size,max_mec_size\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.dag_count << ',' << r.mec_count << ',' << format_number(r.mean_mec_size) << ',' << r.max_mec_size << '\n';
  return out.str();
}

inline nlohmann::json census_json(const std::vector<CensusRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"n", r.n},
                   {"dag_count", r.dag_count},
                   {"mec_count", r.mec_count},
                   {"mean_mec_size", r.mean_mec_size},
                   {"max_mec_size", r.max_mec_size},
                   {"matches_count_oracle", r.matches_count_oracle},
                   {"matches_signatures", r.matches_signatures}});
  return out;
}

// ---------------------------------------------------------------------------
// Layer-size concentration events
// ---------------------------------------------------------------------------

struct TailThresholds {
  double sources_upper = 0.0;  // 5 / p
  double h1_lower = 0.0;       // p^-1 / (20 log p^-1)
  double h2_lower = 0.0;       // p^-1 / log^2 p^-1
};

inline TailThresholds tail_thresholds(double p) {
  const double inv = 1.0 / p;
  const double l = std::log(inv);
  return {5.0 / p, inv / (20.0 * l), inv / (l * l)};
}

struct TailSummary {
  int n = 0;
  double p = 0.0;
  int trials = 0;
  bool hypothesis_holds = false;  // p >= 6/n
  TailThresholds thresholds;
  int sources_below_upper = 0;
  int h1_above_lower = 0;
  int h2_above_lower = 0;
  std::vector<std::pair<int, int>> layer_sizes;  // (h1, h2) per trial

  double frequency(int count) const { return trials ? static_cast<double>(count) / trials : 0.0; }
};

inline TailSummary run_tail_checks(int n, double p, int trials, std::uint64_t seed) {
  validate_p(p);
  if (p == 0.0) throw Error(ErrorCode::InvalidP, "tail checks need p > 0");
  TailSummary s;
  s.n = n;
  s.p = p;
  s.trials = trials;
  s.hypothesis_holds = p >= 6.0 / n;
  s.thresholds = tail_thresholds(p);
  s.layer_sizes.resize(static_cast<std::size_t>(trials));
  tower_dp(n, p);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const auto tower = tower_decomposition(sample_dnp_tower(n, p, rng));
    const int h1 = static_cast<int>(tower.layers[0].size());
    const int h2 = tower.depth() > 1 ? static_cast<int>(tower.layers[1].size()) : 0;
    s.layer_sizes[t] = {h1, h2};
  });
  for (const auto& [h1, h2] : s.layer_sizes) {
    s.sources_below_upper += h1 <= s.thresholds.sources_upper;
    s.h1_above_lower += h1 >= s.thresholds.h1_lower;
    s.h2_above_lower += h2 >= s.thresholds.h2_lower;
  }
  return s;
}

inline std::string tail_report(const TailSummary& s) {
  std::ostringstream out;
  out << "n=" << s.n << " p=" << format_number(s.p) << " trials=" << s.trials << '\n';
  if (!s.hypothesis_holds) out << "warning: p < 6/n, outside the regime of the layer-size bounds\n";
  out << "event h1<=5/p (" << format_number(s.thresholds.sources_upper) << "): " << s.sources_below_upper << '/' << s.trials << '\n';
  out << "event h1>=1/(20p log(1/p)) (" << format_number(s.thresholds.h1_lower) << "): " << s.h1_above_lower << '/' << s.trials << '\n';
  out << "event h2>=1/(p log^2(1/p)) (" << format_number(s.thresholds.h2_lower) << "): " << s.h2_above_lower << '/' << s.trials << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Scaling of the DAG certificate
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string experiment = "scaling";
  std::vector<int> n_grid;
  std::vector<double> p_grid;
  std::optional<double> p_rule_c;  // p = c / n when set
  int trials = 1;
  std::uint64_t seed = 1;
  Limits caps;
  std::string output_path;

  void validate() const {
    if (n_grid.empty()) throw Error(ErrorCode::InvalidQuery, "n grid must be non-empty");
    if (!p_rule_c && p_grid.empty()) throw Error(ErrorCode::InvalidP, "need a p grid or a c/n rule");
    if (trials < 1) throw Error(ErrorCode::InvalidQuery, "trials must be >= 1");
  }
  std::vector<std::pair<int, double>> points() const {
    std::vector<std::pair<int, double>> out;
    for (int n : n_grid) {
      if (p_rule_c)
        out.emplace_back(n, *p_rule_c / n);
      else
        for (double p : p_grid) out.emplace_back(n, p);
    }
    return out;
  }
};

/// p^-1 / (16 e^5 log^2 p^-1)
inline double analytic_matching_floor(double p) {
  const double l = std::log(1.0 / p);
  return (1.0 / p) / (16.0 * std::exp(5.0) * l * l);
}

struct ScalingRecord {
  int n = 0;
  double p = 0.0;
  int trial = 0;
  int h1 = 0;
  int h2 = 0;
  int source_count = 0;
  std::size_t matching_size = 0;
  std::size_t log2_lower_bound = 0;
  double analytic_floor = 0.0;
  double wall_time_ms = 0.0;
};

struct ScalingSummary {
  int n = 0;
  double p = 0.0;
  int trials = 0;
  double median_matching = 0.0;
  double fraction_meeting_floor = 0.0;  // matching >= ceil(analytic floor)
};

struct ScalingResult {
  std::vector<ScalingRecord> records;  // sorted by (n, p, trial)
  std::vector<ScalingSummary> summaries;
};

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

inline ScalingResult run_scaling(const ExperimentConfig& config) {
  config.validate();
  ScalingResult result;
  std::uint64_t point_index = 0;
  for (const auto& [n, p] : config.points()) {
    validate_p(p);
    tower_dp(n, p);
    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<ScalingRecord> records(trials);
    const std::uint64_t point_seed = derive_seed(config.seed, point_index++);
    parallel_for(trials, [&, n = n, p = p](std::size_t t) {
      const auto start = std::chrono::steady_clock::now();
      Rng rng(derive_seed(point_seed, t));
      const MixedGraph g = sample_dnp_tower(n, p, rng);
      const auto tower = tower_decomposition(g);
      const auto cert = certificate(g);
      const auto& matching = std::get<ReversibleMatching>(cert.payload);
      if (!is_valid_matching(g, matching.edges))
        throw Error(ErrorCode::SuiteFailed, "scaling produced a matching that fails reversibility revalidation");
      for (const Edge& e : matching.edges)
        if (tower.layer(e.from) != 1 || tower.layer(e.to) != 2)
          throw Error(ErrorCode::SuiteFailed, "matching edge is not a layer-2 edge");
      ScalingRecord& r = records[t];
      r.n = n;
      r.p = p;
      r.trial = static_cast<int>(t);
      r.h1 = static_cast<int>(tower.layers[0].size());
      r.h2 = tower.depth() > 1 ? static_cast<int>(tower.layers[1].size()) : 0;
      r.source_count = r.h1;
      r.matching_size = matching.size();
      r.log2_lower_bound = cert.log2_bound;
      r.analytic_floor = analytic_matching_floor(p);
      r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    });
    ScalingSummary s;
    s.n = n;
    s.p = p;
    s.trials = config.trials;
    std::vector<double> sizes;
    int meeting = 0;
    for (const auto& r : records) {
      sizes.push_back(static_cast<double>(r.matching_size));
      meeting += static_cast<double>(r.matching_size) >= std::ceil(r.analytic_floor);
    }
    s.median_matching = median(sizes);
    s.fraction_meeting_floor = static_cast<double>(meeting) / config.trials;
    result.summaries.push_back(s);
    result.records.insert(result.records.end(), records.begin(), records.end());
  }
  std::stable_sort(result.records.begin(), result.records.end(), [](const ScalingRecord& a, const ScalingRecord& b) {
    return std::tie(a.n, a.p, a.trial) < std::tie(b.n, b.p, b.trial);
  });
  return result;
}

/// Wall time is left out unless requested so that reruns are byte-identical.
inline std::string scaling_csv(const ScalingResult& result, bool with_timing = false) {
  std::ostringstream out;
  out << "# causalmec scaling v1\n";
  out << "n,p,trial,h1,h2,source_count,matching_size,log2_lower_bound,analytic_floor";
  if (with_timing) out << ",wall_time_ms";
  out << '\n';
  for (const auto& r : result.records) {
    out << r.n << ',' << format_number(r.p) << ',' << r.trial << ',' << r.h1 << ',' << r.h2 << ',' << r.source_count << ','
        << r.matching_size << ',' << r.log2_lower_bound << ',' << format_number(r.analytic_floor);
    if (with_timing) out << ',' << format_number(r.wall_time_ms);
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json scaling_json(const ScalingResult& result, bool with_timing = false) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : result.records) {
    nlohmann::json j = {{"n", r.n},
                        {"p", r.p},
                        {"trial", r.trial},
                        {"h1", r.h1},
                        {"h2", r.h2},
                        {"source_count", r.source_count},
                        {"matching_size", r.matching_size},
                        {"log2_lower_bound", r.log2_lower_bound},
                        {"analytic_floor", r.analytic_floor}};
    if (with_timing) j["wall_time_ms"] = r.wall_time_ms;
    records.push_back(std::move(j));
  }
  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& s : result.summaries)
    summaries.push_back({{"n", s.n},
                         {"p", s.p},
                         {"trials", s.trials},
                         {"median_matching", s.median_matching},
                         {"fraction_meeting_floor", s.fraction_meeting_floor}});
  return {{"schema", "causalmec scaling v1"}, {"records", records}, {"summaries", summaries}};
}

inline std::string scaling_summary_text(const ScalingResult& result) {
  std::ostringstream out;
  for (const auto& s : result.summaries)
    out << "n=" << s.n << " p=" << format_number(s.p) << " trials=" << s.trials << " median_matching=" << format_number(s.median_matching)
        << " fraction_meeting_floor=" << format_number(s.fraction_meeting_floor) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Exact D(n, p) for small n
// ---------------------------------------------------------------------------

/// Bit (a-1)*n + (b-1) set for each edge a -> b. Requires n <= 8.
inline std::uint64_t adjacency_code(const MixedGraph& g) {
  const int n = g.num_vertices();
  std::uint64_t code = 0;
  for (const Edge& e : g.directed_edges()) code |= std::uint64_t{1} << ((e.from - 1) * n + (e.to - 1));
  return code;
}

struct ExactDistribution {
  std::vector<MixedGraph> dags;
  std::vector<double> probability;
  std::unordered_map<std::uint64_t, std::size_t> index_of;  // adjacency code -> position
};

/// Every DAG on n vertices with probability proportional to (p/(1-p))^edges.
inline ExactDistribution exact_dnp(int n, double p) {
  validate_p(p);
  ExactDistribution d;
  d.dags = enumerate_graphs(n, GraphKind::Dag);
  const double log_ratio = std::log(p) - std::log1p(-p);
  std::vector<double> logs;
  for (const auto& g : d.dags) logs.push_back(p == 0.0 ? (g.num_directed() == 0 ? 0.0 : -std::numeric_limits<double>::infinity()) : log_ratio * static_cast<double>(g.num_directed()));
  const double total = log_sum_exp(logs);
  for (std::size_t i = 0; i < d.dags.size(); ++i) {
    d.probability.push_back(std::exp(logs[i] - total));
    d.index_of.emplace(adjacency_code(d.dags[i]), i);
  }
  return d;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

/// Empirical distribution over the DAGs of `exact` from `draws` samples.
template <typename Sampler>
std::vector<double> empirical_distribution(const ExactDistribution& exact, std::size_t draws, Sampler&& sample) {
  std::vector<double> counts(exact.dags.size(), 0.0);
  for (std::size_t i = 0; i < draws; ++i) {
    const MixedGraph g = sample();
    counts[exact.index_of.at(adjacency_code(g))] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(draws);
  return counts;
}

/// Largest relative deviation between enumeration-derived tower-vector
/// masses and the closed-form weights, after fitting one shared constant.
inline double tower_weight_max_relative_error(int n, double p) {
  const ExactDistribution exact = exact_dnp(n, p);
  std::map<std::vector<int>, double> mass;
  for (std::size_t i = 0; i < exact.dags.size(); ++i) mass[tower_decomposition(exact.dags[i]).vector()] += exact.probability[i];
  std::optional<double> constant;
  double worst = 0.0;
  for (const auto& [h, m] : mass) {
    const double w = tower_vector_weight(h, n, p).linear();
    if (!constant) constant = m / w;
    worst = std::max(worst, std::abs(m / w - *constant) / *constant);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names{"reversible", "flips", "admg-toggle", "dcg-reverse", "dsep-oracle", "sampler"};
  return names;
}

struct VerifyOptions {
  Limits limits;
  std::optional<std::filesystem::path> failure_dir = std::filesystem::path("failures");
  std::size_t sampler_draws = 1'000'000;
  bool exhaustive = true;  // include the exhaustive small-n sweeps
};

struct SuiteReport {
  std::string suite;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
  std::vector<std::string> notes;

  bool passed() const { return failures == 0; }
};

namespace detail {

class SuiteRecorder {
 public:
  SuiteRecorder(std::string suite, const VerifyOptions& options) : options_(options) { report_.suite = std::move(suite); }

  void pass() { ++report_.cases; }
  void fail(const std::string& what, const MixedGraph* g = nullptr, std::uint64_t seed = 0) {
    ++report_.cases;
    ++report_.failures;
    std::string message = what;
    if (g && options_.failure_dir) {
      std::filesystem::create_directories(*options_.failure_dir);
      const auto path = *options_.failure_dir / (report_.suite + "-" + std::to_string(report_.failures) + ".graph");
      std::ofstream out(path);
      out << format_graph(*g) << "# seed=" << seed << '\n' << "# " << what << '\n';
      message += " [" + path.string() + ", seed=" + std::to_string(seed) + "]";
    }
    if (report_.messages.size() < 50) report_.messages.push_back(std::move(message));
  }
  void check(bool ok, const std::string& what, const MixedGraph* g = nullptr, std::uint64_t seed = 0) {
    if (ok)
      pass();
    else
      fail(what, g, seed);
  }
  void note(std::string text) { report_.notes.push_back(std::move(text)); }
  SuiteReport take() { return std::move(report_); }

 private:
  const VerifyOptions& options_;
  SuiteReport report_;
};

inline bool descendants_equal(const MixedGraph& a, const MixedGraph& b) {
  for (VertexId v = 1; v <= a.num_vertices(); ++v)
    if (!(descendants(a, v) == descendants(b, v))) return false;
  return true;
}

inline void suite_reversible(SuiteRecorder& rec, const VerifyOptions& opt) {
  for (int n = 2; n <= 4; ++n) {
    for_each_graph(n, GraphKind::Dag, [&](const MixedGraph& g) {
      const DsepSignature sig = dsep_signature(g, opt.limits);
      const auto criterion = reversible_edges(g);
      for (const Edge& e : g.directed_edges()) {
        auto edges = g.directed_vector();
        *std::find(edges.begin(), edges.end(), e) = e.reversed();
        const MixedGraph flipped(n, edges, {}, GraphKind::Dcg);
        const bool oracle = is_acyclic(flipped) && dsep_signature(flipped, opt.limits) == sig;
        const bool by_parents = std::find(criterion.begin(), criterion.end(), e) != criterion.end();
        rec.check(oracle == by_parents, "parent-set criterion disagrees with signatures on edge " + std::to_string(e.from) + "->" + std::to_string(e.to), &g);
      }
    });
  }
}

/// Sparse D(n, 0.15) DAGs with 1 <= matching size <= 6 for trial t.
inline std::pair<MixedGraph, std::uint64_t> flip_instance(std::uint64_t seed, std::size_t t) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = derive_seed(derive_seed(seed, t), attempt);
    Rng rng(s);
    const int n = 6 + static_cast<int>(rng.below(9));
    MixedGraph g = sample_dnp_tower(n, 0.15, rng);
    const std::size_t size = layer2_matching(g).size();
    if (size >= 1 && size <= 6) return {std::move(g), s};
  }
}

inline void suite_flips(SuiteRecorder& rec, int trials, std::uint64_t seed, const VerifyOptions& opt) {
  for (std::size_t t = 0; t < static_cast<std::size_t>(trials); ++t) {
    const auto [g, s] = flip_instance(seed, t);
    const auto matching = layer2_matching(g);
    const std::size_t variants = std::size_t{1} << matching.size();
    std::vector<MixedGraph> flipped;
    for (std::uint64_t mask = 0; mask < variants; ++mask) flipped.push_back(flip_matching_subset(g, matching, mask));
    bool ok = true;
    for (std::size_t i = 0; i < variants && ok; ++i)
      for (std::size_t j = i + 1; j < variants && ok; ++j)
        ok = !(flipped[i] == flipped[j]) && markov_equivalent_dag_fast(flipped[i], flipped[j]);
    if (ok && g.num_vertices() <= 10) {
      const DsepSignature sig = dsep_signature(g, opt.limits);
      for (std::size_t i = 1; i < variants && ok; ++i) ok = dsep_signature(flipped[i], opt.limits) == sig;
    }
    rec.check(ok, "flip variants not pairwise distinct and equivalent", &g, s);
  }
  if (opt.exhaustive) {
    for (int n = 1; n <= 5; ++n) {
      const SignatureIndex index(n, GraphKind::Dag, opt.limits);
      for_each_graph(n, GraphKind::Dag, [&](const MixedGraph& g) {
        const std::size_t bound = certificate(g).log2_bound;
        rec.check((std::size_t{1} << bound) <= index.class_size(g), "DAG certificate exceeds MEC size", &g);
      });
    }
  }
}

inline void suite_admg_toggle(SuiteRecorder& rec, int trials, std::uint64_t seed, const VerifyOptions& opt) {
  for (std::size_t t = 0; t < static_cast<std::size_t>(trials); ++t) {
    std::uint64_t s = 0;
    MixedGraph g;
    SStructureSet found;
    for (std::uint64_t attempt = 0;; ++attempt) {
      s = derive_seed(derive_seed(seed, t), attempt);
      Rng rng(s);
      g = sample_uniform_admg(3 + static_cast<int>(rng.below(3)), rng);
      found = find_s_structures(g);
      if (found.size() > 0) break;
    }
    const DsepSignature sig = dsep_signature(g, opt.limits);
    bool ok = true;
    for (const SStructure& st : found.triples) ok = ok && dsep_signature(toggle_underdetermined_edge(g, st), opt.limits) == sig;
    MixedGraph all = g;
    for (const SStructure& st : found.selection) all = toggle_underdetermined_edge(all, st);
    ok = ok && dsep_signature(all, opt.limits) == sig;
    rec.check(ok, "toggling an underdetermined edge changed the signature", &g, s);
  }
  if (opt.exhaustive) {
    for (int n = 1; n <= 4; ++n) {
      const SignatureIndex index(n, GraphKind::Admg, opt.limits);
      for_each_graph(n, GraphKind::Admg, [&](const MixedGraph& g) {
        const auto structures = find_s_structures(g);
        const std::size_t bound = structures.selection.size();
        const auto m = static_cast<double>(structures.size());
        bool ok = (std::size_t{1} << bound) <= index.class_size(g);
        ok = ok && static_cast<double>(bound) >= std::ceil(m / (3.0 * n));
        rec.check(ok, "ADMG certificate exceeds MEC size or misses the counting bound", &g);
      });
    }
  }
}

inline void suite_dcg_reverse(SuiteRecorder& rec, int trials, std::uint64_t seed, const VerifyOptions& opt) {
  std::size_t no_merge = 0, overlapping = 0;
  for (std::size_t t = 0; t < static_cast<std::size_t>(trials); ++t) {
    std::uint64_t s = 0;
    MixedGraph g;
    std::vector<std::vector<VertexId>> cycles;
    Rng pick(0);
    for (std::uint64_t attempt = 0;; ++attempt) {
      s = derive_seed(derive_seed(seed, t), attempt);
      Rng rng(s);
      g = sample_uniform_dcg(3 + static_cast<int>(rng.below(4)), rng);
      cycles = simple_cycles(g);
      pick = rng;
      if (!cycles.empty()) break;
    }
    const auto& cycle = cycles[pick.below(cycles.size())];
    const MixedGraph h = reverse_cycle(g, cycle);
    const bool shares = std::any_of(cycles.begin(), cycles.end(), [&](const auto& other) {
      return other != cycle && std::any_of(other.begin(), other.end(), [&](VertexId v) { return std::find(cycle.begin(), cycle.end(), v) != cycle.end(); });
    });
    overlapping += shares;
    rec.check(dsep_signature(g, opt.limits) == dsep_signature(h, opt.limits), "cycle reversal changed the signature", &g, s);
    rec.check(descendants_equal(g, h), "cycle reversal changed a descendant set", &g, s);
    if (!reverse_cycle_merges(g, cycle)) {
      ++no_merge;
      rec.check(reverse_cycle(h, reversed_cycle(cycle)) == g, "cycle reversal is not an involution on a merge-free instance", &g, s);
    }
  }
  rec.note("merge-free instances: " + std::to_string(no_merge) + ", instances with overlapping cycles: " + std::to_string(overlapping));
  if (opt.exhaustive) {
    for (int n = 1; n <= 4; ++n) {
      const SignatureIndex index(n, GraphKind::Dcg, opt.limits);
      for_each_graph(n, GraphKind::Dcg, [&](const MixedGraph& g) {
        const std::size_t bound = certificate(g).log2_bound;
        rec.check((std::size_t{1} << bound) <= index.class_size(g), "DCG certificate exceeds MEC size", &g);
      });
    }
  }
}

inline std::vector<DsepQuery> all_queries(int n) {
  std::vector<DsepQuery> out;
  for (VertexId x = 1; x <= n; ++x)
    for (VertexId y = x + 1; y <= n; ++y)
      for (Mask z = 0; z < (Mask{1} << n); ++z)
        if (!(z & (vertex_bit(x) | vertex_bit(y)))) out.push_back({x, y, VertexSet::from_mask(n, z)});
  return out;
}

inline void suite_dsep_oracle(SuiteRecorder& rec, int trials, std::uint64_t seed, const VerifyOptions& opt) {
  const GraphKind kinds[] = {GraphKind::Dag, GraphKind::Admg, GraphKind::Dcg};
  std::uint64_t stream = 0;
  for (GraphKind kind : kinds) {
    for (std::size_t t = 0; t < static_cast<std::size_t>(trials); ++t) {
      const std::uint64_t s = derive_seed(seed, stream++);
      Rng rng(s);
      const int n = 2 + static_cast<int>(rng.below(4));
      const MixedGraph g = kind == GraphKind::Dag    ? sample_dnp_tower(n, 0.5, rng)
                           : kind == GraphKind::Admg ? sample_uniform_admg(n, rng)
                                                     : sample_uniform_dcg(n, rng);
      std::size_t disagreements = 0;
      for (const DsepQuery& q : all_queries(n)) {
        const bool fast = is_d_connected(g, q);
        disagreements += fast != is_d_connected_oracle(g, q, opt.limits);
        disagreements += fast != is_d_connected(g, DsepQuery{q.y, q.x, q.z});
      }
      rec.check(disagreements == 0, std::to_string(disagreements) + " d-separation disagreements", &g, s);
    }
  }
}

inline void suite_sampler(SuiteRecorder& rec, std::uint64_t seed, const VerifyOptions& opt) {
  struct Case {
    int n;
    double p;
  };
  std::uint64_t stream = 0;
  for (const Case c : {Case{3, 0.2}, Case{4, 0.3}, Case{4, 0.5}}) {
    const ExactDistribution exact = exact_dnp(c.n, c.p);
    Rng tower_rng(derive_seed(seed, stream++));
    const auto tower = empirical_distribution(exact, opt.sampler_draws, [&] { return sample_dnp_tower(c.n, c.p, tower_rng); });
    Rng rejection_rng(derive_seed(seed, stream++));
    const auto rejection = empirical_distribution(exact, opt.sampler_draws, [&] { return sample_dnp_rejection(c.n, c.p, rejection_rng); });
    const double tv_exact = total_variation(tower, exact.probability);
    const double tv_pair = total_variation(tower, rejection);
    const std::string tag = "D(" + std::to_string(c.n) + "," + format_number(c.p) + ")";
    rec.note(tag + " TV(tower, exact)=" + format_number(tv_exact) + " TV(tower, rejection)=" + format_number(tv_pair));
    rec.check(tv_exact <= 0.02, tag + " tower sampler TV to exact " + format_number(tv_exact) + " > 0.02");
    rec.check(tv_pair <= 0.03, tag + " tower vs rejection TV " + format_number(tv_pair) + " > 0.03");
  }
  for (int n = 1; n <= 4; ++n)
    for (double p : {0.3, 0.5}) {
      const double err = tower_weight_max_relative_error(n, p);
      rec.check(err <= 1e-9, "tower-vector weights off by relative " + format_number(err) + " at n=" + std::to_string(n));
    }
  // Every sample's recomputed tower decomposition equals the sampled layers.
  Rng rng(derive_seed(seed, stream++));
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.below(40));
    const auto sample = sample_dnp_tower_layers(n, 0.05 + 0.9 * rng.uniform(), rng);
    const auto tower = tower_decomposition(sample.graph);
    rec.check(tower.layers == sample.layers, "sampled layers differ from the recomputed tower decomposition", &sample.graph);
  }
}

}  // namespace detail

/// Runs one named suite; the unknown-name case throws InvalidQuery.
inline SuiteReport run_verification_suite(std::string_view suite, int trials, std::uint64_t seed, const VerifyOptions& options = {}) {
  detail::SuiteRecorder rec(std::string(suite), options);
  if (suite == "reversible")
    detail::suite_reversible(rec, options);
  else if (suite == "flips")
    detail::suite_flips(rec, trials, seed, options);
  else if (suite == "admg-toggle")
    detail::suite_admg_toggle(rec, trials, seed, options);
  else if (suite == "dcg-reverse")
    detail::suite_dcg_reverse(rec, trials, seed, options);
  else if (suite == "dsep-oracle")
    detail::suite_dsep_oracle(rec, trials, seed, options);
  else if (suite == "sampler")
    detail::suite_sampler(rec, seed, options);
  else
    throw Error(ErrorCode::InvalidQuery, "unknown suite '" + std::string(suite) + "'");
  return rec.take();
}

inline std::string format_report(const SuiteReport& r) {
  std::ostringstream out;
  out << (r.passed() ? "PASS " : "FAIL ") << r.suite << " cases=" << r.cases << " failures=" << r.failures << '\n';
  for (const auto& note : r.notes) out << "  note: " << note << '\n';
  for (const auto& m : r.messages) out << "  failure: " << m << '\n';
  return out.str();
}

}  // namespace causalmec
