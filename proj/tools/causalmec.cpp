// Command-line front end for the causalmec library.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "causalmec/causalmec.hpp"

namespace cm = causalmec;

namespace {

std::vector<cm::VertexId> parse_id_list(const std::string& text) {
  std::vector<cm::VertexId> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = std::string(cm::detail::trim(item));
    if (item.empty()) continue;
    out.push_back(cm::detail::parse_int(item, 0));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cm::Error(cm::ErrorCode::ParseError, "cannot open '" + path + "' for writing");
  out << text;
}

struct SampleArgs {
  std::string kind = "dag";
  int n = 0;
  double p = 0.5;
  std::uint64_t seed = 1;
  std::string method = "tower";
  int trials = 0;
  std::string output;
};

cm::MixedGraph draw(const SampleArgs& a, cm::GraphKind kind, std::uint64_t seed) {
  switch (kind) {
    case cm::GraphKind::Dag:
      return a.method == "rejection" ? cm::sample_dnp_rejection(a.n, a.p, seed) : cm::sample_dnp_tower(a.n, a.p, seed);
    case cm::GraphKind::Admg:
      return cm::sample_uniform_admg(a.n, seed);
    case cm::GraphKind::Dcg:
      return cm::sample_uniform_dcg(a.n, seed);
  }
  return {};
}

int run_sample(const SampleArgs& a) {
  const auto kind = cm::parse_kind(a.kind);
  if (!kind) throw cm::Error(cm::ErrorCode::ParseError, "unknown kind '" + a.kind + "'");
  if (a.trials <= 0) {
    write_text(a.output, cm::format_graph(draw(a, *kind, a.seed)));
    return 0;
  }
  if (a.output.empty()) throw cm::Error(cm::ErrorCode::ParseError, "batch mode needs -o DIR");
  std::filesystem::create_directories(a.output);
  for (int t = 0; t < a.trials; ++t) {
    const auto g = draw(a, *kind, cm::derive_seed(a.seed, static_cast<std::uint64_t>(t)));
    cm::write_graph_file((std::filesystem::path(a.output) / ("graph-" + std::to_string(t) + ".txt")).string(), g);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random causal graphs, Markov equivalence and MEC lower-bound certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cm::kVersion);
  app.set_config("--config", "", "Read options from a TOML/INI file (same keys as flags)");

  cm::Limits limits = cm::Limits::from_environment();
  app.add_option("--oracle-cap", limits.oracle_max_n, "Largest n for the walk oracle")->capture_default_str();
  app.add_option("--signature-cap", limits.signature_max_n, "Largest n for full signatures")->capture_default_str();
  app.add_option("--mec-cap", limits.mec_cap, "Largest MEC enumerated before giving up")->capture_default_str();

  int exit_code = 0;

  // sample
  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a random graph");
  sample_cmd->add_option("--kind", sample.kind)->check(CLI::IsMember({"dag", "admg", "dcg"}))->capture_default_str();
  sample_cmd->add_option("--n", sample.n)->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--p", sample.p, "Edge probability for D(n,p)")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed)->capture_default_str();
  sample_cmd->add_option("--method", sample.method)->check(CLI::IsMember({"tower", "rejection"}))->capture_default_str();
  sample_cmd->add_option("--trials", sample.trials, "Batch mode: write this many graphs into the -o directory");
  sample_cmd->add_option("-o,--output", sample.output, "Output file (or directory in batch mode)");
  sample_cmd->callback([&] { exit_code = run_sample(sample); });

  // dsep
  std::string dsep_file, dsep_given;
  int dsep_x = 0, dsep_y = 0;
  auto* dsep_cmd = app.add_subcommand("dsep", "Decide d-separation of x and y given a set");
  dsep_cmd->add_option("file", dsep_file)->required()->check(CLI::ExistingFile);
  dsep_cmd->add_option("--x", dsep_x)->required();
  dsep_cmd->add_option("--y", dsep_y)->required();
  dsep_cmd->add_option("--given", dsep_given, "Comma-separated conditioning set");
  dsep_cmd->callback([&] {
    const auto g = cm::read_graph_file(dsep_file);
    cm::VertexSet z(g.num_vertices());
    for (cm::VertexId v : parse_id_list(dsep_given)) {
      if (v < 1 || v > g.num_vertices()) throw cm::Error(cm::ErrorCode::InvalidQuery, "vertex " + std::to_string(v) + " out of range");
      z.insert(v);
    }
    std::cout << (cm::is_d_connected(g, dsep_x, dsep_y, z) ? "connected" : "separated") << '\n';
  });

  // equiv
  std::string equiv_a, equiv_b;
  bool equiv_fast = false;
  auto* equiv_cmd = app.add_subcommand("equiv", "Test Markov equivalence of two graphs");
  equiv_cmd->add_option("file1", equiv_a)->required()->check(CLI::ExistingFile);
  equiv_cmd->add_option("file2", equiv_b)->required()->check(CLI::ExistingFile);
  equiv_cmd->add_flag("--fast", equiv_fast, "Skeleton and v-structure test (DAGs only)");
  equiv_cmd->callback([&] {
    const auto a = cm::read_graph_file(equiv_a);
    const auto b = cm::read_graph_file(equiv_b);
    const bool same = equiv_fast ? cm::markov_equivalent_dag_fast(a, b) : cm::markov_equivalent_exact(a, b, limits);
    std::cout << (same ? "equivalent" : "not-equivalent") << '\n';
  });

  // mec
  std::string mec_file;
  bool mec_oracle = false, mec_list = false;
  auto* mec_cmd = app.add_subcommand("mec", "Enumerate the Markov equivalence class of a graph");
  mec_cmd->add_option("file", mec_file)->required()->check(CLI::ExistingFile);
  mec_cmd->add_flag("--oracle", mec_oracle, "Exhaustive filter over all graphs of the same kind");
  mec_cmd->add_flag("--list", mec_list, "Print every member");
  mec_cmd->callback([&] {
    const auto g = cm::read_graph_file(mec_file);
    const auto mec = mec_oracle ? cm::mec_enumerate_oracle(g, limits) : cm::mec_enumerate(g, limits);
    std::cout << "mec_size=" << mec.size() << '\n';
    if (mec_list)
      for (const auto& member : mec.members) std::cout << "---\n" << cm::format_graph(member);
  });

  // bound
  std::string bound_file;
  auto* bound_cmd = app.add_subcommand("bound", "Print the MEC lower-bound certificate");
  bound_cmd->add_option("file", bound_file)->required()->check(CLI::ExistingFile);
  bound_cmd->callback([&] { std::cout << cm::format_certificate(cm::certificate(cm::read_graph_file(bound_file))); });

  // reverse
  std::string reverse_file, reverse_cycle, reverse_out;
  auto* reverse_cmd = app.add_subcommand("reverse", "Apply the cycle-reversal construction to a DCG");
  reverse_cmd->add_option("file", reverse_file)->required()->check(CLI::ExistingFile);
  reverse_cmd->add_option("--cycle", reverse_cycle, "Cycle as a,b,c,...")->required();
  reverse_cmd->add_option("-o,--output", reverse_out);
  reverse_cmd->callback([&] {
    const auto g = cm::read_graph_file(reverse_file);
    write_text(reverse_out, cm::format_graph(cm::reverse_cycle(g, parse_id_list(reverse_cycle))));
  });

  // census
  int census_max_n = 4;
  std::string census_out, census_format = "csv";
  auto* census_cmd = app.add_subcommand("census", "Count DAGs and equivalence classes for small n");
  census_cmd->add_option("--max-n", census_max_n)->check(CLI::Range(1, 5))->capture_default_str();
  census_cmd->add_option("-o,--output", census_out);
  census_cmd->add_option("--format", census_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  census_cmd->callback([&] {
    const auto rows = cm::run_census(census_max_n, 1, limits);
    write_text(census_out, census_format == "json" ? cm::census_json(rows).dump(2) + "\n" : cm::census_csv(rows));
    for (const auto& r : rows)
      if (!r.matches_count_oracle || !r.matches_signatures) {
        std::cerr << "census cross-check failed at n=" << r.n << '\n';
        exit_code = 1;
      }
  });

  // scaling
  cm::ExperimentConfig scaling;
  std::string scaling_n, scaling_p, scaling_rule, scaling_format = "csv";
  double scaling_c = 0.0;
  bool scaling_timing = false;
  auto* scaling_cmd = app.add_subcommand("scaling", "Layer-2 matching sizes over an (n, p) grid");
  scaling_cmd->add_option("--n", scaling_n, "Comma-separated n values")->required();
  scaling_cmd->add_option("--p", scaling_p, "Comma-separated p values");
  scaling_cmd->add_option("--p-rule", scaling_rule, "Use p = c/n")->check(CLI::IsMember({"c/n"}));
  scaling_cmd->add_option("--c", scaling_c, "Constant for --p-rule");
  scaling_cmd->add_option("--trials", scaling.trials)->capture_default_str();
  scaling_cmd->add_option("--seed", scaling.seed)->capture_default_str();
  scaling_cmd->add_option("-o,--output", scaling.output_path);
  scaling_cmd->add_option("--format", scaling_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  scaling_cmd->add_flag("--timing", scaling_timing, "Include wall time per record (breaks byte-identical reruns)");
  scaling_cmd->callback([&] {
    scaling.n_grid = parse_id_list(scaling_n);
    std::stringstream ps(scaling_p);
    for (std::string item; std::getline(ps, item, ',');)
      if (!cm::detail::trim(item).empty()) scaling.p_grid.push_back(std::stod(item));
    if (!scaling_rule.empty()) scaling.p_rule_c = scaling_c;
    scaling.caps = limits;
    const auto result = cm::run_scaling(scaling);
    write_text(scaling.output_path,
               scaling_format == "json" ? cm::scaling_json(result, scaling_timing).dump(2) + "\n" : cm::scaling_csv(result, scaling_timing));
    std::cerr << cm::scaling_summary_text(result);
  });

  // tails
  int tails_n = 3000, tails_trials = 100;
  double tails_p = 0.01, tails_min = 0.95;
  std::uint64_t tails_seed = 1;
  auto* tails_cmd = app.add_subcommand("tails", "Frequencies of the layer-size concentration events");
  tails_cmd->add_option("--n", tails_n)->capture_default_str();
  tails_cmd->add_option("--p", tails_p)->capture_default_str();
  tails_cmd->add_option("--trials", tails_trials)->capture_default_str();
  tails_cmd->add_option("--seed", tails_seed)->capture_default_str();
  tails_cmd->add_option("--min-frequency", tails_min, "Exit non-zero if any event is rarer")->capture_default_str();
  tails_cmd->callback([&] {
    const auto s = cm::run_tail_checks(tails_n, tails_p, tails_trials, tails_seed);
    std::cout << cm::tail_report(s);
    for (int count : {s.sources_below_upper, s.h1_above_lower, s.h2_above_lower})
      if (s.frequency(count) < tails_min) exit_code = 1;
  });

  // verify
  std::string verify_suite = "all";
  int verify_trials = 200;
  std::uint64_t verify_seed = 1;
  std::string verify_failures = "failures";
  std::vector<std::string> suite_names{"all"};
  for (const auto& s : cm::verification_suites()) suite_names.push_back(s);
  auto* verify_cmd = app.add_subcommand("verify", "Run construction verification suites");
  verify_cmd->add_option("--suite", verify_suite)->check(CLI::IsMember(suite_names))->capture_default_str();
  verify_cmd->add_option("--trials", verify_trials)->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed)->capture_default_str();
  verify_cmd->add_option("--failures-dir", verify_failures)->capture_default_str();
  verify_cmd->callback([&] {
    cm::VerifyOptions options;
    options.limits = limits;
    options.failure_dir = verify_failures;
    std::vector<std::string> suites = verify_suite == "all" ? cm::verification_suites() : std::vector<std::string>{verify_suite};
    for (const auto& name : suites) {
      const auto report = cm::run_verification_suite(name, verify_trials, verify_seed, options);
      std::cout << cm::format_report(report) << std::flush;
      if (!report.passed()) exit_code = 1;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
