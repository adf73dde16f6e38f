// butterfly: exact counts, metered estimators and comparison runs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "butterfly/bigraph.hpp"
#include "butterfly/exact.hpp"
#include "butterfly/harness.hpp"

namespace {

using namespace bfly;

struct GraphArgs {
  std::string path;
  std::string gen;
  std::string dataset;
};

void add_graph_options(CLI::App* cmd, GraphArgs& g, bool allow_gen) {
  auto* path = cmd->add_option("--graph", g.path, "KONECT edge list or binary cache");
  if (allow_gen) {
    auto* gen = cmd->add_option("--gen", g.gen, "generator: kab:a,b | er:n1,n2,p,seed | hub:h,t");
    path->excludes(gen);
    gen->excludes(path);
  } else {
    path->required();
  }
  cmd->add_option("--dataset", g.dataset, "dataset label for output");
}

BipartiteGraph load(const GraphArgs& g) {
  if (!g.path.empty()) return load_graph(g.path);
  if (!g.gen.empty()) return generate_synthetic(parse_generator_spec(g.gen));
  throw CLI::ValidationError("--graph/--gen", "one of --graph or --gen is required");
}

// Opens PREFIX.jsonl and PREFIX.csv, or falls back to stdout/stderr.
struct Outputs {
  std::unique_ptr<std::ofstream> jsonl_file;
  std::unique_ptr<std::ofstream> csv_file;
  std::ostream* jsonl = &std::cout;
  std::ostream* csv = &std::cerr;

  explicit Outputs(const std::string& prefix) {
    if (prefix.empty()) return;
    jsonl_file = std::make_unique<std::ofstream>(prefix + ".jsonl");
    csv_file = std::make_unique<std::ofstream>(prefix + ".csv");
    if (!*jsonl_file || !*csv_file) throw std::runtime_error("cannot open output " + prefix);
    jsonl = jsonl_file.get();
    csv = csv_file.get();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Butterfly counting on bipartite graphs"};
  app.require_subcommand(1);

  // count
  GraphArgs count_graph;
  std::string count_algo;
  auto* count = app.add_subcommand("count", "exact butterfly count");
  count->add_option("method", count_algo, "exact | bruteforce")
      ->required()
      ->check(CLI::IsMember({"exact", "bruteforce"}));
  add_graph_options(count, count_graph, true);

  // estimate
  GraphArgs est_graph;
  std::string est_algo;
  RunSpec spec;
  std::optional<std::uint64_t> budget;
  std::string out_prefix;
  bool espar_verbatim = false;
  auto* estimate = app.add_subcommand("estimate", "seeded estimator runs");
  estimate->add_option("algorithm", est_algo, "espar | wps | tls | tlseg | hlgp")
      ->required()
      ->check(CLI::IsMember({"espar", "wps", "tls", "tlseg", "hlgp"}));
  add_graph_options(estimate, est_graph, true);
  estimate->add_option("--reps", spec.repetitions, "repetitions")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", spec.base_seed, "base seed; run i uses seed + i");
  estimate->add_option("--p", spec.espar_p, "espar keep probability");
  estimate->add_flag("--espar-verbatim", espar_verbatim, "keep the extra division by four");
  estimate->add_option("--rounds", spec.wps_rounds, "wps rounds");
  estimate->add_option("--s1-factor", spec.tls.s1_factor, "tls s1 = factor * sqrt(m)");
  estimate->add_option("--s1", spec.tls.s1, "tls fixed s1 (overrides the factor)");
  estimate->add_option("--batch-factor", spec.tls.batch_factor, "tls batch = factor * sqrt(m)");
  estimate->add_option("--max-outer", spec.tls.max_outer_rounds, "tls outer round cap");
  estimate->add_option("--max-inner", spec.tls.max_inner_batches, "tls inner batch cap");
  estimate->add_option("--epsilon", spec.theory.epsilon, "approximation parameter");
  estimate->add_option("--c-h", spec.theory.c_h, "non-light loss constant");
  estimate->add_option("--scale-t", spec.theory.scale_t, "multiplier on Heavy's t");
  estimate->add_option("--scale-s", spec.theory.scale_s, "multiplier on Heavy's s");
  estimate->add_option("--scale-s1", spec.theory.scale_s1, "multiplier on the set size");
  estimate->add_option("--scale-s2", spec.theory.scale_s2, "multiplier on s2");
  estimate->add_option("--scale-reps", spec.theory.scale_reps, "multiplier on repetitions");
  estimate->add_option("--b-bar", spec.b_bar, "tlseg butterfly guess (default: truth)");
  estimate->add_option("--w-bar", spec.w_bar, "tlseg wedge guess (default: degree scan)");
  estimate->add_option("--budget-queries", budget, "per-run query budget");
  estimate->add_option("--time-limit-ms", spec.time_limit_millis, "per-run time limit");
  estimate->add_option("--truth-cutoff", spec.truth_cutoff_edges,
                       "compute truth exactly up to this many edges");
  estimate->add_option("--out", out_prefix, "write PREFIX.jsonl and PREFIX.csv");

  // compare
  std::string config_path;
  std::string compare_prefix;
  auto* cmp = app.add_subcommand("compare", "run a list of specs and tabulate");
  cmp->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", compare_prefix, "write PREFIX.jsonl and PREFIX.csv");

  // generate
  std::string gen_spec;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a synthetic graph as KONECT text");
  generate->add_option("spec", gen_spec, "kab:a,b | er:n1,n2,p,seed | hub:h,t")->required();
  generate->add_option("--out", gen_out, "output path (default stdout)");

  // cache
  std::string cache_in;
  std::string cache_out;
  auto* cache = app.add_subcommand("cache", "convert an edge list to the binary cache");
  cache->add_option("input", cache_in, "edge list")->required()->check(CLI::ExistingFile);
  cache->add_option("output", cache_out, "cache path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*count) {
      const BipartiteGraph g = load(count_graph);
      const std::uint64_t b = count_algo == "exact" ? count_butterflies_exact_parallel(g)
                                                    : count_butterflies_bruteforce(g);
      std::cout << b << '\n';
    } else if (*estimate) {
      spec.algorithm = *parse_algorithm(est_algo);
      spec.graph_path = est_graph.path;
      spec.generator = est_graph.gen;
      spec.dataset = est_graph.dataset;
      spec.budget.max_total = budget;
      if (espar_verbatim) spec.espar_mode = EsparMode::PaperVerbatim;
      Outputs out(out_prefix);
      const RunSummary s = run(spec, out.jsonl);
      *out.csv << summary_csv_header() << '\n' << summary_csv_row(s) << '\n';
    } else if (*cmp) {
      std::ifstream in(config_path);
      const auto specs = parse_compare_config(in);
      Outputs out(compare_prefix);
      compare(specs, *out.csv, compare_prefix.empty() ? nullptr : out.jsonl);
    } else if (*generate) {
      const BipartiteGraph g = generate_synthetic(parse_generator_spec(gen_spec));
      if (gen_out.empty()) {
        write_konect(g, std::cout);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw std::runtime_error("cannot open " + gen_out);
        write_konect(g, f);
      }
    } else if (*cache) {
      load_graph(cache_in).save_binary(cache_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
