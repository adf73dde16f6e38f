#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "butterfly/baseline.hpp"
#include "butterfly/bigraph.hpp"
#include "butterfly/oracle.hpp"
#include "butterfly/report.hpp"
#include "butterfly/theory.hpp"
#include "butterfly/tls.hpp"

namespace bfly {

enum class Algorithm { Exact, Bruteforce, ESpar, WPS, TLS, TLSEG, HLGP };

std::string_view algorithm_name(Algorithm a);
/// Case-insensitive; accepts the names printed by algorithm_name.
std::optional<Algorithm> parse_algorithm(std::string_view name);

class TruthUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultTruthCutoff = 50'000'000;

struct RunSpec {
  Algorithm algorithm = Algorithm::TLS;
  /// Exactly one of graph_path / generator is used; the path wins if both are set.
  std::string graph_path;
  std::string generator;
  /// Label for output; derived from the source when empty.
  std::string dataset;

  std::uint64_t repetitions = 1;
  std::uint64_t base_seed = 1;

  double espar_p = 0.1;
  EsparMode espar_mode = EsparMode::Unbiased;
  std::uint64_t wps_rounds = kDefaultWpsRounds;
  TlsConfig tls;
  TheoryConstants theory;
  /// Guesses for a single TLS-EG call. Non-positive b_bar uses the truth;
  /// non-positive w_bar runs a charged degree scan.
  double b_bar = 0.0;
  double w_bar = 0.0;

  QueryBudget budget;
  std::optional<std::uint64_t> time_limit_millis;

  std::uint64_t truth_cutoff_edges = kDefaultTruthCutoff;
  bool require_truth = false;

  void validate() const;
  std::string dataset_name() const;
};

struct RunRecord {
  Algorithm algorithm = Algorithm::TLS;
  std::string dataset;
  EstimateReport report;
  std::optional<std::uint64_t> truth;
  std::optional<double> rel_error;
};

struct ErrorQuantiles {
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct RunSummary {
  Algorithm algorithm = Algorithm::TLS;
  std::string dataset;
  std::vector<RunRecord> runs;
  std::optional<std::uint64_t> truth;

  double mean_estimate = 0.0;
  double min_estimate = 0.0;
  double max_estimate = 0.0;
  double mean_q_degree = 0.0;
  double mean_q_neighbor = 0.0;
  double mean_q_pair = 0.0;
  double mean_q_edge_sample = 0.0;
  double mean_q_total = 0.0;
  double mean_wall_millis = 0.0;
  std::uint64_t flagged_runs = 0;
  /// Over runs with an available estimate and a truth b > 0.
  std::optional<ErrorQuantiles> rel_error;
};

/// Graph plus the label used in output.
struct LoadedGraph {
  BipartiteGraph graph;
  std::string dataset;
};

LoadedGraph load_source(const RunSpec& spec);

/// Exact count when m <= cutoff, else the integer in
/// $BUTTERFLY_TRUTH_DIR/<dataset>.truth, else nullopt.
std::optional<std::uint64_t> resolve_truth(const BipartiteGraph& g, const std::string& dataset,
                                           std::uint64_t cutoff_edges);

/// Linear-interpolation quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Runs the spec's repetitions with seeds base_seed + i (Exact and
/// Bruteforce run once). Runs execute in parallel; JSONL records are written
/// in run order, one flushed line per run.
RunSummary run(const RunSpec& spec, std::ostream* jsonl = nullptr);
RunSummary run(const RunSpec& spec, const BipartiteGraph& g, std::ostream* jsonl = nullptr);

std::string jsonl_record(const RunRecord& r);
std::string summary_csv_header();
/// With include_timing false the wall-time column is left empty.
std::string summary_csv_row(const RunSummary& s, bool include_timing = true);

/// One CSV row per spec; graphs shared by several specs are loaded once.
std::vector<RunSummary> compare(const std::vector<RunSpec>& specs, std::ostream& csv,
                                std::ostream* jsonl = nullptr, bool include_timing = true);

/// Reads a comparison config: {"graph": PATH | "gen": SPEC, "dataset"?,
/// "runs": [{"algorithm": ..., "reps"?, "seed"?, ...}]}. Per-run keys may
/// also override "graph"/"gen".
std::vector<RunSpec> parse_compare_config(std::istream& in);

}  // namespace bfly
