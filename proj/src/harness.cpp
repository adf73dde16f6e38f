#include "butterfly/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "butterfly/exact.hpp"

namespace bfly {

namespace {

using json = nlohmann::json;

constexpr Algorithm kAlgorithms[] = {Algorithm::Exact, Algorithm::Bruteforce, Algorithm::ESpar,
                                     Algorithm::WPS,   Algorithm::TLS,        Algorithm::TLSEG,
                                     Algorithm::HLGP};

std::string lower_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool single_shot(Algorithm a) { return a == Algorithm::Exact || a == Algorithm::Bruteforce; }

std::string format_double(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

EstimateReport run_exact(Algorithm a, const BipartiteGraph& g) {
  const auto start = std::chrono::steady_clock::now();
  EstimateReport r;
  const std::uint64_t b =
      a == Algorithm::Exact ? count_butterflies_exact(g) : count_butterflies_bruteforce(g);
  r.estimate = double(b);
  r.rounds_used = 1;
  r.wall_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

EstimateReport run_tlseg(const RunSpec& spec, QueryOracle& oracle, Rng& rng,
                         std::optional<std::uint64_t> truth) {
  const auto start = std::chrono::steady_clock::now();
  EstimateReport r;
  r.seed = rng.seed();
  double b_bar = spec.b_bar;
  if (!(b_bar > 0.0)) {
    if (!truth) throw TruthUnavailableError("tlseg without --b-bar needs ground truth");
    b_bar = std::max<double>(double(*truth), 1.0);
  }
  try {
    double w_bar = spec.w_bar;
    if (!(w_bar > 0.0)) w_bar = std::max(estimate_wedges(oracle, ExactDegreeScan{}, rng), 1.0);
    r.estimate = tls_eg(oracle, spec.theory, b_bar, w_bar, rng).estimate;
    r.rounds_used = 1;
  } catch (const LimitReached& e) {
    note_limit(r, e);
    r.estimate_available = false;
  }
  r.queries = oracle.snapshot_counts();
  r.wall_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

EstimateReport run_once(const RunSpec& spec, const BipartiteGraph& g, std::uint64_t seed,
                        std::optional<std::uint64_t> truth) {
  if (single_shot(spec.algorithm)) {
    EstimateReport r = run_exact(spec.algorithm, g);
    r.seed = seed;
    return r;
  }
  QueryOracle oracle(g, spec.budget);
  if (spec.time_limit_millis) {
    oracle.set_deadline(QueryOracle::Clock::now() +
                        std::chrono::milliseconds(*spec.time_limit_millis));
  }
  Rng rng(seed);
  switch (spec.algorithm) {
    case Algorithm::ESpar:
      return espar_estimate(oracle, spec.espar_p, rng, spec.espar_mode);
    case Algorithm::WPS:
      return wps_estimate(oracle, spec.wps_rounds, rng);
    case Algorithm::TLS:
      return tls_estimate(oracle, spec.tls, rng);
    case Algorithm::TLSEG:
      return run_tlseg(spec, oracle, rng, truth);
    case Algorithm::HLGP:
      return hlgp_estimate(oracle, spec.theory, rng);
    default:
      break;
  }
  throw std::logic_error("unhandled algorithm");
}

void summarize(RunSummary& s) {
  const std::size_t n = s.runs.size();
  if (n == 0) return;
  std::vector<double> errors;
  double est_sum = 0.0;
  std::size_t available = 0;
  s.min_estimate = std::numeric_limits<double>::infinity();
  s.max_estimate = -std::numeric_limits<double>::infinity();
  for (const RunRecord& r : s.runs) {
    const EstimateReport& rep = r.report;
    s.mean_q_degree += double(rep.queries.degree);
    s.mean_q_neighbor += double(rep.queries.neighbor);
    s.mean_q_pair += double(rep.queries.vertex_pair);
    s.mean_q_edge_sample += double(rep.queries.edge_sample);
    s.mean_q_total += double(rep.queries.total());
    s.mean_wall_millis += rep.wall_millis;
    if (!rep.flags().empty()) ++s.flagged_runs;
    if (!rep.estimate_available) continue;
    ++available;
    est_sum += rep.estimate;
    s.min_estimate = std::min(s.min_estimate, rep.estimate);
    s.max_estimate = std::max(s.max_estimate, rep.estimate);
    if (r.rel_error) errors.push_back(*r.rel_error);
  }
  const double dn = double(n);
  s.mean_q_degree /= dn;
  s.mean_q_neighbor /= dn;
  s.mean_q_pair /= dn;
  s.mean_q_edge_sample /= dn;
  s.mean_q_total /= dn;
  s.mean_wall_millis /= dn;
  if (available > 0) {
    s.mean_estimate = est_sum / double(available);
  } else {
    s.min_estimate = s.max_estimate = 0.0;
  }
  if (!errors.empty()) {
    ErrorQuantiles q;
    q.q05 = quantile(errors, 0.05);
    q.q50 = quantile(errors, 0.50);
    q.q95 = quantile(errors, 0.95);
    q.min = *std::min_element(errors.begin(), errors.end());
    q.max = *std::max_element(errors.begin(), errors.end());
    s.rel_error = q;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string source_key(const RunSpec& spec) {
  return spec.graph_path.empty() ? "gen:" + spec.generator : "path:" + spec.graph_path;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Exact: return "exact";
    case Algorithm::Bruteforce: return "bruteforce";
    case Algorithm::ESpar: return "espar";
    case Algorithm::WPS: return "wps";
    case Algorithm::TLS: return "tls";
    case Algorithm::TLSEG: return "tlseg";
    case Algorithm::HLGP: return "hlgp";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  const std::string key = lower_case(name);
  for (Algorithm a : kAlgorithms) {
    if (algorithm_name(a) == key) return a;
  }
  return std::nullopt;
}

void RunSpec::validate() const {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
  if (graph_path.empty() && generator.empty()) {
    throw std::invalid_argument("run needs a graph path or a generator spec");
  }
  switch (algorithm) {
    case Algorithm::ESpar:
      if (!(espar_p > 0.0 && espar_p <= 1.0)) throw std::invalid_argument("espar p must lie in (0, 1]");
      break;
    case Algorithm::WPS:
      if (wps_rounds == 0) throw std::invalid_argument("wps needs at least one round");
      break;
    case Algorithm::TLS:
      tls.validate();
      break;
    case Algorithm::TLSEG:
    case Algorithm::HLGP:
      theory.validate();
      break;
    default:
      break;
  }
}

std::string RunSpec::dataset_name() const {
  if (!dataset.empty()) return dataset;
  if (!graph_path.empty()) return std::filesystem::path(graph_path).stem().string();
  return generator;
}

LoadedGraph load_source(const RunSpec& spec) {
  LoadedGraph out{spec.graph_path.empty()
                      ? generate_synthetic(parse_generator_spec(spec.generator))
                      : load_graph(spec.graph_path),
                  spec.dataset_name()};
  return out;
}

std::optional<std::uint64_t> resolve_truth(const BipartiteGraph& g, const std::string& dataset,
                                           std::uint64_t cutoff_edges) {
  if (g.edge_count() <= cutoff_edges) return count_butterflies_exact_parallel(g);
  const char* dir = std::getenv("BUTTERFLY_TRUTH_DIR");
  if (dir == nullptr) return std::nullopt;
  std::ifstream in(std::filesystem::path(dir) / (dataset + ".truth"));
  if (!in) return std::nullopt;
  std::uint64_t b = 0;
  if (!(in >> b)) throw TruthUnavailableError("malformed truth file for " + dataset);
  return b;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty data");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * double(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - double(lo)) * (values[hi] - values[lo]);
}

std::string jsonl_record(const RunRecord& r) {
  const EstimateReport& rep = r.report;
  json j;
  j["algorithm"] = algorithm_name(r.algorithm);
  j["dataset"] = r.dataset;
  j["seed"] = rep.seed;
  j["estimate"] = rep.estimate_available ? json(rep.estimate) : json(nullptr);
  j["truth"] = r.truth ? json(*r.truth) : json(nullptr);
  j["rel_error"] = r.rel_error ? json(*r.rel_error) : json(nullptr);
  j["q_degree"] = rep.queries.degree;
  j["q_neighbor"] = rep.queries.neighbor;
  j["q_pair"] = rep.queries.vertex_pair;
  j["q_edge_sample"] = rep.queries.edge_sample;
  j["q_total"] = rep.queries.total();
  j["wall_millis"] = rep.wall_millis;
  j["rounds_used"] = rep.rounds_used;
  j["flags"] = rep.flags();
  return j.dump();
}

std::string summary_csv_header() {
  return "algorithm,dataset,runs,truth,mean_estimate,min_estimate,max_estimate,"
         "mean_q_degree,mean_q_neighbor,mean_q_pair,mean_q_edge_sample,mean_q_total,"
         "mean_wall_millis,flagged_runs,rel_err_q05,rel_err_q50,rel_err_q95,rel_err_min,"
         "rel_err_max";
}

std::string summary_csv_row(const RunSummary& s, bool include_timing) {
  std::ostringstream out;
  out << algorithm_name(s.algorithm) << ',' << csv_field(s.dataset) << ',' << s.runs.size() << ',';
  if (s.truth) out << *s.truth;
  out << ',' << format_double(s.mean_estimate) << ',' << format_double(s.min_estimate) << ','
      << format_double(s.max_estimate) << ',' << format_double(s.mean_q_degree) << ','
      << format_double(s.mean_q_neighbor) << ',' << format_double(s.mean_q_pair) << ','
      << format_double(s.mean_q_edge_sample) << ',' << format_double(s.mean_q_total) << ',';
  if (include_timing) out << format_double(s.mean_wall_millis);
  out << ',' << s.flagged_runs;
  if (s.rel_error) {
    const ErrorQuantiles& q = *s.rel_error;
    for (double v : {q.q05, q.q50, q.q95, q.min, q.max}) out << ',' << format_double(v);
  } else {
    out << ",,,,,";
  }
  return out.str();
}

RunSummary run(const RunSpec& spec, std::ostream* jsonl) {
  spec.validate();
  const LoadedGraph loaded = load_source(spec);
  return run(spec, loaded.graph, jsonl);
}

RunSummary run(const RunSpec& spec, const BipartiteGraph& g, std::ostream* jsonl) {
  spec.validate();
  RunSummary summary;
  summary.algorithm = spec.algorithm;
  summary.dataset = spec.dataset_name();
  summary.truth = resolve_truth(g, summary.dataset, spec.truth_cutoff_edges);
  if (spec.require_truth && !summary.truth) {
    throw TruthUnavailableError("no ground truth for " + summary.dataset);
  }

  const std::uint64_t reps = single_shot(spec.algorithm) ? 1 : spec.repetitions;
  summary.runs.resize(reps);
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(reps);

#pragma omp parallel for ordered schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    RunRecord& rec = summary.runs[static_cast<std::size_t>(i)];
    bool ok = true;
    try {
      rec.algorithm = spec.algorithm;
      rec.dataset = summary.dataset;
      rec.truth = summary.truth;
      rec.report = run_once(spec, g, spec.base_seed + std::uint64_t(i), summary.truth);
      if (summary.truth && *summary.truth > 0 && rec.report.estimate_available) {
        const double b = double(*summary.truth);
        rec.rel_error = (rec.report.estimate - b) / b;
      }
    } catch (...) {
      ok = false;
#pragma omp critical(harness_failure)
      if (!failure) failure = std::current_exception();
    }
#pragma omp ordered
    if (ok && jsonl != nullptr && !failure) {
      *jsonl << jsonl_record(rec) << '\n';
      jsonl->flush();
    }
  }
  if (failure) std::rethrow_exception(failure);
  summarize(summary);
  return summary;
}

std::vector<RunSummary> compare(const std::vector<RunSpec>& specs, std::ostream& csv,
                                std::ostream* jsonl, bool include_timing) {
  csv << summary_csv_header() << '\n';
  std::map<std::string, BipartiteGraph> graphs;
  std::vector<RunSummary> out;
  out.reserve(specs.size());
  for (const RunSpec& spec : specs) {
    spec.validate();
    const std::string key = source_key(spec);
    auto it = graphs.find(key);
    if (it == graphs.end()) it = graphs.emplace(key, load_source(spec).graph).first;
    out.push_back(run(spec, it->second, jsonl));
    csv << summary_csv_row(out.back(), include_timing) << '\n';
  }
  return out;
}

std::vector<RunSpec> parse_compare_config(std::istream& in) {
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("compare config: ") + e.what());
  }
  if (!cfg.is_object()) throw std::invalid_argument("compare config must be a JSON object");
  const json runs = cfg.value("runs", json::array());
  if (!runs.is_array()) throw std::invalid_argument("compare config: runs must be an array");

  std::vector<RunSpec> specs;
  for (const json& r : runs) {
    RunSpec s;
    const std::string name = r.at("algorithm").get<std::string>();
    const auto algo = parse_algorithm(name);
    if (!algo) throw std::invalid_argument("compare config: unknown algorithm " + name);
    s.algorithm = *algo;
    s.graph_path = r.value("graph", cfg.value("graph", std::string()));
    s.generator = r.value("gen", cfg.value("gen", std::string()));
    s.dataset = r.value("dataset", cfg.value("dataset", std::string()));
    s.repetitions = r.value("reps", std::uint64_t{1});
    s.base_seed = r.value("seed", std::uint64_t{1});
    s.espar_p = r.value("p", s.espar_p);
    if (r.value("espar_verbatim", false)) s.espar_mode = EsparMode::PaperVerbatim;
    s.wps_rounds = r.value("rounds", s.wps_rounds);
    s.tls.s1_factor = r.value("s1_factor", s.tls.s1_factor);
    s.tls.batch_factor = r.value("batch_factor", s.tls.batch_factor);
    s.tls.max_outer_rounds = r.value("max_outer_rounds", s.tls.max_outer_rounds);
    s.tls.max_inner_batches = r.value("max_inner_batches", s.tls.max_inner_batches);
    s.theory.epsilon = r.value("epsilon", s.theory.epsilon);
    s.theory.c_h = r.value("c_h", s.theory.c_h);
    s.theory.scale_t = r.value("scale_t", s.theory.scale_t);
    s.theory.scale_s = r.value("scale_s", s.theory.scale_s);
    s.theory.scale_s1 = r.value("scale_s1", s.theory.scale_s1);
    s.theory.scale_s2 = r.value("scale_s2", s.theory.scale_s2);
    s.theory.scale_reps = r.value("scale_reps", s.theory.scale_reps);
    s.b_bar = r.value("b_bar", 0.0);
    s.w_bar = r.value("w_bar", 0.0);
    if (r.contains("budget_queries")) s.budget.max_total = r.at("budget_queries").get<std::uint64_t>();
    if (r.contains("time_limit_ms")) s.time_limit_millis = r.at("time_limit_ms").get<std::uint64_t>();
    s.truth_cutoff_edges = r.value("truth_cutoff_edges", cfg.value("truth_cutoff_edges", kDefaultTruthCutoff));
    s.validate();
    specs.push_back(std::move(s));
  }
  return specs;
}

}  // namespace bfly
