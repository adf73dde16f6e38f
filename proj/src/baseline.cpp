#include "butterfly/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "butterfly/exact.hpp"

namespace bfly {

namespace {

double millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

double choose2(std::uint64_t k) { return k < 2 ? 0.0 : 0.5 * double(k) * double(k - 1); }

}  // namespace

EstimateReport espar_estimate(QueryOracle& oracle, double p, Rng& rng, EsparMode mode) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("espar p must lie in (0, 1]");
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report;
  report.seed = rng.seed();

  const std::uint64_t m = oracle.edge_count();
  std::vector<EdgeRef> kept;
  kept.reserve(static_cast<std::size_t>(double(m) * p * 1.1) + 16);
  try {
    // Skip lengths between retained edges are geometric, equivalent to one
    // Bernoulli(p) trial per edge id.
    std::geometric_distribution<std::uint64_t> gap(p);
    for (std::uint64_t id = gap(rng.engine()); id < m; id += 1 + gap(rng.engine())) {
      kept.push_back(oracle.read_edge(id));
    }
  } catch (const LimitReached& e) {
    note_limit(report, e);
    report.estimate_available = false;
    report.queries = oracle.snapshot_counts();
    report.wall_millis = millis_since(start);
    return report;
  }

  const auto sub = BipartiteGraph::from_edges(oracle.side_count(Side::Upper),
                                              oracle.side_count(Side::Lower), kept);
  const double count = double(count_butterflies_exact(sub));
  const double scale = std::pow(p, -4.0);
  report.estimate = mode == EsparMode::Unbiased ? count * scale : (count / 4.0) * scale;
  report.rounds_used = 1;
  report.queries = oracle.snapshot_counts();
  report.wall_millis = millis_since(start);
  return report;
}

double wps_pair_contribution(QueryOracle& oracle, VertexRef u, std::uint64_t deg_u, VertexRef v,
                             std::uint64_t deg_v) {
  if (u == v) return 0.0;
  const bool u_smaller = deg_u <= deg_v;
  const VertexRef scan = u_smaller ? u : v;
  const VertexRef other = u_smaller ? v : u;
  const std::uint64_t scan_deg = u_smaller ? deg_u : deg_v;
  std::uint64_t common = 0;
  for (std::uint64_t i = 0; i < scan_deg; ++i) {
    if (oracle.has_edge(other, oracle.neighbor(scan, i))) ++common;
  }
  const double m = double(oracle.edge_count());
  return m * m / (2.0 * double(deg_u) * double(deg_v)) * choose2(common);
}

EstimateReport wps_estimate(QueryOracle& oracle, std::uint64_t rounds, Rng& rng) {
  if (rounds == 0) throw std::invalid_argument("wps needs at least one round");
  if (oracle.edge_count() == 0) throw EmptyGraphError();
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report;
  report.seed = rng.seed();

  // Smaller layer, upper on ties.
  const Side layer = oracle.side_count(Side::Upper) <= oracle.side_count(Side::Lower)
                         ? Side::Upper
                         : Side::Lower;
  const std::uint32_t layer_size = oracle.side_count(layer);

  double sum = 0.0;
  try {
    std::vector<std::uint64_t> prefix(layer_size + std::size_t{1}, 0);
    for (std::uint32_t i = 0; i < layer_size; ++i) {
      prefix[i + 1] = prefix[i] + oracle.degree({layer, i});
    }
    const std::uint64_t m = prefix.back();
    auto draw = [&] {
      const std::uint64_t r = rng.index(m);
      const auto it = std::upper_bound(prefix.begin(), prefix.end(), r);
      return static_cast<std::uint32_t>(std::distance(prefix.begin(), it) - 1);
    };
    for (; report.rounds_used < rounds; ++report.rounds_used) {
      const std::uint32_t a = draw();
      const std::uint32_t b = draw();
      sum += wps_pair_contribution(oracle, {layer, a}, prefix[a + 1] - prefix[a], {layer, b},
                                   prefix[b + 1] - prefix[b]);
    }
  } catch (const LimitReached& e) {
    note_limit(report, e);
    if (report.rounds_used == 0) report.estimate_available = false;
  }
  report.estimate = report.rounds_used > 0 ? sum / double(report.rounds_used) : 0.0;
  report.queries = oracle.snapshot_counts();
  report.wall_millis = millis_since(start);
  return report;
}

}  // namespace bfly
