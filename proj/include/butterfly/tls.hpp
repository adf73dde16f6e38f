#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "butterfly/bigraph.hpp"
#include "butterfly/oracle.hpp"
#include "butterfly/report.hpp"
#include "butterfly/rng.hpp"

namespace bfly {

/// Two-level sampler settings. Zero sizes mean "derive from m": s1 becomes
/// floor(s1_factor * sqrt(m)) and the inner batch floor(batch_factor *
/// sqrt(m)), both at least 1.
struct TlsConfig {
  std::uint64_t s1 = 0;
  double s1_factor = 0.5;
  std::uint64_t inner_batch = 0;
  double batch_factor = 0.1;
  double inner_rel_threshold = 0.02;
  double outer_rel_threshold = 0.002;
  std::uint64_t max_outer_rounds = 1000;
  std::uint64_t max_inner_batches = 1000;
  std::uint64_t min_inner_batches = 3;
  std::uint64_t min_outer_rounds = 2;

  /// Throws std::invalid_argument on thresholds outside (0,1) or zero limits.
  void validate() const;
  std::uint64_t resolved_s1(std::uint64_t m) const;
  std::uint64_t resolved_batch(std::uint64_t m) const;
};

/// Edges drawn with replacement plus the degree data needed for wedge
/// sampling. prefix_weights[k] = sum of edge_degrees[0..k].
struct RepresentativeSet {
  std::vector<EdgeRef> edges;
  std::vector<std::uint32_t> upper_degrees;
  std::vector<std::uint32_t> lower_degrees;
  std::vector<std::uint64_t> edge_degrees;
  std::vector<std::uint64_t> prefix_weights;
  std::uint64_t total_weight = 0;

  std::size_t size() const { return edges.size(); }
};

/// Wedge (partner, center, x) grown from a sampled edge (partner, center).
struct SampledWedge {
  Wedge wedge;
  std::size_t slot = 0;
  std::uint32_t partner_degree = 0;
  std::uint32_t center_degree = 0;

  VertexRef partner() const { return wedge.endpoint_a; }
  VertexRef center() const { return wedge.center; }
  VertexRef sampled() const { return wedge.endpoint_b; }
};

/// s1 edge samples and 2*s1 degree queries.
RepresentativeSet build_representative_set(QueryOracle& oracle, std::uint64_t s1, Rng& rng);

/// Picks a slot proportionally to d_e, a center c among its endpoints with
/// probability (d_c - 1) / d_e, and x uniform in N(c) minus the partner
/// (rejection on the partner, one neighbor query per draw). Returns nullopt
/// when the set carries no wedge.
std::optional<SampledWedge> sample_wedge(const RepresentativeSet& set, QueryOracle& oracle,
                                         Rng& rng);

/// Same wedge step for a single edge with known endpoint degrees. Requires
/// d_e > 0.
SampledWedge sample_wedge_through(EdgeRef e, std::uint32_t upper_degree,
                                  std::uint32_t lower_degree, QueryOracle& oracle, Rng& rng);

/// Closure test state for one wedge: y is the endpoint of smaller degree
/// (ties by vertex order), `other` the remaining endpoint.
struct ClosingContext {
  VertexRef center;
  VertexRef sampled;
  VertexRef y;
  VertexRef other;
  std::uint32_t sampled_degree = 0;
  std::uint32_t y_degree = 0;
};

ClosingContext closing_context(const SampledWedge& w, std::uint32_t sampled_degree);

struct ClosingHit {
  VertexRef z;
  std::uint32_t z_degree = 0;
};

/// One closing trial: z uniform in N(y). Hits when z != center, z is
/// adjacent to `other` and sampled ≺ z. Costs one neighbor query, one
/// vertex-pair query unless z is the center, and one degree query for z on a
/// closing hit.
std::optional<ClosingHit> closing_trial(const ClosingContext& ctx, QueryOracle& oracle, Rng& rng);

/// max(ceil(10 * d_y / sqrt(m)), 10).
std::uint64_t trial_count(std::uint64_t y_degree, std::uint64_t m);

/// Averages R trials, each worth d_y / 4 on a hit. Queries the degree of x.
double estimate_wedge_butterflies(const SampledWedge& w, QueryOracle& oracle, Rng& rng,
                                  std::uint64_t m, std::uint64_t* trials_used = nullptr);

/// (m / (s1 * s2)) * W(S) * sum of per-wedge estimates.
double scale_set_estimate(std::uint64_t m, std::uint64_t s1, std::uint64_t total_weight,
                          double wedge_sum, std::uint64_t s2);

/// Per-run bookkeeping for cost analysis.
struct TlsTrace {
  std::vector<std::uint64_t> wedges_per_round;
  std::vector<double> round_estimates;
  std::uint64_t max_trials = 0;
};

/// Outer rounds of representative sets with batch-wise auto-termination.
EstimateReport tls_estimate(QueryOracle& oracle, const TlsConfig& cfg, Rng& rng,
                            TlsTrace* trace = nullptr);

}  // namespace bfly
