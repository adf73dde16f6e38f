#include "butterfly/tls.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace bfly {

namespace {

double rel_change(double current, double previous) {
  return std::abs(current - previous) / std::max(previous, 1.0);
}

std::uint64_t sqrt_scaled(double factor, std::uint64_t m) {
  const double v = std::floor(factor * std::sqrt(double(m)));
  return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
}

}  // namespace

void TlsConfig::validate() const {
  auto unit_open = [](double x) { return x > 0.0 && x < 1.0; };
  if (!unit_open(inner_rel_threshold) || !unit_open(outer_rel_threshold)) {
    throw std::invalid_argument("tls thresholds must lie in (0, 1)");
  }
  if (s1 == 0 && !(s1_factor > 0.0)) throw std::invalid_argument("tls s1 factor must be positive");
  if (inner_batch == 0 && !(batch_factor > 0.0)) {
    throw std::invalid_argument("tls batch factor must be positive");
  }
  if (max_outer_rounds == 0 || max_inner_batches == 0) {
    throw std::invalid_argument("tls round limits must be positive");
  }
}

std::uint64_t TlsConfig::resolved_s1(std::uint64_t m) const {
  return s1 > 0 ? s1 : sqrt_scaled(s1_factor, m);
}

std::uint64_t TlsConfig::resolved_batch(std::uint64_t m) const {
  return inner_batch > 0 ? inner_batch : sqrt_scaled(batch_factor, m);
}

RepresentativeSet build_representative_set(QueryOracle& oracle, std::uint64_t s1, Rng& rng) {
  if (s1 == 0) throw std::invalid_argument("representative set size must be positive");
  if (oracle.edge_count() == 0) throw EmptyGraphError();
  RepresentativeSet set;
  set.edges.reserve(s1);
  set.upper_degrees.reserve(s1);
  set.lower_degrees.reserve(s1);
  set.edge_degrees.reserve(s1);
  set.prefix_weights.reserve(s1);
  for (std::uint64_t k = 0; k < s1; ++k) set.edges.push_back(oracle.sample_edge(rng));
  for (const EdgeRef& e : set.edges) {
    const std::uint32_t du = oracle.degree(e.upper_ref());
    const std::uint32_t dv = oracle.degree(e.lower_ref());
    const std::uint64_t de = std::uint64_t{du} + dv - 2;
    set.upper_degrees.push_back(du);
    set.lower_degrees.push_back(dv);
    set.edge_degrees.push_back(de);
    set.total_weight += de;
    set.prefix_weights.push_back(set.total_weight);
  }
  return set;
}

SampledWedge sample_wedge_through(EdgeRef e, std::uint32_t upper_degree,
                                  std::uint32_t lower_degree, QueryOracle& oracle, Rng& rng) {
  const std::uint64_t de = std::uint64_t{upper_degree} + lower_degree - 2;
  if (de == 0) throw std::invalid_argument("edge carries no wedge");
  SampledWedge s;
  // Upper is the center with probability (d_u - 1) / d_e.
  const bool upper_center = rng.index(de) < std::uint64_t{upper_degree} - 1;
  const VertexRef center = upper_center ? e.upper_ref() : e.lower_ref();
  const VertexRef partner = upper_center ? e.lower_ref() : e.upper_ref();
  s.center_degree = upper_center ? upper_degree : lower_degree;
  s.partner_degree = upper_center ? lower_degree : upper_degree;

  VertexRef x;
  do {
    x = oracle.neighbor(center, rng.index(s.center_degree));
  } while (x == partner);
  s.wedge = {partner, center, x};
  return s;
}

std::optional<SampledWedge> sample_wedge(const RepresentativeSet& set, QueryOracle& oracle,
                                         Rng& rng) {
  if (set.total_weight == 0) return std::nullopt;
  const std::uint64_t r = rng.index(set.total_weight);
  const auto it = std::upper_bound(set.prefix_weights.begin(), set.prefix_weights.end(), r);
  const auto slot = static_cast<std::size_t>(std::distance(set.prefix_weights.begin(), it));
  SampledWedge s = sample_wedge_through(set.edges[slot], set.upper_degrees[slot],
                                        set.lower_degrees[slot], oracle, rng);
  s.slot = slot;
  return s;
}

ClosingContext closing_context(const SampledWedge& w, std::uint32_t sampled_degree) {
  ClosingContext ctx;
  ctx.center = w.center();
  ctx.sampled = w.sampled();
  ctx.sampled_degree = sampled_degree;
  const bool partner_is_y =
      precedes(w.partner(), w.partner_degree, w.sampled(), sampled_degree);
  ctx.y = partner_is_y ? w.partner() : w.sampled();
  ctx.other = partner_is_y ? w.sampled() : w.partner();
  ctx.y_degree = partner_is_y ? w.partner_degree : sampled_degree;
  return ctx;
}

std::optional<ClosingHit> closing_trial(const ClosingContext& ctx, QueryOracle& oracle,
                                        Rng& rng) {
  const VertexRef z = oracle.neighbor(ctx.y, rng.index(ctx.y_degree));
  if (z == ctx.center) return std::nullopt;
  if (!oracle.has_edge(z, ctx.other)) return std::nullopt;
  const std::uint32_t dz = oracle.degree(z);
  if (!precedes(ctx.sampled, ctx.sampled_degree, z, dz)) return std::nullopt;
  return ClosingHit{z, dz};
}

std::uint64_t trial_count(std::uint64_t y_degree, std::uint64_t m) {
  const double scaled = std::ceil(10.0 * double(y_degree) / std::sqrt(double(m)));
  return std::max<std::uint64_t>(static_cast<std::uint64_t>(scaled), 10);
}

double estimate_wedge_butterflies(const SampledWedge& w, QueryOracle& oracle, Rng& rng,
                                  std::uint64_t m, std::uint64_t* trials_used) {
  const std::uint32_t dx = oracle.degree(w.sampled());
  const ClosingContext ctx = closing_context(w, dx);
  const std::uint64_t trials = trial_count(ctx.y_degree, m);
  if (trials_used) *trials_used = trials;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    if (closing_trial(ctx, oracle, rng)) ++hits;
  }
  return double(hits) * (double(ctx.y_degree) / 4.0) / double(trials);
}

double scale_set_estimate(std::uint64_t m, std::uint64_t s1, std::uint64_t total_weight,
                          double wedge_sum, std::uint64_t s2) {
  if (s2 == 0) return 0.0;
  return double(m) / (double(s1) * double(s2)) * double(total_weight) * wedge_sum;
}

EstimateReport tls_estimate(QueryOracle& oracle, const TlsConfig& cfg, Rng& rng,
                            TlsTrace* trace) {
  cfg.validate();
  const std::uint64_t m = oracle.edge_count();
  if (m == 0) throw EmptyGraphError();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t s1 = cfg.resolved_s1(m);
  const std::uint64_t batch = cfg.resolved_batch(m);

  EstimateReport report;
  report.seed = rng.seed();
  double outer_sum = 0.0;
  double previous_mean = 0.0;
  bool outer_settled = false;

  // State of the round in flight, kept for partial reports.
  double round_estimate = 0.0;
  bool round_scaled = false;
  std::uint64_t s2_used = 0;

  try {
    while (report.rounds_used < cfg.max_outer_rounds) {
      const RepresentativeSet set = build_representative_set(oracle, s1, rng);
      round_estimate = 0.0;
      round_scaled = false;
      s2_used = 0;
      double wedge_sum = 0.0;
      if (set.total_weight > 0) {
        double previous = 0.0;
        for (std::uint64_t batches = 1; batches <= cfg.max_inner_batches; ++batches) {
          for (std::uint64_t j = 0; j < batch; ++j) {
            const auto w = sample_wedge(set, oracle, rng);
            std::uint64_t trials = 0;
            wedge_sum += estimate_wedge_butterflies(*w, oracle, rng, m, &trials);
            ++s2_used;
            if (trace) trace->max_trials = std::max(trace->max_trials, trials);
          }
          round_estimate = scale_set_estimate(m, s1, set.total_weight, wedge_sum, s2_used);
          round_scaled = true;
          if (batches >= 2 && batches >= cfg.min_inner_batches &&
              rel_change(round_estimate, previous) < cfg.inner_rel_threshold) {
            break;
          }
          previous = round_estimate;
        }
      }
      outer_sum += round_estimate;
      ++report.rounds_used;
      if (trace) {
        trace->wedges_per_round.push_back(s2_used);
        trace->round_estimates.push_back(round_estimate);
      }
      round_scaled = false;
      const double mean = outer_sum / double(report.rounds_used);
      if (report.rounds_used >= 2 && report.rounds_used >= cfg.min_outer_rounds &&
          rel_change(mean, previous_mean) < cfg.outer_rel_threshold) {
        outer_settled = true;
        break;
      }
      previous_mean = mean;
    }
    report.not_converged = !outer_settled;
  } catch (const LimitReached& e) {
    note_limit(report, e);
  }

  if (report.rounds_used > 0) {
    report.estimate = outer_sum / double(report.rounds_used);
  } else if (round_scaled) {
    report.estimate = round_estimate;
  } else {
    report.estimate_available = false;
  }
  report.queries = oracle.snapshot_counts();
  report.wall_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace bfly
