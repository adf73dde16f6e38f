#include "butterfly/theory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "butterfly/exact.hpp"
#include "butterfly/tls.hpp"

namespace bfly {

namespace {

std::uint64_t ceil_count(double x) {
  if (!(x < 1.8e19)) throw std::overflow_error("sample size does not fit in 64 bits");
  const double c = std::ceil(x);
  return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

void require_positive_guesses(double b_bar, double w_bar) {
  if (!(b_bar > 0.0) || !(w_bar > 0.0)) {
    throw std::invalid_argument("b_bar and w_bar must be positive");
  }
}

}  // namespace

void TheoryConstants::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(c_h > 0.0)) throw std::invalid_argument("c_H must be positive");
  for (double s : {scale_t, scale_s, scale_s1, scale_s2, scale_reps, rep_constant}) {
    if (!(s > 0.0)) throw std::invalid_argument("theory multipliers must be positive");
  }
}

double estimate_wedges(QueryOracle& oracle, const WedgeEstimateMode& mode, Rng& rng) {
  if (oracle.edge_count() == 0) throw EmptyGraphError();
  if (std::holds_alternative<ExactDegreeScan>(mode)) {
    double w = 0.0;
    for (Side s : {Side::Upper, Side::Lower}) {
      const std::uint32_t count = oracle.side_count(s);
      for (std::uint32_t i = 0; i < count; ++i) {
        const double d = oracle.degree({s, i});
        w += 0.5 * d * (d - 1.0);
      }
    }
    return w;
  }
  // A random endpoint of a uniform edge is v with probability d_v / 2m, so
  // E[d - 1] = w / m.
  const std::uint64_t k = std::get<SampledDegrees>(mode).samples;
  if (k == 0) throw std::invalid_argument("sampled wedge estimate needs at least one sample");
  double sum = 0.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    const EdgeRef e = oracle.sample_edge(rng);
    const VertexRef v = rng.bernoulli(0.5) ? e.upper_ref() : e.lower_ref();
    sum += double(oracle.degree(v)) - 1.0;
  }
  return double(oracle.edge_count()) * sum / double(k);
}

std::uint64_t heavy_repetitions(const TheoryConstants& tc, std::uint64_t m) {
  return ceil_count(tc.scale_t * 48.0 * std::log(2.0 * double(m)));
}

std::uint64_t heavy_wedge_samples(const TheoryConstants& tc, std::uint64_t m, double b_bar,
                                  double w_bar) {
  return ceil_count(tc.scale_s * 12.0 * std::sqrt(double(m)) * w_bar /
                    (tc.epsilon * tc.epsilon * b_bar));
}

double heavy_threshold(const TheoryConstants& tc, double b_bar) {
  return std::pow(b_bar, 0.75) / std::pow(tc.epsilon, 0.25);
}

HeavyLabel classify_heavy(EdgeRef e, std::uint32_t upper_degree, std::uint32_t lower_degree,
                          QueryOracle& oracle, const TheoryConstants& tc, double b_bar,
                          double w_bar, Rng& rng) {
  require_positive_guesses(b_bar, w_bar);
  const std::uint64_t de = std::uint64_t{upper_degree} + lower_degree - 2;
  if (de == 0) return HeavyLabel::Light;
  if (w_bar < std::pow(tc.epsilon * b_bar, 0.25) * double(de)) return HeavyLabel::Heavy;

  const std::uint64_t m = oracle.edge_count();
  const double sqrt_m = std::sqrt(double(m));
  const std::uint64_t t = heavy_repetitions(tc, m);
  const std::uint64_t s = heavy_wedge_samples(tc, m, b_bar, w_bar);
  std::vector<double> xs;
  xs.reserve(t);
  for (std::uint64_t i = 0; i < t; ++i) {
    double y_sum = 0.0;
    for (std::uint64_t j = 0; j < s; ++j) {
      const SampledWedge w = sample_wedge_through(e, upper_degree, lower_degree, oracle, rng);
      const ClosingContext ctx = closing_context(w, oracle.degree(w.sampled()));
      const auto r = static_cast<std::uint64_t>(std::ceil(double(ctx.y_degree) / sqrt_m));
      std::uint64_t hits = 0;
      for (std::uint64_t k = 0; k < r; ++k) {
        if (closing_trial(ctx, oracle, rng)) ++hits;
      }
      y_sum += double(hits) * double(ctx.y_degree) / double(r);
    }
    xs.push_back(double(de) * y_sum / double(s));
  }
  return median(std::move(xs)) > heavy_threshold(tc, b_bar) ? HeavyLabel::Heavy
                                                             : HeavyLabel::Light;
}

HeavyLabel EdgePartitionCache::label(EdgeRef e, std::uint32_t upper_degree,
                                     std::uint32_t lower_degree, QueryOracle& oracle) {
  const std::uint64_t k = key(e);
  if (const auto it = labels_.find(k); it != labels_.end()) return it->second;
  if (default_) return *default_;
  Rng rng(derive_seed(seed_, k));
  const HeavyLabel l =
      classify_heavy(e, upper_degree, lower_degree, oracle, tc_, b_bar_, w_bar_, rng);
  labels_.emplace(k, l);
  ++classifications_;
  return l;
}

std::optional<HeavyLabel> EdgePartitionCache::known(EdgeRef e) const {
  if (const auto it = labels_.find(key(e)); it != labels_.end()) return it->second;
  return default_;
}

int light_edge_count_in_butterfly(const ButterflyView& btf, EdgePartitionCache& partition,
                                  QueryOracle& oracle) {
  int light = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const EdgeRef e{btf.upper[i], btf.lower[j]};
      if (partition.label(e, btf.upper_degree[i], btf.lower_degree[j], oracle) ==
          HeavyLabel::Light) {
        ++light;
      }
    }
  }
  return light;
}

double sizing_constant(const TheoryConstants& tc) {
  const double gap = 1.0 - tc.c_h * tc.epsilon;
  if (!(gap > 0.0)) throw std::invalid_argument("c_H * epsilon must be below 1");
  return 2.0 * std::ceil(1.0 / (2.0 * gap));
}

TlsEgSizes tls_eg_sizes(const TheoryConstants& tc, std::uint64_t m, std::uint64_t n,
                        double b_bar, double w_bar) {
  require_positive_guesses(b_bar, w_bar);
  const double eps = tc.epsilon;
  const double ln_n = std::log(double(n));
  TlsEgSizes sizes;
  sizes.s1 = ceil_count(tc.scale_s1 * sizing_constant(tc) * double(m) *
                        std::log(double(n) / (eps * eps)) /
                        (std::pow(b_bar, 0.25) * std::pow(eps, 2.25)));
  sizes.s2 = ceil_count(tc.scale_s2 * 40.0 * (1.0 + 2.0 * tc.c_h * eps) * w_bar *
                        std::sqrt(double(m)) * ln_n * ln_n / (std::pow(eps, 4.0) * b_bar));
  return sizes;
}

TlsEgResult tls_eg(QueryOracle& oracle, const TheoryConstants& tc, double b_bar, double w_bar,
                   Rng& rng, EdgePartitionCache* partition) {
  tc.validate();
  const std::uint64_t m = oracle.edge_count();
  if (m == 0) throw EmptyGraphError();
  std::optional<EdgePartitionCache> local;
  if (!partition) {
    local.emplace(rng.engine()(), tc, b_bar, w_bar);
    partition = &*local;
  }
  const std::size_t classified_before = partition->classified();

  TlsEgResult result;
  result.sizes = tls_eg_sizes(tc, m, oracle.vertex_count(), b_bar, w_bar);
  const double sqrt_m = std::sqrt(double(m));
  const RepresentativeSet set = build_representative_set(oracle, result.sizes.s1, rng);

  double y_total = 0.0;
  if (set.total_weight > 0) {
    for (std::uint64_t i = 0; i < result.sizes.s2; ++i) {
      const SampledWedge w = *sample_wedge(set, oracle, rng);
      const std::uint32_t dx = oracle.degree(w.sampled());
      const ClosingContext ctx = closing_context(w, dx);
      const double dy = ctx.y_degree;
      std::uint64_t r = 0;
      if (dy <= sqrt_m) {
        r = rng.bernoulli(dy / sqrt_m) ? 1 : 0;
      } else {
        r = static_cast<std::uint64_t>(std::ceil(dy / sqrt_m));
      }
      double z_sum = 0.0;
      for (std::uint64_t j = 0; j < r; ++j) {
        const auto hit = closing_trial(ctx, oracle, rng);
        if (!hit) continue;
        const std::size_t k = w.slot;
        if (partition->label(set.edges[k], set.upper_degrees[k], set.lower_degrees[k], oracle) !=
            HeavyLabel::Light) {
          continue;
        }
        // Partner and x share a side; center and z share the other.
        ButterflyView btf;
        const bool center_upper = w.center().side == Side::Upper;
        const VertexRef a = center_upper ? w.center() : w.partner();
        const VertexRef b = center_upper ? hit->z : w.sampled();
        const VertexRef c = center_upper ? w.partner() : w.center();
        const VertexRef d = center_upper ? w.sampled() : hit->z;
        btf.upper = {a.index, b.index};
        btf.lower = {c.index, d.index};
        btf.upper_degree = {center_upper ? w.center_degree : w.partner_degree,
                            center_upper ? hit->z_degree : dx};
        btf.lower_degree = {center_upper ? w.partner_degree : w.center_degree,
                            center_upper ? dx : hit->z_degree};
        const int light = light_edge_count_in_butterfly(btf, *partition, oracle);
        if (light < 1) throw std::logic_error("light sampled edge missing from its butterfly");
        z_sum += std::max(sqrt_m, dy) / double(light);
      }
      if (r > 0) y_total += z_sum / double(r);
    }
  }
  result.estimate = double(m) / (double(result.sizes.s1) * double(result.sizes.s2)) *
                    double(set.total_weight) * y_total;
  result.heavy_checks = partition->classified() - classified_before;
  return result;
}

std::uint64_t hlgp_repetitions(const TheoryConstants& tc, double eps_internal, std::uint64_t n) {
  const double lnln = n > 2 ? std::log(std::log(double(n))) : 0.0;
  return ceil_count(tc.scale_reps * tc.rep_constant * lnln / eps_internal);
}

EstimateReport hlgp_estimate(QueryOracle& oracle, const TheoryConstants& tc, Rng& rng,
                             HlgpTrace* trace, const WedgeEstimateMode& wedge_mode) {
  tc.validate();
  if (oracle.edge_count() == 0) throw EmptyGraphError();
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report;
  report.seed = rng.seed();

  TheoryConstants inner = tc;
  inner.epsilon = tc.epsilon / (3.0 * tc.c_h);
  const std::uint64_t n = oracle.vertex_count();
  const std::uint64_t reps = hlgp_repetitions(tc, inner.epsilon, n);
  const double top = std::pow(double(n), 4.0);
  int levels = 0;
  while (std::ldexp(top, -(levels + 1)) >= 1.0) ++levels;
  const std::uint64_t partition_seed = rng.engine()();
  if (trace) trace->repetitions = reps;

  double last_x = 0.0;
  bool have_x = false;
  bool accepted = false;
  try {
    // A matching has no wedges; any positive guess keeps the sizes finite.
    const double w_bar = std::max(estimate_wedges(oracle, wedge_mode, rng), 1.0);
    if (trace) trace->w_bar = w_bar;
    std::map<int, EdgePartitionCache> partitions;
    for (int sweep = 0; sweep <= levels && !accepted; ++sweep) {
      for (int k = 0; k <= sweep; ++k) {
        const double b_bar = std::ldexp(top, -k);
        if (trace) {
          trace->tried.push_back(b_bar);
          trace->sweep_floor.push_back(std::ldexp(top, -sweep));
        }
        auto [it, fresh] =
            partitions.try_emplace(k, derive_seed(partition_seed, std::uint64_t(k)), inner, b_bar,
                                   w_bar);
        double x = std::numeric_limits<double>::infinity();
        for (std::uint64_t r = 0; r < reps; ++r) {
          x = std::min(x, tls_eg(oracle, inner, b_bar, w_bar, rng, &it->second).estimate);
        }
        last_x = x;
        have_x = true;
        ++report.rounds_used;
        if (x >= b_bar) {
          accepted = true;
          break;
        }
      }
    }
    report.not_converged = !accepted;
  } catch (const LimitReached& e) {
    note_limit(report, e);
    report.estimate_available = have_x;
  }
  report.estimate = last_x;
  report.queries = oracle.snapshot_counts();
  report.wall_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// --- exact analysis ----------------------------------------------------------

std::vector<Butterfly> list_butterflies(const BipartiteGraph& g) {
  std::vector<Butterfly> out;
  const std::uint32_t nu = g.upper_count();
  std::vector<std::uint32_t> mark(g.lower_count(), 0);
  std::vector<std::uint32_t> common;
  for (std::uint32_t u1 = 0; u1 < nu; ++u1) {
    for (std::uint32_t v : g.neighbors(VertexRef::upper(u1))) mark[v] = u1 + 1;
    for (std::uint32_t u2 = u1 + 1; u2 < nu; ++u2) {
      common.clear();
      for (std::uint32_t v : g.neighbors(VertexRef::upper(u2))) {
        if (mark[v] == u1 + 1) common.push_back(v);
      }
      std::sort(common.begin(), common.end());
      for (std::size_t a = 0; a < common.size(); ++a) {
        for (std::size_t b = a + 1; b < common.size(); ++b) {
          out.push_back({{u1, u2}, {common[a], common[b]}});
        }
      }
    }
  }
  return out;
}

std::uint64_t edge_id(const BipartiteGraph& g, EdgeRef e) {
  const auto nbrs = g.neighbors(VertexRef::upper(e.upper));
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), e.lower);
  if (it == nbrs.end() || *it != e.lower) {
    throw std::out_of_range("edge not in graph");
  }
  return g.first_edge_id(e.upper) + static_cast<std::uint64_t>(it - nbrs.begin());
}

std::vector<double> light_edge_weights(const BipartiteGraph& g, std::span<const bool> light) {
  if (light.size() != g.edge_count()) throw std::invalid_argument("one flag per edge expected");
  std::vector<double> wt(g.edge_count(), 0.0);
  for (const Butterfly& btf : list_butterflies(g)) {
    std::array<std::uint64_t, 4> ids{};
    int count = 0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const std::uint64_t id = edge_id(g, {btf.upper[i], btf.lower[j]});
        if (light[id]) ids[count++] = id;
      }
    }
    for (int k = 0; k < count; ++k) wt[ids[k]] += 1.0 / count;
  }
  return wt;
}

bool is_heavy_edge(std::uint64_t b_e, std::uint64_t d_e, double b_bar, double w_bar, double eps) {
  return double(b_e) > 2.0 * std::pow(b_bar, 0.75) / std::pow(eps, 0.25) ||
         double(d_e) > w_bar / std::pow(eps * b_bar, 0.25);
}

bool is_light_edge(std::uint64_t b_e, std::uint64_t d_e, double b_bar, double w_bar, double eps) {
  return double(b_e) < std::pow(b_bar, 0.75) / (2.0 * std::pow(eps, 0.25)) &&
         double(d_e) < w_bar / std::pow(eps * b_bar, 0.25);
}

std::uint64_t nonlight_butterfly_count(const BipartiteGraph& g, double b_bar, double w_bar,
                                       double eps) {
  const std::vector<std::uint64_t> per_edge = butterflies_all_edges(g);
  std::vector<bool> light(g.edge_count());
  for (std::uint64_t id = 0; id < g.edge_count(); ++id) {
    light[id] = is_light_edge(per_edge[id], edge_degree(g, g.edge(id)), b_bar, w_bar, eps);
  }
  std::uint64_t count = 0;
  for (const Butterfly& btf : list_butterflies(g)) {
    bool any_light = false;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        any_light = any_light || light[edge_id(g, {btf.upper[i], btf.lower[j]})];
      }
    }
    if (!any_light) ++count;
  }
  return count;
}

}  // namespace bfly
