#pragma once

// Graph fixtures and closed-form / enumeration oracles shared by the unit and
// acceptance tests. The oracles read the graph directly and never go through
// the estimator code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "butterfly/bigraph.hpp"

namespace fixtures {

using bfly::BipartiteGraph;
using bfly::EdgeRef;
using bfly::Side;
using bfly::VertexRef;

inline BipartiteGraph make(std::uint32_t nu, std::uint32_t nl, std::vector<EdgeRef> edges) {
  return BipartiteGraph::from_edges(nu, nl, edges);
}

/// Two butterflies sharing the edge (u1, v1).
inline BipartiteGraph fig1() {
  return make(3, 3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}});
}

inline BipartiteGraph complete(std::uint32_t a, std::uint32_t b) {
  return bfly::generate_synthetic(bfly::CompleteBipartite{a, b});
}

inline BipartiteGraph random_graph(std::uint32_t nu, std::uint32_t nl, double p,
                                   std::uint64_t seed) {
  return bfly::generate_synthetic(bfly::ErdosRenyi{nu, nl, p, seed});
}

/// Vertex-disjoint union, second graph's ids shifted past the first's.
inline BipartiteGraph disjoint_union(const BipartiteGraph& a, const BipartiteGraph& b) {
  std::vector<EdgeRef> edges;
  for (std::uint64_t i = 0; i < a.edge_count(); ++i) edges.push_back(a.edge(i));
  for (std::uint64_t i = 0; i < b.edge_count(); ++i) {
    const EdgeRef e = b.edge(i);
    edges.push_back({e.upper + a.upper_count(), e.lower + a.lower_count()});
  }
  return BipartiteGraph::from_edges(a.upper_count() + b.upper_count(),
                                    a.lower_count() + b.lower_count(), edges);
}

inline double choose2(double k) { return k * (k - 1.0) / 2.0; }

inline bool adjacent(const BipartiteGraph& g, VertexRef a, VertexRef b) {
  const VertexRef up = a.side == Side::Upper ? a : b;
  const VertexRef lo = a.side == Side::Upper ? b : a;
  for (std::uint32_t x : g.neighbors(up)) {
    if (x == lo.index) return true;
  }
  return false;
}

/// Degree first, then upper before lower, then index.
inline bool before(const BipartiteGraph& g, VertexRef a, VertexRef b) {
  const auto key = [&](VertexRef v) {
    return std::tuple(g.degree(v), v.side == Side::Upper ? 0 : 1, v.index);
  };
  return key(a) < key(b);
}

inline VertexRef other_side(VertexRef v, std::uint32_t index) {
  return {v.side == Side::Upper ? Side::Lower : Side::Upper, index};
}

/// Callback per (slot, center, x) wedge outcome with its probability given S.
template <class F>
void for_each_wedge_outcome(const BipartiteGraph& g, std::span<const EdgeRef> set, F&& f) {
  double total = 0.0;
  for (const EdgeRef& e : set) {
    total += double(g.degree(e.upper_ref())) + double(g.degree(e.lower_ref())) - 2.0;
  }
  if (total == 0.0) return;
  for (std::size_t k = 0; k < set.size(); ++k) {
    const EdgeRef e = set[k];
    const double du = g.degree(e.upper_ref());
    const double dv = g.degree(e.lower_ref());
    const double de = du + dv - 2.0;
    for (int c = 0; c < 2; ++c) {
      const VertexRef center = c == 0 ? e.upper_ref() : e.lower_ref();
      const VertexRef partner = c == 0 ? e.lower_ref() : e.upper_ref();
      const double dc = g.degree(center);
      if (dc < 2.0) continue;
      for (std::uint32_t xi : g.neighbors(center)) {
        const VertexRef x = other_side(center, xi);
        if (x == partner) continue;
        const double p = (de / total) * ((dc - 1.0) / de) * (1.0 / (dc - 1.0));
        f(k, center, partner, x, p);
      }
    }
  }
}

/// E[b_hat(S) | S] for the two-level sampler, by full enumeration of
/// (slot, center, x, z).
inline double tls_conditional_expectation(const BipartiteGraph& g, std::span<const EdgeRef> set) {
  double total = 0.0;
  for (const EdgeRef& e : set) {
    total += double(g.degree(e.upper_ref())) + double(g.degree(e.lower_ref())) - 2.0;
  }
  double per_wedge = 0.0;
  for_each_wedge_outcome(g, set, [&](std::size_t, VertexRef center, VertexRef partner,
                                     VertexRef x, double p) {
    const bool partner_is_y = before(g, partner, x);
    const VertexRef y = partner_is_y ? partner : x;
    const VertexRef other = partner_is_y ? x : partner;
    const double dy = g.degree(y);
    double closing = 0.0;
    for (std::uint32_t zi : g.neighbors(y)) {
      const VertexRef z = other_side(y, zi);
      if (z == center || !adjacent(g, z, other) || !before(g, x, z)) continue;
      closing += 1.0;
    }
    per_wedge += p * (dy / 4.0) * (closing / dy);
  });
  return double(g.edge_count()) / double(set.size()) * total * per_wedge;
}

/// Light edge flags by edge id, for a fixed partition.
struct Partition {
  std::vector<bool> light;
};

inline std::uint64_t find_edge(const BipartiteGraph& g, std::uint32_t u, std::uint32_t v) {
  for (std::uint64_t i = 0; i < g.edge_count(); ++i) {
    const EdgeRef e = g.edge(i);
    if (e.upper == u && e.lower == v) return i;
  }
  return g.edge_count();
}

/// E[X | S] for the estimate-with-guess sampler under a fixed partition.
inline double tlseg_conditional_expectation(const BipartiteGraph& g, std::span<const EdgeRef> set,
                                            const Partition& part) {
  double total = 0.0;
  for (const EdgeRef& e : set) {
    total += double(g.degree(e.upper_ref())) + double(g.degree(e.lower_ref())) - 2.0;
  }
  const double sqrt_m = std::sqrt(double(g.edge_count()));
  double per_trial = 0.0;
  for_each_wedge_outcome(g, set, [&](std::size_t k, VertexRef center, VertexRef partner,
                                     VertexRef x, double p) {
    if (!part.light[find_edge(g, set[k].upper, set[k].lower)]) return;
    const bool partner_is_y = before(g, partner, x);
    const VertexRef y = partner_is_y ? partner : x;
    const VertexRef other = partner_is_y ? x : partner;
    const double dy = g.degree(y);
    double z_mean = 0.0;
    for (std::uint32_t zi : g.neighbors(y)) {
      const VertexRef z = other_side(y, zi);
      if (z == center || !adjacent(g, z, other) || !before(g, x, z)) continue;
      const VertexRef ups[2] = {center.side == Side::Upper ? center : partner,
                                center.side == Side::Upper ? z : x};
      const VertexRef los[2] = {center.side == Side::Upper ? partner : center,
                                center.side == Side::Upper ? x : z};
      int light = 0;
      for (const VertexRef& a : ups) {
        for (const VertexRef& b : los) light += part.light[find_edge(g, a.index, b.index)] ? 1 : 0;
      }
      z_mean += (1.0 / dy) * std::max(sqrt_m, dy) / double(light);
    }
    const double r_factor = dy <= sqrt_m ? dy / sqrt_m : 1.0;
    per_trial += p * r_factor * z_mean;
  });
  return double(g.edge_count()) / double(set.size()) * total * per_trial;
}

/// Butterflies by brute force over vertex quadruples.
inline std::uint64_t brute_butterflies(const BipartiteGraph& g) {
  std::uint64_t b = 0;
  for (std::uint32_t u1 = 0; u1 < g.upper_count(); ++u1) {
    for (std::uint32_t u2 = u1 + 1; u2 < g.upper_count(); ++u2) {
      for (std::uint32_t v1 = 0; v1 < g.lower_count(); ++v1) {
        for (std::uint32_t v2 = v1 + 1; v2 < g.lower_count(); ++v2) {
          if (g.has_edge(u1, v1) && g.has_edge(u1, v2) && g.has_edge(u2, v1) &&
              g.has_edge(u2, v2)) {
            ++b;
          }
        }
      }
    }
  }
  return b;
}

/// b(e) for every edge id, by brute force.
inline std::vector<std::uint64_t> brute_per_edge(const BipartiteGraph& g) {
  std::vector<std::uint64_t> out(g.edge_count(), 0);
  for (std::uint64_t id = 0; id < g.edge_count(); ++id) {
    const EdgeRef e = g.edge(id);
    for (std::uint32_t u2 = 0; u2 < g.upper_count(); ++u2) {
      if (u2 == e.upper || !g.has_edge(u2, e.lower)) continue;
      for (std::uint32_t v2 = 0; v2 < g.lower_count(); ++v2) {
        if (v2 != e.lower && g.has_edge(e.upper, v2) && g.has_edge(u2, v2)) ++out[id];
      }
    }
  }
  return out;
}

/// Every ordered s-tuple of edges.
template <class F>
void for_each_tuple(const BipartiteGraph& g, int s, F&& f) {
  const std::uint64_t m = g.edge_count();
  std::vector<EdgeRef> tuple(static_cast<std::size_t>(s));
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(s), 0);
  if (m == 0) return;
  while (true) {
    for (int i = 0; i < s; ++i) tuple[i] = g.edge(idx[i]);
    f(std::span<const EdgeRef>(tuple));
    int i = s - 1;
    while (i >= 0 && ++idx[i] == m) idx[i--] = 0;
    if (i < 0) break;
  }
}

}  // namespace fixtures
