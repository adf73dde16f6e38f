#include "butterfly/exact.hpp"

#include <limits>

#include <omp.h>

namespace bfly {

namespace {

using Wide = unsigned __int128;

std::uint64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("count exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(v);
}

Wide choose2(std::uint64_t k) { return k < 2 ? 0 : Wide{k} * (k - 1) / 2; }

Side pivot_side(const BipartiteGraph& g) {
  return g.upper_count() <= g.lower_count() ? Side::Upper : Side::Lower;
}

/// Butterflies whose lowest-index pivot-side vertex is `x`. `counter` must be
/// all zero on entry and is left all zero.
Wide pivot_butterflies(const BipartiteGraph& g, Side side, std::uint32_t x,
                       std::vector<std::uint32_t>& counter, std::vector<std::uint32_t>& touched) {
  for (std::uint32_t c : g.neighbors({side, x})) {
    for (std::uint32_t y : g.neighbors({opposite(side), c})) {
      if (y <= x) continue;
      if (counter[y]++ == 0) touched.push_back(y);
    }
  }
  Wide sum = 0;
  for (std::uint32_t y : touched) {
    sum += choose2(counter[y]);
    counter[y] = 0;
  }
  touched.clear();
  return sum;
}

/// Fills b(e) for every edge incident to upper vertex u. `codeg` must be zero
/// on entry and is left zero.
void edge_butterflies_of_upper(const BipartiteGraph& g, std::uint32_t u,
                               std::vector<std::uint32_t>& codeg,
                               std::vector<std::uint32_t>& touched,
                               std::vector<std::uint64_t>& out) {
  const VertexRef uref = VertexRef::upper(u);
  for (std::uint32_t v : g.neighbors(uref)) {
    for (std::uint32_t w : g.neighbors(VertexRef::lower(v))) {
      if (w == u) continue;
      if (codeg[w]++ == 0) touched.push_back(w);
    }
  }
  std::uint64_t id = g.first_edge_id(u);
  for (std::uint32_t v : g.neighbors(uref)) {
    std::uint64_t b = 0;
    for (std::uint32_t w : g.neighbors(VertexRef::lower(v))) {
      if (w != u) b += codeg[w] - 1;
    }
    out[id++] = b;
  }
  for (std::uint32_t w : touched) codeg[w] = 0;
  touched.clear();
}

}  // namespace

std::uint64_t count_butterflies_exact(const BipartiteGraph& g) {
  const Side side = pivot_side(g);
  const std::uint32_t count = g.side_count(side);
  std::vector<std::uint32_t> counter(count, 0);
  std::vector<std::uint32_t> touched;
  Wide total = 0;
  for (std::uint32_t x = 0; x < count; ++x) {
    total += pivot_butterflies(g, side, x, counter, touched);
  }
  return narrow(total);
}

std::uint64_t count_butterflies_exact_parallel(const BipartiteGraph& g) {
  const Side side = pivot_side(g);
  const auto count = static_cast<std::int64_t>(g.side_count(side));
  Wide total = 0;
#pragma omp parallel
  {
    std::vector<std::uint32_t> counter(static_cast<std::size_t>(count), 0);
    std::vector<std::uint32_t> touched;
    Wide local = 0;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::int64_t x = 0; x < count; ++x) {
      local += pivot_butterflies(g, side, static_cast<std::uint32_t>(x), counter, touched);
    }
#pragma omp critical(bfly_exact_total)
    total += local;
  }
  return narrow(total);
}

std::uint64_t count_butterflies_bruteforce(const BipartiteGraph& g) {
  if (g.upper_count() > 64 || g.lower_count() > 64) {
    throw TooLargeError("bruteforce enumeration limited to 64 vertices per side");
  }
  std::uint64_t total = 0;
  const std::uint32_t nu = g.upper_count();
  const std::uint32_t nl = g.lower_count();
  for (std::uint32_t u1 = 0; u1 < nu; ++u1)
    for (std::uint32_t u2 = u1 + 1; u2 < nu; ++u2)
      for (std::uint32_t v1 = 0; v1 < nl; ++v1)
        for (std::uint32_t v2 = v1 + 1; v2 < nl; ++v2)
          if (g.has_edge(u1, v1) && g.has_edge(u1, v2) && g.has_edge(u2, v1) &&
              g.has_edge(u2, v2)) {
            ++total;
          }
  return total;
}

std::uint64_t count_wedges_exact(const BipartiteGraph& g) {
  Wide total = 0;
  for (Side s : {Side::Upper, Side::Lower}) {
    for (std::uint32_t v = 0; v < g.side_count(s); ++v) total += choose2(g.degree({s, v}));
  }
  return narrow(total);
}

std::uint64_t butterflies_per_edge(const BipartiteGraph& g, EdgeRef e) {
  // b(u,v) = sum over u' in N(v)\{u} of |N(u) ∩ N(u')| - 1.
  auto nu = g.neighbors(e.upper_ref());
  std::vector<bool> in_nu(g.lower_count(), false);
  for (std::uint32_t v : nu) in_nu[v] = true;
  Wide total = 0;
  for (std::uint32_t w : g.neighbors(e.lower_ref())) {
    if (w == e.upper) continue;
    std::uint64_t common = 0;
    for (std::uint32_t v : g.neighbors(VertexRef::upper(w))) common += in_nu[v] ? 1 : 0;
    total += common - 1;
  }
  return narrow(total);
}

std::vector<std::uint64_t> butterflies_all_edges(const BipartiteGraph& g) {
  std::vector<std::uint64_t> out(g.edge_count(), 0);
  std::vector<std::uint32_t> codeg(g.upper_count(), 0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t u = 0; u < g.upper_count(); ++u) {
    edge_butterflies_of_upper(g, u, codeg, touched, out);
  }
  return out;
}

std::vector<std::uint64_t> butterflies_all_edges_parallel(const BipartiteGraph& g) {
  std::vector<std::uint64_t> out(g.edge_count(), 0);
  const auto count = static_cast<std::int64_t>(g.upper_count());
#pragma omp parallel
  {
    std::vector<std::uint32_t> codeg(static_cast<std::size_t>(count), 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t u = 0; u < count; ++u) {
      edge_butterflies_of_upper(g, static_cast<std::uint32_t>(u), codeg, touched, out);
    }
  }
  return out;
}

}  // namespace bfly
