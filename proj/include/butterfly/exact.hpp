#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "butterfly/bigraph.hpp"

namespace bfly {

class TooLargeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ground-truth counters. They read the graph directly and are never metered.
// Sums are accumulated in 128 bits; a result that does not fit 64 bits
// raises std::overflow_error.

/// Serial reference: pivots over the side with fewer vertices and aggregates
/// co-neighbour counts per pivot, summing C(codeg, 2).
std::uint64_t count_butterflies_exact(const BipartiteGraph& g);

/// OpenMP kernel over pivots with per-thread counters. Same result as the
/// serial reference for any thread count.
std::uint64_t count_butterflies_exact_parallel(const BipartiteGraph& g);

/// Enumerates every pair of upper and pair of lower vertices. Refuses graphs
/// with more than 64 vertices on either side.
std::uint64_t count_butterflies_bruteforce(const BipartiteGraph& g);

/// Sum over vertices of C(d_v, 2).
std::uint64_t count_wedges_exact(const BipartiteGraph& g);

/// Number of butterflies containing edge e.
std::uint64_t butterflies_per_edge(const BipartiteGraph& g, EdgeRef e);

/// b(e) for every edge, indexed by edge id. Serial reference and OpenMP
/// kernel.
std::vector<std::uint64_t> butterflies_all_edges(const BipartiteGraph& g);
std::vector<std::uint64_t> butterflies_all_edges_parallel(const BipartiteGraph& g);

}  // namespace bfly
