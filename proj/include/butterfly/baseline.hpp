#pragma once

#include <cstdint>

#include "butterfly/oracle.hpp"
#include "butterfly/report.hpp"
#include "butterfly/rng.hpp"

namespace bfly {

/// Return convention for edge sparsification. `PaperVerbatim` divides the
/// rescaled count by an extra four and so targets b/4; `Unbiased` returns
/// count(G') / p^4.
enum class EsparMode { Unbiased, PaperVerbatim };

/// Edge sparsification: keeps each edge independently with probability p,
/// counts the retained subgraph exactly and rescales. Every retained edge is
/// charged as one edge-sample access; the Bernoulli trials and the exact
/// sub-count are local work.
EstimateReport espar_estimate(QueryOracle& oracle, double p, Rng& rng,
                              EsparMode mode = EsparMode::Unbiased);

inline constexpr std::uint64_t kDefaultWpsRounds = 20000;

/// Weighted pair sampling. Scans the degrees of the smaller layer once, then
/// per round draws two layer vertices proportionally to degree and scales
/// C(|N(u) ∩ N(v)|, 2). The estimate is the mean over completed rounds.
EstimateReport wps_estimate(QueryOracle& oracle, std::uint64_t rounds, Rng& rng);

/// One WPS round for a fixed pair with known degrees:
/// m^2 / (2 d_u d_v) * C(N_uv, 2), and 0 when u == v. The intersection is
/// counted from the lower-degree vertex with neighbor and vertex-pair queries.
double wps_pair_contribution(QueryOracle& oracle, VertexRef u, std::uint64_t deg_u,
                             VertexRef v, std::uint64_t deg_v);

}  // namespace bfly
