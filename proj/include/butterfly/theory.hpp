#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "butterfly/bigraph.hpp"
#include "butterfly/oracle.hpp"
#include "butterfly/report.hpp"
#include "butterfly/rng.hpp"

namespace bfly {

/// Constants of the heavy/light and guess-and-prove stack. The defaults are
/// the literal constants; the scale_* multipliers shrink sample
/// sizes for desk-scale runs without changing the algorithm's structure.
/// Logarithms are natural.
struct TheoryConstants {
  double epsilon = 0.1;
  double c_h = 1.77e4;
  double scale_t = 1.0;
  double scale_s = 1.0;
  double scale_s1 = 1.0;
  double scale_s2 = 1.0;
  double scale_reps = 1.0;
  /// Unnamed constant c in the repetition count c * ln(ln n) / epsilon.
  double rep_constant = 1.0;

  void validate() const;
};

enum class HeavyLabel : std::uint8_t { Heavy, Light };

// --- wedge count estimate --------------------------------------------------

struct ExactDegreeScan {};
/// k edge samples, one random endpoint each; w ≈ m * mean(d_v - 1).
struct SampledDegrees {
  std::uint64_t samples = 0;
};
using WedgeEstimateMode = std::variant<ExactDegreeScan, SampledDegrees>;

double estimate_wedges(QueryOracle& oracle, const WedgeEstimateMode& mode, Rng& rng);

// --- heavy/light classification --------------------------------------------

/// ceil(scale_t * 48 * ln(2m)).
std::uint64_t heavy_repetitions(const TheoryConstants& tc, std::uint64_t m);
/// ceil(scale_s * 12 * sqrt(m) * w_bar / (eps^2 * b_bar)).
std::uint64_t heavy_wedge_samples(const TheoryConstants& tc, std::uint64_t m, double b_bar,
                                  double w_bar);
/// b_bar^(3/4) / eps^(1/4).
double heavy_threshold(const TheoryConstants& tc, double b_bar);

/// Sampling classifier for one edge with known endpoint degrees. Each wedge
/// through e is closed ceil(d_y / sqrt(m)) times with value d_y per
/// ≺-filtered hit; the per-repetition mean is scaled by d_e so that it
/// estimates b(e). Heavy iff the median exceeds the threshold.
HeavyLabel classify_heavy(EdgeRef e, std::uint32_t upper_degree, std::uint32_t lower_degree,
                          QueryOracle& oracle, const TheoryConstants& tc, double b_bar,
                          double w_bar, Rng& rng);

/// Memoised classification: the first query of an edge runs classify_heavy
/// with an rng derived from (seed, edge), later queries reuse the label, so
/// the cache behaves like one fixed underlying partition.
class EdgePartitionCache {
 public:
  EdgePartitionCache(std::uint64_t seed, TheoryConstants tc, double b_bar, double w_bar)
      : seed_(seed), tc_(tc), b_bar_(b_bar), w_bar_(w_bar) {}

  HeavyLabel label(EdgeRef e, std::uint32_t upper_degree, std::uint32_t lower_degree,
                   QueryOracle& oracle);

  /// Pins a label, e.g. to evaluate a fixed partition.
  void assign(EdgeRef e, HeavyLabel label) { labels_[key(e)] = label; }
  /// Label used for every edge not pinned; skips classification entirely.
  void set_default(std::optional<HeavyLabel> label) { default_ = label; }

  std::size_t classified() const { return classifications_; }
  std::optional<HeavyLabel> known(EdgeRef e) const;

 private:
  static std::uint64_t key(EdgeRef e) { return (std::uint64_t{e.upper} << 32) | e.lower; }

  std::uint64_t seed_;
  TheoryConstants tc_;
  double b_bar_;
  double w_bar_;
  std::optional<HeavyLabel> default_;
  std::unordered_map<std::uint64_t, HeavyLabel> labels_;
  std::size_t classifications_ = 0;
};

/// Two upper and two lower vertices forming a butterfly, with their degrees.
struct ButterflyView {
  std::array<std::uint32_t, 2> upper{};
  std::array<std::uint32_t, 2> lower{};
  std::array<std::uint32_t, 2> upper_degree{};
  std::array<std::uint32_t, 2> lower_degree{};
};

/// Number of the butterfly's four edges labelled Light by the partition.
int light_edge_count_in_butterfly(const ButterflyView& btf, EdgePartitionCache& partition,
                                  QueryOracle& oracle);

// --- estimate with guess ---------------------------------------------------

/// 2 * ceil(1 / (2 (1 - c_H eps))); requires c_H * eps < 1.
double sizing_constant(const TheoryConstants& tc);

struct TlsEgSizes {
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
};

/// s1 = ceil(scale_s1 * c * m ln(n / eps^2) / (b_bar^(1/4) eps^(9/4))),
/// s2 = ceil(scale_s2 * 40 (1 + 2 c_H eps) w_bar sqrt(m) ln^2 n / (eps^4 b_bar)).
TlsEgSizes tls_eg_sizes(const TheoryConstants& tc, std::uint64_t m, std::uint64_t n,
                        double b_bar, double w_bar);

struct TlsEgResult {
  double estimate = 0.0;
  TlsEgSizes sizes;
  std::uint64_t heavy_checks = 0;
};

/// Two-level estimate that only credits butterflies reached through a Light
/// sampled edge, each weighted by 1 / (number of its Light edges). Uses
/// `partition` when given, otherwise a fresh cache seeded from rng.
TlsEgResult tls_eg(QueryOracle& oracle, const TheoryConstants& tc, double b_bar, double w_bar,
                   Rng& rng, EdgePartitionCache* partition = nullptr);

// --- guess and prove -------------------------------------------------------

struct HlgpTrace {
  /// Every tried b_bar, in order, with the sweep floor it belonged to.
  std::vector<double> tried;
  std::vector<double> sweep_floor;
  double w_bar = 0.0;
  std::uint64_t repetitions = 0;
};

/// ceil(scale_reps * rep_constant * ln(ln n) / eps), at least 1.
std::uint64_t hlgp_repetitions(const TheoryConstants& tc, double eps_internal, std::uint64_t n);

/// Geometric search over b_bar from n^4 downwards. Each candidate runs
/// tls_eg several times and accepts min X when it reaches the candidate.
/// Exhausting the search returns the last X flagged not_converged.
EstimateReport hlgp_estimate(QueryOracle& oracle, const TheoryConstants& tc, Rng& rng,
                             HlgpTrace* trace = nullptr,
                             const WedgeEstimateMode& wedge_mode = ExactDegreeScan{});

// --- exact analysis on an explicit graph (test oracles, not metered) -------

struct Butterfly {
  std::array<std::uint32_t, 2> upper{};
  std::array<std::uint32_t, 2> lower{};
};

std::vector<Butterfly> list_butterflies(const BipartiteGraph& g);

/// Edge id of (u, v); throws std::out_of_range when absent.
std::uint64_t edge_id(const BipartiteGraph& g, EdgeRef e);

/// wt(e) per edge id for the partition whose Light set is `light`.
std::vector<double> light_edge_weights(const BipartiteGraph& g, std::span<const bool> light);

/// Exact classification against the definitional thresholds.
bool is_heavy_edge(std::uint64_t b_e, std::uint64_t d_e, double b_bar, double w_bar, double eps);
bool is_light_edge(std::uint64_t b_e, std::uint64_t d_e, double b_bar, double w_bar, double eps);

/// Butterflies whose four edges are all non-light for the given guesses.
std::uint64_t nonlight_butterfly_count(const BipartiteGraph& g, double b_bar, double w_bar,
                                       double eps);

}  // namespace bfly
