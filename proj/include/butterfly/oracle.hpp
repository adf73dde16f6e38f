#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "butterfly/bigraph.hpp"
#include "butterfly/rng.hpp"

namespace bfly {

struct QueryCounts {
  std::uint64_t degree = 0;
  std::uint64_t neighbor = 0;
  std::uint64_t vertex_pair = 0;
  std::uint64_t edge_sample = 0;

  std::uint64_t total() const { return degree + neighbor + vertex_pair + edge_sample; }

  friend bool operator==(const QueryCounts&, const QueryCounts&) = default;
};

struct QueryBudget {
  std::optional<std::uint64_t> max_total;
};

/// Raised when a run hits its query budget or deadline. Carries the counters
/// at the point of refusal; the refused query is not charged.
class LimitReached : public std::runtime_error {
 public:
  LimitReached(const char* what, QueryCounts counts)
      : std::runtime_error(what), counts_(counts) {}
  const QueryCounts& counts() const { return counts_; }

 private:
  QueryCounts counts_;
};

class BudgetExhausted : public LimitReached {
 public:
  explicit BudgetExhausted(QueryCounts c) : LimitReached("query budget exhausted", c) {}
};

class TimeLimitReached : public LimitReached {
 public:
  explicit TimeLimitReached(QueryCounts c) : LimitReached("time limit reached", c) {}
};

class EmptyGraphError : public std::runtime_error {
 public:
  EmptyGraphError() : std::runtime_error("graph has no edges") {}
};

class SameSidePairError : public std::invalid_argument {
 public:
  SameSidePairError() : std::invalid_argument("vertex-pair query needs one vertex per side") {}
};

/// The metered read path. Estimators hold an oracle, never the graph: every
/// degree, neighbor, vertex-pair and edge-sample access charges one unit.
/// Graph size metadata (n, m, |U|, |L|) is free.
class QueryOracle {
 public:
  using Clock = std::chrono::steady_clock;

  explicit QueryOracle(const BipartiteGraph& g, QueryBudget budget = {})
      : graph_(&g), budget_(budget) {}

  std::uint32_t degree(VertexRef v);
  VertexRef neighbor(VertexRef v, std::uint64_t i);
  bool has_edge(VertexRef a, VertexRef b);
  EdgeRef sample_edge(Rng& rng);

  /// Reads edge `id` of the stored edge order; charged as an edge-sample
  /// access. Used by estimators that materialise a random edge subset.
  EdgeRef read_edge(std::uint64_t id);

  std::uint64_t edge_count() const { return graph_->edge_count(); }
  std::uint64_t vertex_count() const { return graph_->vertex_count(); }
  std::uint32_t side_count(Side s) const { return graph_->side_count(s); }

  QueryCounts snapshot_counts() const { return counts_; }
  void reset_counts() { counts_ = {}; }

  const QueryBudget& budget() const { return budget_; }
  void set_deadline(std::optional<Clock::time_point> deadline) { deadline_ = deadline; }

 private:
  void charge(std::uint64_t QueryCounts::*field);

  const BipartiteGraph* graph_;
  QueryBudget budget_;
  std::optional<Clock::time_point> deadline_;
  QueryCounts counts_;
};

}  // namespace bfly
