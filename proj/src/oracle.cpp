#include "butterfly/oracle.hpp"

namespace bfly {

void QueryOracle::charge(std::uint64_t QueryCounts::*field) {
  const std::uint64_t used = counts_.total();
  if (budget_.max_total && used + 1 > *budget_.max_total) throw BudgetExhausted(counts_);
  // Clock reads are amortised over 1024 queries.
  if (deadline_ && (used & 1023) == 0 && Clock::now() >= *deadline_) {
    throw TimeLimitReached(counts_);
  }
  ++(counts_.*field);
}

std::uint32_t QueryOracle::degree(VertexRef v) {
  if (!graph_->valid(v)) throw std::out_of_range("degree query on unknown vertex");
  charge(&QueryCounts::degree);
  return graph_->degree(v);
}

VertexRef QueryOracle::neighbor(VertexRef v, std::uint64_t i) {
  if (!graph_->valid(v)) throw std::out_of_range("neighbor query on unknown vertex");
  auto nb = graph_->neighbors(v);
  if (i >= nb.size()) throw std::out_of_range("neighbor index out of range");
  charge(&QueryCounts::neighbor);
  return {opposite(v.side), nb[i]};
}

bool QueryOracle::has_edge(VertexRef a, VertexRef b) {
  if (a.side == b.side) throw SameSidePairError();
  if (!graph_->valid(a) || !graph_->valid(b)) {
    throw std::out_of_range("vertex-pair query on unknown vertex");
  }
  charge(&QueryCounts::vertex_pair);
  return a.side == Side::Upper ? graph_->has_edge(a.index, b.index)
                               : graph_->has_edge(b.index, a.index);
}

EdgeRef QueryOracle::sample_edge(Rng& rng) {
  if (graph_->edge_count() == 0) throw EmptyGraphError();
  charge(&QueryCounts::edge_sample);
  return graph_->edge(rng.index(graph_->edge_count()));
}

EdgeRef QueryOracle::read_edge(std::uint64_t id) {
  if (id >= graph_->edge_count()) throw std::out_of_range("edge id out of range");
  charge(&QueryCounts::edge_sample);
  return graph_->edge(id);
}

}  // namespace bfly
