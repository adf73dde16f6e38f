#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bfly {

enum class Side : std::uint8_t { Upper, Lower };

inline Side opposite(Side s) { return s == Side::Upper ? Side::Lower : Side::Upper; }

struct VertexRef {
  Side side = Side::Upper;
  std::uint32_t index = 0;

  static VertexRef upper(std::uint32_t i) { return {Side::Upper, i}; }
  static VertexRef lower(std::uint32_t i) { return {Side::Lower, i}; }

  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

struct EdgeRef {
  std::uint32_t upper = 0;
  std::uint32_t lower = 0;

  VertexRef upper_ref() const { return VertexRef::upper(upper); }
  VertexRef lower_ref() const { return VertexRef::lower(lower); }

  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/// Path endpoint_a - center - endpoint_b; both endpoints sit on the side
/// opposite the center.
struct Wedge {
  VertexRef endpoint_a;
  VertexRef center;
  VertexRef endpoint_b;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable two-sided CSR adjacency. Neighbor lists are strictly ascending.
/// Edge ids follow the upper-side CSR order.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Builds from (upper, lower) index pairs. Duplicates are collapsed when
  /// `dedupe` is set and rejected otherwise.
  static BipartiteGraph from_edges(std::uint32_t upper_count, std::uint32_t lower_count,
                                   std::span<const EdgeRef> edges, bool dedupe = true);

  std::uint32_t upper_count() const { return upper_count_; }
  std::uint32_t lower_count() const { return lower_count_; }
  std::uint64_t vertex_count() const {
    return std::uint64_t{upper_count_} + lower_count_;
  }
  std::uint64_t edge_count() const { return upper_adj_.size(); }
  std::uint32_t side_count(Side s) const {
    return s == Side::Upper ? upper_count_ : lower_count_;
  }

  std::uint32_t degree(VertexRef v) const;
  std::span<const std::uint32_t> neighbors(VertexRef v) const;
  bool has_edge(std::uint32_t upper, std::uint32_t lower) const;
  EdgeRef edge(std::uint64_t id) const;
  /// Id of the first edge incident to an upper vertex; its edges are
  /// contiguous in neighbor order.
  std::uint64_t first_edge_id(std::uint32_t upper) const { return upper_offsets_[upper]; }
  bool valid(VertexRef v) const { return v.index < side_count(v.side); }

  /// Original input labels, empty for generated graphs.
  const std::vector<std::uint64_t>& upper_labels() const { return upper_labels_; }
  const std::vector<std::uint64_t>& lower_labels() const { return lower_labels_; }
  void set_labels(std::vector<std::uint64_t> upper, std::vector<std::uint64_t> lower);

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.upper_count_ == b.upper_count_ && a.lower_count_ == b.lower_count_ &&
           a.upper_offsets_ == b.upper_offsets_ && a.upper_adj_ == b.upper_adj_ &&
           a.lower_offsets_ == b.lower_offsets_ && a.lower_adj_ == b.lower_adj_;
  }

  // Binary cache (native endianness, versioned magic).
  void save_binary(const std::filesystem::path& path) const;
  static BipartiteGraph load_binary(const std::filesystem::path& path);

 private:
  std::uint32_t upper_count_ = 0;
  std::uint32_t lower_count_ = 0;
  std::vector<std::uint64_t> upper_offsets_{0};
  std::vector<std::uint32_t> upper_adj_;
  std::vector<std::uint64_t> lower_offsets_{0};
  std::vector<std::uint32_t> lower_adj_;
  std::vector<std::uint64_t> upper_labels_;
  std::vector<std::uint64_t> lower_labels_;
};

/// Reads a KONECT edge list: '%' and '#' lines are comments, the first two
/// columns are the upper and lower ids, further columns are ignored. Ids are
/// compacted in order of first appearance.
BipartiteGraph load_konect(const std::filesystem::path& path, bool dedupe = true);
BipartiteGraph parse_konect(std::istream& in, bool dedupe = true);

/// Writes the original labels when the graph has them, 1-based indices
/// otherwise. Reloading gives the same labelled adjacency, though dense ids
/// may be renumbered by first appearance.
void write_konect(const BipartiteGraph& g, std::ostream& out);

/// Loads a binary cache when the file starts with the cache magic, otherwise
/// parses it as KONECT text.
BipartiteGraph load_graph(const std::filesystem::path& path, bool dedupe = true);

/// d_u + d_v - 2: the number of wedges containing the edge.
std::uint64_t edge_degree(const BipartiteGraph& g, EdgeRef e);

/// Position of a vertex in the fixed tie-break order: upper vertices first,
/// then lower, each by ascending index.
inline std::uint64_t global_id(std::uint64_t upper_count, VertexRef v) {
  return v.side == Side::Upper ? v.index : upper_count + v.index;
}

/// Degree order with global-id tie break, usable when the degrees are already
/// known (estimators learn them through metered queries).
inline bool precedes(VertexRef a, std::uint64_t deg_a, VertexRef b, std::uint64_t deg_b) {
  if (deg_a != deg_b) return deg_a < deg_b;
  if (a.side != b.side) return a.side == Side::Upper;
  return a.index < b.index;
}

bool vertex_precedes(const BipartiteGraph& g, VertexRef a, VertexRef b);

// Synthetic families.
struct CompleteBipartite {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};
struct ErdosRenyi {
  std::uint32_t n1 = 0;
  std::uint32_t n2 = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};
/// Two upper hubs sharing t lower neighbours, plus h upper vertices that all
/// attach to the same two extra lower vertices. b = C(t,2) + C(h,2).
struct HubAdversary {
  std::uint32_t h = 0;
  std::uint32_t t = 0;
};
using GeneratorSpec = std::variant<CompleteBipartite, ErdosRenyi, HubAdversary>;

BipartiteGraph generate_synthetic(const GeneratorSpec& spec);

/// Parses `kab:a,b`, `er:n1,n2,p,seed` or `hub:h,t`.
GeneratorSpec parse_generator_spec(const std::string& text);

}  // namespace bfly
