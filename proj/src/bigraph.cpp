#include "butterfly/bigraph.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "butterfly/rng.hpp"

namespace bfly {

namespace {

constexpr char kCacheMagic[8] = {'B', 'F', 'L', 'Y', 'G', '0', '0', '1'};

void build_csr(std::uint32_t count, std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
               std::vector<std::uint64_t>& offsets, std::vector<std::uint32_t>& adj) {
  std::sort(pairs.begin(), pairs.end());
  offsets.assign(std::size_t{count} + 1, 0);
  adj.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ++offsets[pairs[i].first + 1];
    adj[i] = pairs[i].second;
  }
  for (std::uint32_t v = 0; v < count; ++v) offsets[v + 1] += offsets[v];
}

template <typename T>
void write_pod_vector(std::ostream& out, const std::vector<T>& v) {
  const std::uint64_t n = v.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
}

template <typename T>
std::vector<T> read_pod_vector(std::istream& in) {
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n > (std::uint64_t{1} << 40)) throw std::runtime_error("corrupt graph cache");
  std::vector<T> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw std::runtime_error("truncated graph cache");
  return v;
}

std::uint32_t checked_count(std::uint64_t n, const char* what) {
  if (n > std::numeric_limits<std::uint32_t>::max() - 1) {
    throw std::overflow_error(std::string(what) + " exceeds 32-bit vertex range");
  }
  return static_cast<std::uint32_t>(n);
}

}  // namespace

BipartiteGraph BipartiteGraph::from_edges(std::uint32_t upper_count, std::uint32_t lower_count,
                                          std::span<const EdgeRef> edges, bool dedupe) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> up;
  up.reserve(edges.size());
  for (const EdgeRef& e : edges) {
    if (e.upper >= upper_count || e.lower >= lower_count) {
      throw std::out_of_range("edge endpoint outside vertex range");
    }
    up.emplace_back(e.upper, e.lower);
  }
  std::sort(up.begin(), up.end());
  auto last = std::unique(up.begin(), up.end());
  if (last != up.end() && !dedupe) throw std::invalid_argument("duplicate edge in input");
  up.erase(last, up.end());

  std::vector<std::pair<std::uint32_t, std::uint32_t>> low;
  low.reserve(up.size());
  for (auto [u, v] : up) low.emplace_back(v, u);

  BipartiteGraph g;
  g.upper_count_ = upper_count;
  g.lower_count_ = lower_count;
  build_csr(upper_count, up, g.upper_offsets_, g.upper_adj_);
  build_csr(lower_count, low, g.lower_offsets_, g.lower_adj_);
  return g;
}

std::uint32_t BipartiteGraph::degree(VertexRef v) const {
  const auto& off = v.side == Side::Upper ? upper_offsets_ : lower_offsets_;
  return static_cast<std::uint32_t>(off[v.index + 1] - off[v.index]);
}

std::span<const std::uint32_t> BipartiteGraph::neighbors(VertexRef v) const {
  if (v.side == Side::Upper) {
    return {upper_adj_.data() + upper_offsets_[v.index], degree(v)};
  }
  return {lower_adj_.data() + lower_offsets_[v.index], degree(v)};
}

bool BipartiteGraph::has_edge(std::uint32_t upper, std::uint32_t lower) const {
  // Search the shorter list.
  const VertexRef u = VertexRef::upper(upper);
  const VertexRef l = VertexRef::lower(lower);
  if (degree(u) <= degree(l)) {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), lower);
  }
  auto nb = neighbors(l);
  return std::binary_search(nb.begin(), nb.end(), upper);
}

EdgeRef BipartiteGraph::edge(std::uint64_t id) const {
  auto it = std::upper_bound(upper_offsets_.begin(), upper_offsets_.end(), id);
  const auto upper = static_cast<std::uint32_t>(std::distance(upper_offsets_.begin(), it) - 1);
  return {upper, upper_adj_[id]};
}

void BipartiteGraph::set_labels(std::vector<std::uint64_t> upper, std::vector<std::uint64_t> lower) {
  upper_labels_ = std::move(upper);
  lower_labels_ = std::move(lower);
}

void BipartiteGraph::save_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kCacheMagic, sizeof kCacheMagic);
  out.write(reinterpret_cast<const char*>(&upper_count_), sizeof upper_count_);
  out.write(reinterpret_cast<const char*>(&lower_count_), sizeof lower_count_);
  write_pod_vector(out, upper_offsets_);
  write_pod_vector(out, upper_adj_);
  write_pod_vector(out, lower_offsets_);
  write_pod_vector(out, lower_adj_);
  write_pod_vector(out, upper_labels_);
  write_pod_vector(out, lower_labels_);
}

BipartiteGraph BipartiteGraph::load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[sizeof kCacheMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0) {
    throw std::runtime_error("not a graph cache (bad magic): " + path.string());
  }
  BipartiteGraph g;
  in.read(reinterpret_cast<char*>(&g.upper_count_), sizeof g.upper_count_);
  in.read(reinterpret_cast<char*>(&g.lower_count_), sizeof g.lower_count_);
  g.upper_offsets_ = read_pod_vector<std::uint64_t>(in);
  g.upper_adj_ = read_pod_vector<std::uint32_t>(in);
  g.lower_offsets_ = read_pod_vector<std::uint64_t>(in);
  g.lower_adj_ = read_pod_vector<std::uint32_t>(in);
  g.upper_labels_ = read_pod_vector<std::uint64_t>(in);
  g.lower_labels_ = read_pod_vector<std::uint64_t>(in);
  if (g.upper_offsets_.size() != std::size_t{g.upper_count_} + 1 ||
      g.lower_offsets_.size() != std::size_t{g.lower_count_} + 1 ||
      g.upper_offsets_.back() != g.upper_adj_.size() ||
      g.lower_offsets_.back() != g.lower_adj_.size() ||
      g.upper_adj_.size() != g.lower_adj_.size()) {
    throw std::runtime_error("inconsistent graph cache: " + path.string());
  }
  return g;
}

BipartiteGraph parse_konect(std::istream& in, bool dedupe) {
  std::unordered_map<std::uint64_t, std::uint32_t> upper_ids;
  std::unordered_map<std::uint64_t, std::uint32_t> lower_ids;
  std::vector<std::uint64_t> upper_labels;
  std::vector<std::uint64_t> lower_labels;
  std::vector<EdgeRef> edges;

  auto intern = [](std::unordered_map<std::uint64_t, std::uint32_t>& ids,
                   std::vector<std::uint64_t>& labels, std::uint64_t label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<std::uint32_t>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%' || line[pos] == '#') continue;

    std::uint64_t cols[2] = {0, 0};
    const char* p = line.data() + pos;
    const char* end = line.data() + line.size();
    for (int c = 0; c < 2; ++c) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == ',')) ++p;
      auto [next, ec] = std::from_chars(p, end, cols[c]);
      if (ec != std::errc() || next == p) {
        throw ParseError(line_no, "expected two integer ids, got '" + line + "'");
      }
      if (next < end && !(*next == ' ' || *next == '\t' || *next == '\r' || *next == ',')) {
        throw ParseError(line_no, "malformed id in '" + line + "'");
      }
      p = next;
    }
    edges.push_back({intern(upper_ids, upper_labels, cols[0]),
                     intern(lower_ids, lower_labels, cols[1])});
    checked_count(upper_labels.size(), "upper vertex count");
    checked_count(lower_labels.size(), "lower vertex count");
  }
  if (edges.empty()) throw EmptyInputError("input contains no edges");

  auto g = BipartiteGraph::from_edges(static_cast<std::uint32_t>(upper_labels.size()),
                                      static_cast<std::uint32_t>(lower_labels.size()), edges,
                                      dedupe);
  g.set_labels(std::move(upper_labels), std::move(lower_labels));
  return g;
}

BipartiteGraph load_konect(const std::filesystem::path& path, bool dedupe) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_konect(in, dedupe);
}

BipartiteGraph load_graph(const std::filesystem::path& path, bool dedupe) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("cannot open " + path.string());
    char magic[sizeof kCacheMagic] = {};
    probe.read(magic, sizeof magic);
    if (probe && std::memcmp(magic, kCacheMagic, sizeof magic) == 0) {
      return BipartiteGraph::load_binary(path);
    }
  }
  return load_konect(path, dedupe);
}

void write_konect(const BipartiteGraph& g, std::ostream& out) {
  out << "% bip unweighted\n";
  out << "% " << g.edge_count() << ' ' << g.upper_count() << ' ' << g.lower_count() << '\n';
  const bool labelled = g.upper_labels().size() == g.upper_count() &&
                        g.lower_labels().size() == g.lower_count();
  for (std::uint64_t id = 0; id < g.edge_count(); ++id) {
    const EdgeRef e = g.edge(id);
    if (labelled) {
      out << g.upper_labels()[e.upper] << ' ' << g.lower_labels()[e.lower] << '\n';
    } else {
      out << e.upper + 1 << ' ' << e.lower + 1 << '\n';
    }
  }
}

std::uint64_t edge_degree(const BipartiteGraph& g, EdgeRef e) {
  return std::uint64_t{g.degree(e.upper_ref())} + g.degree(e.lower_ref()) - 2;
}

bool vertex_precedes(const BipartiteGraph& g, VertexRef a, VertexRef b) {
  if (a == b) return false;
  return precedes(a, g.degree(a), b, g.degree(b));
}

BipartiteGraph generate_synthetic(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& s) -> BipartiteGraph {
        using T = std::decay_t<decltype(s)>;
        std::vector<EdgeRef> edges;
        if constexpr (std::is_same_v<T, CompleteBipartite>) {
          if (s.a == 0 || s.b == 0) throw std::invalid_argument("kab sides must be positive");
          const std::uint64_t m = std::uint64_t{s.a} * s.b;
          if (m > (std::uint64_t{1} << 32)) throw std::overflow_error("kab edge count overflow");
          edges.reserve(m);
          for (std::uint32_t u = 0; u < s.a; ++u)
            for (std::uint32_t v = 0; v < s.b; ++v) edges.push_back({u, v});
          return BipartiteGraph::from_edges(s.a, s.b, edges);
        } else if constexpr (std::is_same_v<T, ErdosRenyi>) {
          if (s.n1 == 0 || s.n2 == 0) throw std::invalid_argument("er sides must be positive");
          if (!(s.p >= 0.0 && s.p <= 1.0)) throw std::invalid_argument("er p must lie in [0,1]");
          if (std::uint64_t{s.n1} * s.n2 > (std::uint64_t{1} << 34)) {
            throw std::overflow_error("er pair count overflow");
          }
          Rng rng(s.seed);
          for (std::uint32_t u = 0; u < s.n1; ++u)
            for (std::uint32_t v = 0; v < s.n2; ++v)
              if (rng.bernoulli(s.p)) edges.push_back({u, v});
          return BipartiteGraph::from_edges(s.n1, s.n2, edges);
        } else {
          if (s.h == 0 || s.t == 0) throw std::invalid_argument("hub parameters must be positive");
          const std::uint64_t upper = std::uint64_t{s.h} + 2;
          const std::uint64_t lower = std::uint64_t{s.t} + 2;
          const auto nu = checked_count(upper, "hub upper count");
          const auto nl = checked_count(lower, "hub lower count");
          // u0, u1 -> v0..v{t-1}; u2..u{h+1} -> v{t}, v{t+1}.
          for (std::uint32_t hub = 0; hub < 2; ++hub)
            for (std::uint32_t v = 0; v < s.t; ++v) edges.push_back({hub, v});
          for (std::uint32_t u = 2; u < nu; ++u) {
            edges.push_back({u, s.t});
            edges.push_back({u, s.t + 1});
          }
          return BipartiteGraph::from_edges(nu, nl, edges);
        }
      },
      spec);
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("generator spec needs 'kind:args'");
  const std::string kind = text.substr(0, colon);
  std::vector<std::string> args;
  std::stringstream ss(text.substr(colon + 1));
  for (std::string item; std::getline(ss, item, ',');) args.push_back(item);

  auto as_u32 = [&](std::size_t i) {
    const unsigned long long v = std::stoull(args.at(i));
    return checked_count(v, "generator parameter");
  };
  if (kind == "kab" && args.size() == 2) return CompleteBipartite{as_u32(0), as_u32(1)};
  if (kind == "hub" && args.size() == 2) return HubAdversary{as_u32(0), as_u32(1)};
  if (kind == "er" && args.size() == 4) {
    return ErdosRenyi{as_u32(0), as_u32(1), std::stod(args[2]), std::stoull(args[3])};
  }
  throw std::invalid_argument("unrecognised generator spec '" + text + "'");
}

}  // namespace bfly
