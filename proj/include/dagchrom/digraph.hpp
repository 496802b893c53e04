#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dagchrom {

using Vertex = std::size_t;

// Vertex set of a graph with at most 64 vertices; bit v is vertex v.
using VertexMask = std::uint64_t;
inline constexpr std::size_t kMaskVertices = 64;

inline constexpr VertexMask bit(Vertex v) noexcept { return VertexMask{1} << v; }
inline constexpr VertexMask full_mask(std::size_t n) noexcept {
  return n >= 64 ? ~VertexMask{0} : (VertexMask{1} << n) - 1;
}
std::vector<Vertex> mask_vertices(VertexMask m);

struct Edge {
  Vertex from = 0;
  Vertex to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Adjacency rows packed 64 vertices per word.
class BitRows {
 public:
  BitRows() = default;
  explicit BitRows(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t words() const noexcept { return words_; }
  std::span<const std::uint64_t> row(Vertex v) const { return {bits_.data() + v * words_, words_}; }
  bool test(Vertex u, Vertex v) const { return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U; }
  void set(Vertex u, Vertex v) { bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64); }
  // First word of the row; the whole row when n <= 64.
  VertexMask mask(Vertex v) const { return words_ == 0 ? 0 : bits_[v * words_]; }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// An orientation: no self-loops, no anti-parallel pairs, no duplicates.
/// Immutable once built; construct through make_digraph.
class Digraph {
 public:
  Digraph() = default;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool fits_mask() const noexcept { return n_ <= kMaskVertices; }

  /// Lexicographically sorted.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Vertex> out_neighbors(Vertex v) const {
    return {out_adj_.data() + out_start_[v], out_start_[v + 1] - out_start_[v]};
  }
  std::span<const Vertex> in_neighbors(Vertex v) const {
    return {in_adj_.data() + in_start_[v], in_start_[v + 1] - in_start_[v]};
  }
  std::size_t out_degree(Vertex v) const { return out_start_[v + 1] - out_start_[v]; }
  std::size_t in_degree(Vertex v) const { return in_start_[v + 1] - in_start_[v]; }

  bool has_edge(Vertex u, Vertex v) const { return out_bits_.test(u, v); }
  bool adjacent(Vertex u, Vertex v) const { return has_edge(u, v) || has_edge(v, u); }

  std::span<const std::uint64_t> out_row(Vertex v) const { return out_bits_.row(v); }
  std::span<const std::uint64_t> in_row(Vertex v) const { return in_bits_.row(v); }

  // Valid only when fits_mask().
  VertexMask out_mask(Vertex v) const { return out_bits_.mask(v); }
  VertexMask in_mask(Vertex v) const { return in_bits_.mask(v); }
  VertexMask neighbor_mask(Vertex v) const { return out_mask(v) | in_mask(v); }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  friend Digraph make_digraph(std::size_t n, std::span<const Edge> edges);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_start_{0};
  std::vector<Vertex> out_adj_;
  std::vector<std::size_t> in_start_{0};
  std::vector<Vertex> in_adj_;
  BitRows out_bits_;
  BitRows in_bits_;
};

/// Throws InvalidGraph on a bad endpoint, self-loop, anti-parallel pair or duplicate.
Digraph make_digraph(std::size_t n, std::span<const Edge> edges);
inline Digraph make_digraph(std::size_t n, std::initializer_list<Edge> edges) {
  return make_digraph(n, std::span<const Edge>(edges.begin(), edges.size()));
}

/// Simple undirected graph; edges stored as (u, v) with u < v, sorted.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool fits_mask() const noexcept { return n_ <= kMaskVertices; }
  const std::vector<std::pair<Vertex, Vertex>>& edges() const noexcept { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + start_[v], start_[v + 1] - start_[v]};
  }
  std::size_t degree(Vertex v) const { return start_[v + 1] - start_[v]; }
  bool adjacent(Vertex u, Vertex v) const { return bits_.test(u, v); }
  VertexMask neighbor_mask(Vertex v) const { return bits_.mask(v); }

 private:
  friend UndirectedGraph make_undirected(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

  std::size_t n_ = 0;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  std::vector<std::size_t> start_{0};
  std::vector<Vertex> adj_;
  BitRows bits_;
};

/// Rejects self-loops and out-of-range endpoints; duplicate pairs are merged.
UndirectedGraph make_undirected(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

UndirectedGraph underlying(const Digraph& g);
UndirectedGraph complement(const UndirectedGraph& h);

/// Bijection vertex -> rank.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::size_t n);
  /// order[r] is the vertex placed at rank r.
  static Permutation from_order(std::span<const Vertex> order);
  static Permutation from_positions(std::vector<std::size_t> positions);

  std::size_t size() const noexcept { return pos_.size(); }
  std::size_t position(Vertex v) const { return pos_[v]; }
  const std::vector<std::size_t>& positions() const noexcept { return pos_; }
  std::vector<Vertex> order() const;
  Permutation reversed() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<std::size_t> pos) : pos_(std::move(pos)) {}
  std::vector<std::size_t> pos_;
};

Permutation random_permutation(std::size_t n, std::uint64_t seed);

/// Induced subgraph plus the map from its vertex ids back to the parent's.
struct InducedSubgraph {
  Digraph graph;
  std::vector<Vertex> to_parent;
};

/// Vertices keep the relative order given in `vertices`.
InducedSubgraph induced_subgraph(const Digraph& g, std::span<const Vertex> vertices);
InducedSubgraph induced_subgraph(const Digraph& g, VertexMask vertices);

/// Smallest-id-first Kahn order, or nullopt if g has a directed cycle.
std::optional<std::vector<Vertex>> topological_order(const Digraph& g);
bool is_acyclic(const Digraph& g);
/// Acyclicity of g[vertices]; requires g.fits_mask().
bool is_acyclic_mask(const Digraph& g, VertexMask vertices);

/// The spanning subgraph of edges (u, v) with pi(u) < pi(v). Always acyclic.
Digraph forward_subgraph(const Digraph& g, const Permutation& pi);

/// Number of edges at v oriented against pi.
std::size_t against_degree(const Digraph& g, const Permutation& pi, Vertex v);
std::size_t max_against_degree(const Digraph& g, const Permutation& pi);

/// True iff g[S ∪ W] plus the chain w1 -> w2 -> ... -> wi is acyclic, i.e. g[S ∪ W]
/// has a topological sort that lists W in the given order. S and W must be disjoint.
bool consistent_topo_exists(const Digraph& g, std::span<const Vertex> s, std::span<const Vertex> w);
/// Mask form used by the refinement enumerator; requires g.fits_mask().
bool consistent_topo_exists(const Digraph& g, VertexMask s, std::span<const Vertex> w);

/// True iff `w` lists distinct vertices and every edge of g[w] goes forward in the list.
bool is_ordered_acyclic(const Digraph& g, std::span<const Vertex> w);

Digraph random_tournament(std::size_t n, std::uint64_t seed);
/// G(n, p) with every present pair oriented by a fair coin.
Digraph random_orientation_gnp(std::size_t n, double p, std::uint64_t seed);
Digraph transitive_tournament(std::size_t n);
Digraph directed_cycle(std::size_t n);

struct BucketColoring {
  UndirectedGraph red;
  UndirectedGraph blue;
};

/// Complete (n/s)-partite graph with parts of size s, parts grouped into sqrt(n/s)
/// buckets of sqrt(n/s) parts. Blue: pairs in different parts of the same bucket.
/// Red: pairs in different buckets. Requires s | n and n/s a perfect square.
BucketColoring multipartite_bucket_graph(std::size_t n, std::size_t s);
UndirectedGraph complete_multipartite(std::size_t n, std::size_t part_size);

}  // namespace dagchrom
