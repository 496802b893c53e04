#include "dagchrom/digraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "dagchrom/errors.hpp"
#include "dagchrom/rng.hpp"

namespace dagchrom {

std::vector<Vertex> mask_vertices(VertexMask m) {
  std::vector<Vertex> out;
  out.reserve(std::popcount(m));
  for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

namespace {

std::string edge_str(Vertex u, Vertex v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

void build_csr(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& arcs,
               std::vector<std::size_t>& start, std::vector<Vertex>& adj) {
  start.assign(n + 1, 0);
  for (auto [u, v] : arcs) ++start[u + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  adj.assign(arcs.size(), 0);
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (auto [u, v] : arcs) adj[fill[u]++] = v;
  for (Vertex v = 0; v < n; ++v) std::sort(adj.begin() + start[v], adj.begin() + start[v + 1]);
}

}  // namespace

Digraph make_digraph(std::size_t n, std::span<const Edge> edges) {
  Digraph g;
  g.n_ = n;
  g.edges_.assign(edges.begin(), edges.end());
  for (const Edge& e : g.edges_) {
    if (e.from >= n || e.to >= n) throw InvalidGraph("endpoint out of range in edge " + edge_str(e.from, e.to));
    if (e.from == e.to) throw InvalidGraph("self-loop at vertex " + std::to_string(e.from));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.out_bits_ = BitRows(n);
  g.in_bits_ = BitRows(n);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    if (i > 0 && g.edges_[i - 1] == e) throw InvalidGraph("duplicate edge " + edge_str(e.from, e.to));
    if (g.out_bits_.test(e.to, e.from))
      throw InvalidGraph("anti-parallel pair " + edge_str(e.from, e.to) + " and " + edge_str(e.to, e.from));
    g.out_bits_.set(e.from, e.to);
    g.in_bits_.set(e.to, e.from);
  }
  std::vector<std::pair<Vertex, Vertex>> out_arcs, in_arcs;
  out_arcs.reserve(g.edges_.size());
  in_arcs.reserve(g.edges_.size());
  for (const Edge& e : g.edges_) {
    out_arcs.emplace_back(e.from, e.to);
    in_arcs.emplace_back(e.to, e.from);
  }
  build_csr(n, out_arcs, g.out_start_, g.out_adj_);
  build_csr(n, in_arcs, g.in_start_, g.in_adj_);
  return g;
}

UndirectedGraph make_undirected(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
  UndirectedGraph h;
  h.n_ = n;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidGraph("endpoint out of range in edge " + edge_str(u, v));
    if (u == v) throw InvalidGraph("self-loop at vertex " + std::to_string(u));
    h.edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(h.edges_.begin(), h.edges_.end());
  h.edges_.erase(std::unique(h.edges_.begin(), h.edges_.end()), h.edges_.end());
  h.bits_ = BitRows(n);
  std::vector<std::pair<Vertex, Vertex>> arcs;
  arcs.reserve(2 * h.edges_.size());
  for (auto [u, v] : h.edges_) {
    h.bits_.set(u, v);
    h.bits_.set(v, u);
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  build_csr(n, arcs, h.start_, h.adj_);
  return h;
}

UndirectedGraph underlying(const Digraph& g) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(g.num_edges());
  for (const Edge& e : g.edges()) pairs.emplace_back(e.from, e.to);
  return make_undirected(g.num_vertices(), pairs);
}

UndirectedGraph complement(const UndirectedGraph& h) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < h.num_vertices(); ++u)
    for (Vertex v = u + 1; v < h.num_vertices(); ++v)
      if (!h.adjacent(u, v)) pairs.emplace_back(u, v);
  return make_undirected(h.num_vertices(), pairs);
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> pos(n);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  return Permutation(std::move(pos));
}

Permutation Permutation::from_order(std::span<const Vertex> order) {
  const std::size_t n = order.size();
  std::vector<std::size_t> pos(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (order[r] >= n || pos[order[r]] != n) throw PreconditionError("order is not a bijection on 0..n-1");
    pos[order[r]] = r;
  }
  return Permutation(std::move(pos));
}

Permutation Permutation::from_positions(std::vector<std::size_t> positions) {
  const std::size_t n = positions.size();
  std::vector<char> seen(n, 0);
  for (std::size_t p : positions) {
    if (p >= n || seen[p]) throw PreconditionError("positions are not a bijection on 0..n-1");
    seen[p] = 1;
  }
  return Permutation(std::move(positions));
}

std::vector<Vertex> Permutation::order() const {
  std::vector<Vertex> order(pos_.size());
  for (Vertex v = 0; v < pos_.size(); ++v) order[pos_[v]] = v;
  return order;
}

Permutation Permutation::reversed() const {
  std::vector<std::size_t> pos(pos_.size());
  for (Vertex v = 0; v < pos_.size(); ++v) pos[v] = pos_.size() - 1 - pos_[v];
  return Permutation(std::move(pos));
}

Permutation random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  return Permutation::from_order(order);
}

InducedSubgraph induced_subgraph(const Digraph& g, std::span<const Vertex> vertices) {
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= g.num_vertices() || local[vertices[i]] != kAbsent)
      throw PreconditionError("induced_subgraph: vertex list must be distinct valid vertices");
    local[vertices[i]] = i;
  }
  std::vector<Edge> edges;
  for (Vertex u : vertices)
    for (Vertex v : g.out_neighbors(u))
      if (local[v] != kAbsent) edges.push_back({local[u], local[v]});
  return {make_digraph(vertices.size(), edges), std::vector<Vertex>(vertices.begin(), vertices.end())};
}

InducedSubgraph induced_subgraph(const Digraph& g, VertexMask vertices) {
  auto list = mask_vertices(vertices);
  return induced_subgraph(g, list);
}

std::optional<std::vector<Vertex>> topological_order(const Digraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> indeg(n);
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (Vertex v = 0; v < n; ++v)
    if ((indeg[v] = g.in_degree(v)) == 0) ready.push(v);
  std::vector<Vertex> order;
  order.reserve(n);
  while (!ready.empty()) {
    Vertex u = ready.top();
    ready.pop();
    order.push_back(u);
    for (Vertex v : g.out_neighbors(u))
      if (--indeg[v] == 0) ready.push(v);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

bool is_acyclic(const Digraph& g) { return topological_order(g).has_value(); }

bool is_acyclic_mask(const Digraph& g, VertexMask vertices) {
  VertexMask rest = vertices;
  while (rest) {
    VertexMask sources = 0;
    for (VertexMask m = rest; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      if ((g.in_mask(v) & rest) == 0) sources |= bit(v);
    }
    if (!sources) return false;
    rest &= ~sources;
  }
  return true;
}

Digraph forward_subgraph(const Digraph& g, const Permutation& pi) {
  if (pi.size() != g.num_vertices()) throw PreconditionError("permutation size does not match graph");
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (pi.position(e.from) < pi.position(e.to)) kept.push_back(e);
  return make_digraph(g.num_vertices(), kept);
}

std::size_t against_degree(const Digraph& g, const Permutation& pi, Vertex v) {
  if (pi.size() != g.num_vertices()) throw PreconditionError("permutation size does not match graph");
  if (v >= g.num_vertices()) throw PreconditionError("invalid vertex " + std::to_string(v));
  std::size_t count = 0;
  for (Vertex x : g.out_neighbors(v)) count += pi.position(x) < pi.position(v);
  for (Vertex x : g.in_neighbors(v)) count += pi.position(x) > pi.position(v);
  return count;
}

std::size_t max_against_degree(const Digraph& g, const Permutation& pi) {
  std::size_t best = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) best = std::max(best, against_degree(g, pi, v));
  return best;
}

namespace {

// Kahn on g[S ∪ W] with the extra chain edges along W.
bool chain_augmented_acyclic(const Digraph& g, std::span<const Vertex> members,
                             std::span<const Vertex> w) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> local(n, n);
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
  std::vector<std::vector<std::size_t>> out(members.size());
  std::vector<std::size_t> indeg(members.size(), 0);
  for (std::size_t i = 0; i < members.size(); ++i)
    for (Vertex v : g.out_neighbors(members[i]))
      if (local[v] != n) {
        out[i].push_back(local[v]);
        ++indeg[local[v]];
      }
  for (std::size_t j = 1; j < w.size(); ++j) {
    out[local[w[j - 1]]].push_back(local[w[j]]);
    ++indeg[local[w[j]]];
  }
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (indeg[i] == 0) stack.push_back(i);
  std::size_t seen = 0;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    ++seen;
    for (auto v : out[u])
      if (--indeg[v] == 0) stack.push_back(v);
  }
  return seen == members.size();
}

}  // namespace

bool consistent_topo_exists(const Digraph& g, std::span<const Vertex> s, std::span<const Vertex> w) {
  std::vector<char> in_s(g.num_vertices(), 0);
  for (Vertex v : s) {
    if (v >= g.num_vertices()) throw PreconditionError("invalid vertex in S");
    in_s[v] = 1;
  }
  std::vector<Vertex> members(s.begin(), s.end());
  std::vector<char> in_w(g.num_vertices(), 0);
  for (Vertex v : w) {
    if (v >= g.num_vertices()) throw PreconditionError("invalid vertex in W");
    if (in_s[v]) throw PreconditionError("S and W overlap at vertex " + std::to_string(v));
    if (in_w[v]) throw PreconditionError("W repeats vertex " + std::to_string(v));
    in_w[v] = 1;
    members.push_back(v);
  }
  return chain_augmented_acyclic(g, members, w);
}

bool consistent_topo_exists(const Digraph& g, VertexMask s, std::span<const Vertex> w) {
  // Chain predecessor of each wall, as a mask.
  VertexMask all = s;
  std::uint64_t chain_pred[kMaskVertices] = {};
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (s & bit(w[j])) throw PreconditionError("S and W overlap");
    all |= bit(w[j]);
    if (j > 0) chain_pred[w[j]] = bit(w[j - 1]);
  }
  VertexMask rest = all;
  while (rest) {
    VertexMask sources = 0;
    for (VertexMask m = rest; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      if (((g.in_mask(v) | chain_pred[v]) & rest) == 0) sources |= bit(v);
    }
    if (!sources) return false;
    rest &= ~sources;
  }
  return true;
}

bool is_ordered_acyclic(const Digraph& g, std::span<const Vertex> w) {
  std::vector<std::size_t> rank(g.num_vertices(), g.num_vertices());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] >= g.num_vertices() || rank[w[j]] != g.num_vertices()) return false;
    rank[w[j]] = j;
  }
  for (Vertex u : w)
    for (Vertex v : g.out_neighbors(u))
      if (rank[v] != g.num_vertices() && rank[v] < rank[u]) return false;
  return true;
}

Digraph random_tournament(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      edges.push_back(rng.bernoulli(0.5) ? Edge{u, v} : Edge{v, u});
  return make_digraph(n, edges);
}

Digraph random_orientation_gnp(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("edge probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      // Both draws are consumed for every pair so the stream layout does not depend on p.
      bool present = rng.bernoulli(p);
      bool forward = rng.bernoulli(0.5);
      if (present) edges.push_back(forward ? Edge{u, v} : Edge{v, u});
    }
  return make_digraph(n, edges);
}

Digraph transitive_tournament(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return make_digraph(n, edges);
}

Digraph directed_cycle(std::size_t n) {
  if (n < 3) throw PreconditionError("a directed cycle in an orientation needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
  return make_digraph(n, edges);
}

namespace {

std::size_t exact_sqrt(std::size_t x) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(x))));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace

UndirectedGraph complete_multipartite(std::size_t n, std::size_t part_size) {
  if (part_size == 0 || n % part_size != 0) throw PreconditionError("part size must divide n");
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (u / part_size != v / part_size) pairs.emplace_back(u, v);
  return make_undirected(n, pairs);
}

BucketColoring multipartite_bucket_graph(std::size_t n, std::size_t s) {
  if (s == 0 || n == 0 || n % s != 0) throw PreconditionError("s must divide n");
  const std::size_t parts = n / s;
  const std::size_t per_bucket = exact_sqrt(parts);
  if (per_bucket * per_bucket != parts) throw PreconditionError("n/s must be a perfect square");
  std::vector<std::pair<Vertex, Vertex>> red, blue;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const std::size_t pu = u / s, pv = v / s;
      if (pu == pv) continue;
      (pu / per_bucket == pv / per_bucket ? blue : red).emplace_back(u, v);
    }
  return {make_undirected(n, red), make_undirected(n, blue)};
}

}  // namespace dagchrom
