#pragma once

// Internal bitmask kernels for graphs with at most 64 vertices.

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "dagchrom/coloring.hpp"
#include "dagchrom/digraph.hpp"
#include "dagchrom/oracles.hpp"

namespace dagchrom::detail {

struct MaskGraph {
  std::size_t n = 0;
  std::array<VertexMask, kMaskVertices> nbr{};
};

MaskGraph to_masks(const UndirectedGraph& h);
MaskGraph to_masks(const Digraph& d);  // underlying graph

std::size_t clique_lower_bound(const MaskGraph& g);
std::pair<std::size_t, Coloring> chromatic_exact(const MaskGraph& g);
bool k_colorable(const MaskGraph& g, std::size_t k);
std::size_t alpha_exact(const MaskGraph& g);

// Longest path (in vertices) of the forward subgraph of d along `order`.
std::size_t longest_forward_path(const Digraph& d, const std::vector<Vertex>& order,
                                 const std::vector<std::size_t>& pos);

void require_enumerable(std::size_t n, std::size_t k, const OracleLimits& limits, const char* what);

// Calls fn(subset) for every k-subset of `universe`, in colexicographic order of
// the index tuples over the universe's vertices listed ascending.
template <class Fn>
void for_each_ksubset(VertexMask universe, std::size_t k, Fn&& fn) {
  const std::vector<Vertex> pool = mask_vertices(universe);
  const std::size_t n = pool.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    VertexMask s = 0;
    for (std::size_t i : idx) s |= bit(pool[i]);
    fn(s);
    // Advance to the next combination.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace dagchrom::detail
