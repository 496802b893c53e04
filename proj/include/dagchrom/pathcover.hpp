#pragma once

#include <cstddef>
#include <vector>

#include "dagchrom/digraph.hpp"
#include "dagchrom/oracles.hpp"

namespace dagchrom {

/// Pairwise vertex-disjoint directed paths covering every vertex. Each path is a
/// non-empty vertex sequence whose consecutive pairs are edges.
struct PathCover {
  std::vector<std::vector<Vertex>> paths;
};

bool is_valid_cover(const Digraph& g, const PathCover& cover);

/// A cover together with an independent set of the same size, which proves
/// |paths| <= alpha(G).
struct CertifiedPathCover {
  PathCover cover;
  std::vector<Vertex> independent_set;
};

/// Gallai-Milgram by terminal exchange: start from singletons and repeatedly
/// trade the cover for one with one path fewer whose terminal set is a subset of
/// the old one. That stops only when the terminals of some induced subcover form
/// an independent set as large as the cover, which is returned as the certificate.
/// Ties go to the lexicographically smallest terminal edge.
CertifiedPathCover gallai_milgram_cover_certified(const Digraph& g);
PathCover gallai_milgram_cover(const Digraph& g);

/// Product of p! over the path sizes p.
BigInt cover_factorial_product(const PathCover& cover);

/// Whether prod p_i! >= (k / (s e))^k with k the number of covered vertices.
/// Throws PreconditionError when the cover has more than s paths.
bool convexity_bound_check(const PathCover& cover, std::size_t s);

}  // namespace dagchrom
