#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dagchrom/coloring.hpp"
#include "dagchrom/digraph.hpp"
#include "dagchrom/oracles.hpp"

namespace dagchrom {

enum class Side { forward, backward };

/// The two acyclic halves of G along pi and the colored heavier one.
struct FolkloreSplit {
  Digraph forward;   // G_pi
  Digraph backward;  // G_{pi^rev}
  Side chosen = Side::forward;
  std::size_t forward_chi = 0;
  std::size_t backward_chi = 0;
  bool exact = false;  // chromatic numbers from the exact oracle
  Coloring coloring;   // of the chosen side
};

/// Picks the side with the larger chromatic number (exact when in range, greedy
/// otherwise); ties go to the forward side. Since chi(G) <= chi(G_pi) chi(G_{pi^rev}),
/// the chosen side has chi >= sqrt(chi(G)) whenever the values are exact.
FolkloreSplit folklore_split(const Digraph& g, const Permutation& pi, const OracleLimits& limits = {});

struct SearchResult {
  Permutation best;
  Measured alpha;          // alpha(G_best); an upper bound when not exact
  bool success = false;    // alpha <= k
  std::size_t best_trial = 0;
  std::size_t trials = 0;
};

/// Samples `trials` uniform permutations and keeps the one minimizing alpha(G_pi);
/// ties keep the earliest trial. Not finding alpha <= k is reported, not thrown.
SearchResult random_perm_search(const Digraph& g, std::size_t k, std::size_t trials, std::uint64_t seed,
                                const OracleLimits& limits = {});

/// Vertex maximizing min(in, out) (lowest id on ties) if it clears
/// m/(4s) - 1/2 with m = |V(G)|; nullopt means alpha(G) <= s must have failed.
std::optional<Vertex> high_inout_vertex(const Digraph& g, std::size_t s);

/// Blocks of a base order sigma and the against-sets B(v).
struct BlockPlan {
  Permutation sigma;
  std::size_t q = 0;
  std::size_t num_blocks = 0;
  // blocks[i] holds the vertices of ranks [i * size, (i + 1) * size) of sigma in
  // sigma order; the last block absorbs the remainder.
  std::vector<std::vector<Vertex>> blocks;
  // against[v]: vertices x whose edge with v is oriented against sigma.
  std::vector<std::vector<Vertex>> against;
};

/// num_blocks defaults to max(1, round(sqrt(n / q))), capped at n. Throws
/// PreconditionError if q == 0 or some |B(v)| exceeds q.
BlockPlan make_block_plan(const Digraph& g, const Permutation& sigma, std::size_t q,
                          std::optional<std::size_t> num_blocks = std::nullopt);

struct BlockPermutationResult {
  BlockPlan plan;
  Permutation best;
  Measured alpha;  // alpha(G_best)
  std::size_t best_retry = 0;
};

/// Each retry shuffles every block independently (retry r uses stream r of
/// `seed`); returns the candidate with the smallest measured alpha(G_pi).
BlockPermutationResult block_permutation_construct(const Digraph& g, const Permutation& sigma, std::size_t q,
                                                   std::size_t retries, std::uint64_t seed,
                                                   const OracleLimits& limits = {},
                                                   std::optional<std::size_t> num_blocks = std::nullopt);

struct AlphaTail {
  std::map<std::size_t, std::size_t> histogram;  // alpha(G_pi) -> count
  double threshold = 0.0;                        // 4 sqrt(n s)
  double exceed_frequency = 0.0;
  std::size_t trials = 0;
  // Independent k-sets of G_pi, when a k was requested.
  std::optional<std::size_t> kset_size;
  Estimate kset_count;
};

/// Distribution of alpha(G_pi) over uniform pi, computed exactly per trial.
AlphaTail alpha_gpi_tail_mc(const Digraph& g, std::size_t trials, std::uint64_t seed, std::size_t s,
                            std::optional<std::size_t> kset_size = std::nullopt, const OracleLimits& limits = {});

/// Orders by out-degree minus in-degree, descending, ties by id. On a transitive
/// tournament this is the topological order.
Permutation score_order(const Digraph& g);

}  // namespace dagchrom
