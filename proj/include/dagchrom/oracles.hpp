#pragma once

#include <cstddef>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "dagchrom/coloring.hpp"
#include "dagchrom/digraph.hpp"

namespace dagchrom {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Size guards for the exact oracles. Configuration, not constants.
struct OracleLimits {
  std::size_t max_n_exact_chi = 20;
  std::size_t max_n_exact_fG = 9;
  std::size_t max_n_exact_astar = 18;
  std::size_t max_perm_enum = 10;
  // Largest number of k-subsets any enumerator may visit.
  std::uint64_t max_subset_enum = 5'000'000;
};

/// Throws PreconditionError unless every field is positive.
void validate(const OracleLimits& limits);

struct ChromaticResult {
  std::size_t chi = 0;
  Coloring witness;
};

/// Exact chromatic number by DSATUR branch and bound. Throws LimitExceeded above
/// max_n_exact_chi.
ChromaticResult chromatic_number_exact(const UndirectedGraph& h, const OracleLimits& limits = {});

/// Whether h admits a proper coloring with at most k colors. Same size guard.
bool is_k_colorable(const UndirectedGraph& h, std::size_t k, const OracleLimits& limits = {});

enum class ColorOrder { natural, largest_first, smallest_last, dsatur };

/// Proper coloring from a greedy sweep; ties always go to the lowest vertex id.
Coloring greedy_coloring(const UndirectedGraph& h, ColorOrder order = ColorOrder::dsatur);

/// A clique found greedily (a lower bound for chi).
std::vector<Vertex> greedy_clique(const UndirectedGraph& h);

std::size_t independence_number_exact(const UndirectedGraph& h, const OracleLimits& limits = {});

/// Largest k with disjoint k-sets A, B and no A-B edge.
std::size_t bipartite_independence_number_exact(const UndirectedGraph& h, const OracleLimits& limits = {});

/// A value together with whether it came from an exact oracle.
struct Measured {
  std::size_t value = 0;
  bool exact = false;

  friend bool operator==(const Measured&, const Measured&) = default;
};

/// Exact alpha in range, otherwise the size of a greedy clique cover (an upper bound).
Measured independence_upper_bound(const UndirectedGraph& h, const OracleLimits& limits = {});

/// Chromatic number bracket with a proper coloring attaining `upper`.
struct ChromaticBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;
  bool exact = false;
  Coloring coloring;
};

/// Exact when in range; otherwise lower = max(greedy clique, ceil(n / alpha upper bound)).
ChromaticBounds chromatic_bounds(const UndirectedGraph& h, const OracleLimits& limits = {});

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);  // saturates at UINT64_MAX

/// Number of k-subsets S with g[S] acyclic.
std::uint64_t count_acyclic_ksets(const Digraph& g, std::size_t k, const OracleLimits& limits = {});

/// Number of independent k-sets of h.
std::uint64_t count_independent_ksets(const UndirectedGraph& h, std::size_t k, const OracleLimits& limits = {});

struct FResult {
  std::size_t f = 0;
  Permutation witness;
  Coloring coloring;  // optimal coloring of forward_subgraph(g, witness)
};

/// f(G), the largest chromatic number of an acyclic subgraph.
///
/// Every acyclic subgraph H has a topological order, and extending it to a full
/// permutation pi gives H ⊆ G_pi, so the maximum over the n! subgraphs G_pi is f(G).
/// Permutations are scanned in lexicographic order of their vertex sequence and
/// the witness is the first one attaining the maximum. Subgraphs whose longest
/// path cannot beat the incumbent are skipped (chi <= longest path, vertex count).
FResult f_exact(const Digraph& g, const OracleLimits& limits = {});

/// Exact fraction of permutations pi with G_pi edgeless. Equals the number of
/// topological orders of g divided by n!, and is 0 when g has a cycle.
Rational edgeless_probability_exact(const Digraph& g, const OracleLimits& limits = {});

/// Sample frequency and its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

Estimate edgeless_probability_mc(const Digraph& g, std::size_t trials, std::uint64_t seed);

/// (s e / k)^k, evaluated through its logarithm.
double gallai_bound_value(std::size_t k, std::size_t s);
/// k (ln s + 1 - ln k).
double log_gallai_bound(std::size_t k, std::size_t s);

}  // namespace dagchrom
