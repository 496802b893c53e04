#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dagchrom/coloring.hpp"
#include "dagchrom/digraph.hpp"
#include "dagchrom/oracles.hpp"
#include "dagchrom/refine.hpp"

namespace dagchrom {

struct PipelineParams {
  std::size_t s = 1;                 // alpha(G) < s and alpha*(G) < s expected
  std::optional<std::size_t> k;      // default round(n^{4/9} s^{14/9}), capped at n
  double s_threshold_exponent = 1.0 / 19.0;
  std::size_t folklore_trials = 32;  // random orders tried after the score order
  std::size_t search_trials = 64;
  std::size_t block_retries = 16;
  std::size_t count_samples = 20000;  // k-set sampling when C(n, k) is too large
  std::uint64_t seed = 0;
  OracleLimits limits;
  RefineOptions refine;

  /// Throws PreconditionError on s == 0, k == 0 or an empty budget.
  void validate() const;
};

enum class Branch { folklore, few_ksets, extract_then_order };
const char* to_string(Branch branch);

/// Acyclic k-set count, exact or sampled.
struct KsetCount {
  bool exact = false;
  double log_count = 0.0;        // ln of the count (or estimate); -inf when zero
  double log_upper = 0.0;        // ln of the upper end of a 95% interval when sampled
  std::uint64_t count = 0;       // exact count
  std::size_t samples = 0;
  std::size_t hits = 0;
};

struct PipelineResult {
  Branch branch = Branch::folklore;
  std::size_t k = 0;
  Permutation witness;      // over all of G
  Digraph subgraph;         // forward_subgraph(G, witness)
  Coloring coloring;        // proper on subgraph
  std::size_t lower_bound = 0;  // L <= chi(subgraph)
  bool lower_bound_exact = false;
  // Set on the extract-then-order branch: the reduced graph, its order and q.
  std::optional<InducedSubgraph> reduced;
  std::optional<Permutation> reduced_order;
  std::optional<std::size_t> measured_q;
  std::optional<KsetCount> kset_count;
  double log_kset_threshold = 0.0;  // k (ln k - ln s - 1)
  // Alpha and alpha* when the oracles are in range.
  std::optional<std::size_t> alpha;
  std::optional<std::size_t> alpha_star;
  bool precondition_checked = false;
  bool precondition_holds = true;
  bool degraded = false;         // a later branch failed and folklore took over
  std::vector<std::string> notes;
  std::vector<RefineTrace> traces;
};

/// Three-way construction of a large-chromatic acyclic subgraph: the folklore
/// split when s >= n^{exponent}, a permutation with small alpha(G_pi) when
/// acyclic k-sets are scarce, and otherwise extraction of an almost-acyclic
/// subgraph followed by block shuffling. Any failure falls back to the folklore
/// split, so a valid result is always produced. Throws only on invalid params.
PipelineResult main_pipeline(const Digraph& g, const PipelineParams& params);

/// Default k for the pipeline.
std::size_t default_k(std::size_t n, std::size_t s);

}  // namespace dagchrom
