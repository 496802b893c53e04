#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dagchrom/digraph.hpp"
#include "dagchrom/oracles.hpp"

namespace dagchrom {

// Bins relative to an ordered acyclic set W = (w_1, ..., w_i): bin j sits between
// walls w_j and w_{j+1}; bin 0 is before w_1 and bin i after w_i.

/// Contiguous range of bins [first, last], or empty.
struct BinInterval {
  std::size_t first = 0;
  std::size_t last = 0;
  bool empty = false;

  std::size_t width() const { return empty ? 0 : last - first + 1; }
  bool contains(std::size_t bin) const { return !empty && first <= bin && bin <= last; }
  friend bool operator==(const BinInterval&, const BinInterval&) = default;
};

/// Allowed bins of v: after its last in-neighbor wall and before its first
/// out-neighbor wall; empty when some in-neighbor wall comes after an
/// out-neighbor wall.
BinInterval allowed_interval(const Digraph& g, std::span<const Vertex> walls, Vertex v);

/// Interval of v after inserting wall w at bin `bin` (so w becomes wall bin+1).
BinInterval split_interval(const Digraph& g, const BinInterval& old, Vertex v, Vertex w, std::size_t bin);

/// Whether x -> y is an edge and every allowed bin of x lies after every allowed bin of y.
bool incompatible_pair(const Digraph& g, Vertex x, const BinInterval& ix, Vertex y, const BinInterval& iy);

enum class RefinePhase { refine, align };
const char* to_string(RefinePhase phase);

/// One executed step i -> i+1.
struct RefineStep {
  std::size_t index = 0;
  RefinePhase phase = RefinePhase::refine;
  std::size_t candidates = 0;         // |V'_i|
  std::size_t core = 0;               // |V_i|
  std::uint64_t hyperedges = 0;       // N'_i
  std::uint64_t core_hyperedges = 0;  // N_i
  std::uint64_t core_min_degree = 0;  // min degree in H_i
  std::size_t popular_bin = 0;        // p_i (refinement)
  std::size_t popular_balls = 0;      // |X_{i,p_i}| (refinement)
  std::size_t modal_group = 0;        // |Y| (refinement)
  std::size_t incompatible = 0;       // vertices of V_i incompatible with w
  Vertex chosen = 0;                  // w
  std::size_t bin = 0;                // bin split by w
  std::size_t width = 0;              // allowed bins of w before the split
  std::uint64_t degree = 0;           // d_i(w)
  std::uint64_t placed = 0;           // edges of H_i through w placeable in `bin`
  std::uint64_t next_hyperedges = 0;  // N'_{i+1}
  std::size_t new_blacks = 0;
  std::size_t blacks = 0;             // after the step

  // Per-step checks, all expected true.
  bool min_degree_ok = false;   // core_min_degree * |V'_i| >= N'_i
  bool recurrence_ok = false;   // N'_{i+1} * 2s |V'_i| >= N'_i
  bool chain_ok = false;        // N'_{i+1} >= placed, placed * width >= degree, width <= 2s
  bool widths_ok = false;       // every white vertex of V'_{i+1} has 1..2s allowed bins
  bool black_bound_ok = false;  // blacks <= 2s (i+1)
  bool state_ok = false;        // maintained intervals and ball counts match a recomputation
  bool walls_ok = false;        // W_{i+1} is an ordered acyclic set

  bool all_ok() const {
    return min_degree_ok && recurrence_ok && chain_ok && widths_ok && black_bound_ok && state_ok && walls_ok;
  }
};

/// Two disjoint s-sets with no edge between them, found when a split blackens 2s
/// or more vertices. Its existence contradicts alpha*(G) < s.
struct BlackeningWitness {
  std::size_t step = 0;
  std::vector<Vertex> vertices;  // problematic vertices on one side of the new wall
  std::vector<Vertex> walls;     // the new wall and its neighbors on that side
  bool verified = false;         // disjoint and no edges between
};

struct RefineTrace {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t s = 0;
  std::size_t refinement_steps = 0;  // z after clamping
  std::size_t refinement_steps_unclamped = 0;
  double epsilon = 0.0;
  std::vector<std::string> clamps;
  std::uint64_t initial_hyperedges = 0;  // N'_0
  std::vector<RefineStep> steps;
  std::size_t t = 0;
  std::size_t k_prime = 0;  // k - t
  std::uint64_t final_core_hyperedges = 0;  // N_t
  std::vector<Vertex> final_core;           // V_t
  std::vector<Vertex> final_walls;          // W_t
  std::vector<Vertex> final_blacks;         // black vertices of V_t
  std::optional<BlackeningWitness> witness;

  bool all_steps_ok() const;
};

/// Line log: a header comment, then per step
/// "step phase N' |V'| w bin blacks".
std::string format_trace_log(const RefineTrace& trace);
/// CSV with every RefineStep field; header row first.
std::string format_trace_csv(const RefineTrace& trace);

enum class RefineStatus { complete, dead_end };

struct RefineOptions {
  std::optional<std::size_t> refinement_steps;  // overrides max(1, round(k / ln n))
  std::optional<double> epsilon;                // overrides min(1, ln^2 n / k)
};

struct RefineResult {
  RefineStatus status = RefineStatus::complete;
  std::string reason;
  RefineTrace trace;
  InducedSubgraph extracted;   // G[V_t]
  InducedSubgraph white_part;  // G[white vertices of V_t], ascending ids
  Permutation order;           // on white_part.graph, by first allowed bin then id
  std::size_t measured_q = 0;  // max against-degree of `order`
};

/// Ordered-acyclic-set extraction with refinement then alignment steps, exact
/// hyperedge enumeration and degree peeling at every step.
///
/// Refinement runs z = max(1, round(k / ln n)) steps and alignment continues while
/// some white vertex is incompatible with at least eps |V_i| vertices,
/// eps = min(1, ln^2 n / k). Both stop once hyperedges would shrink below one
/// vertex (z <= k - 1, t <= k - 1). Throws PreconditionError when n < k or
/// there is no acyclic k-set, LimitExceeded when C(n, k) exceeds the limits.
RefineResult refine_align(const Digraph& g, std::size_t k, std::size_t s, const OracleLimits& limits = {},
                          const RefineOptions& options = {});

struct ReduceResult {
  RefineStatus status = RefineStatus::complete;
  std::string reason;
  std::size_t rounds_planned = 0;
  InducedSubgraph graph;       // last extracted white subgraph, ids into the input
  Permutation order;           // on graph.graph
  std::size_t measured_q = 0;
  std::vector<std::size_t> ks;  // k used by each executed round
  std::vector<RefineTrace> traces;
};

/// Up to max(1, round(sqrt(ln n))) rounds of refine_align, each on the white
/// part of the previous round with k replaced by k - t. Stops early on a dead end
/// or when fewer than two hyperedge vertices would remain.
ReduceResult iterate_reduce(const Digraph& g, std::size_t k, std::size_t s, const OracleLimits& limits = {},
                            const RefineOptions& options = {});

}  // namespace dagchrom
