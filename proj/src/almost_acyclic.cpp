#include "dagchrom/almost_acyclic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "dagchrom/errors.hpp"
#include "dagchrom/rng.hpp"
#include "mask_graph.hpp"

namespace dagchrom {

FolkloreSplit folklore_split(const Digraph& g, const Permutation& pi, const OracleLimits& limits) {
  FolkloreSplit out;
  out.forward = forward_subgraph(g, pi);
  out.backward = forward_subgraph(g, pi.reversed());
  const auto fwd = chromatic_bounds(underlying(out.forward), limits);
  const auto bwd = chromatic_bounds(underlying(out.backward), limits);
  out.exact = fwd.exact && bwd.exact;
  out.forward_chi = fwd.upper;
  out.backward_chi = bwd.upper;
  // Without exact values compare certified lower bounds.
  const bool backward_wins = out.exact ? bwd.upper > fwd.upper : bwd.lower > fwd.lower;
  out.chosen = backward_wins ? Side::backward : Side::forward;
  out.coloring = backward_wins ? bwd.coloring : fwd.coloring;
  return out;
}

SearchResult random_perm_search(const Digraph& g, std::size_t k, std::size_t trials, std::uint64_t seed,
                                const OracleLimits& limits) {
  if (trials == 0) throw PreconditionError("random_perm_search needs at least one trial");
  SearchResult result;
  result.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    Permutation pi = random_permutation(g.num_vertices(), Rng::derive(seed, t));
    Measured alpha = independence_upper_bound(underlying(forward_subgraph(g, pi)), limits);
    if (t == 0 || alpha.value < result.alpha.value) {
      result.best = std::move(pi);
      result.alpha = alpha;
      result.best_trial = t;
    }
  }
  result.success = result.alpha.value <= k;
  return result;
}

std::optional<Vertex> high_inout_vertex(const Digraph& g, std::size_t s) {
  if (s == 0) throw PreconditionError("high_inout_vertex needs s >= 1");
  const std::size_t m = g.num_vertices();
  if (m == 0) return std::nullopt;
  Vertex pick = 0;
  std::size_t best = 0;
  for (Vertex v = 0; v < m; ++v) {
    std::size_t d = std::min(g.in_degree(v), g.out_degree(v));
    if (v == 0 || d > best) best = d, pick = v;
  }
  // best >= m/(4s) - 1/2  <=>  4 s best + 2 s >= m
  if (4 * s * best + 2 * s >= m) return pick;
  return std::nullopt;
}

BlockPlan make_block_plan(const Digraph& g, const Permutation& sigma, std::size_t q,
                          std::optional<std::size_t> num_blocks) {
  const std::size_t n = g.num_vertices();
  if (sigma.size() != n) throw PreconditionError("sigma size does not match graph");
  if (q == 0) throw PreconditionError("block plan needs q >= 1");
  BlockPlan plan;
  plan.sigma = sigma;
  plan.q = q;
  plan.against.assign(n, {});
  for (const Edge& e : g.edges())
    if (sigma.position(e.from) > sigma.position(e.to)) {
      plan.against[e.from].push_back(e.to);
      plan.against[e.to].push_back(e.from);
    }
  for (Vertex v = 0; v < n; ++v) {
    std::sort(plan.against[v].begin(), plan.against[v].end());
    if (plan.against[v].size() > q)
      throw PreconditionError("sigma is not q-almost-acyclic: vertex " + std::to_string(v) + " has " +
                              std::to_string(plan.against[v].size()) + " edges against it, q = " + std::to_string(q));
  }
  std::size_t t = num_blocks.value_or(static_cast<std::size_t>(
      std::llround(std::sqrt(static_cast<double>(n) / static_cast<double>(q)))));
  t = std::clamp<std::size_t>(t, 1, std::max<std::size_t>(n, 1));
  plan.num_blocks = t;
  const std::vector<Vertex> order = sigma.order();
  const std::size_t size = n / t;
  plan.blocks.assign(t, {});
  for (std::size_t r = 0; r < n; ++r) plan.blocks[std::min(r / std::max<std::size_t>(size, 1), t - 1)].push_back(order[r]);
  return plan;
}

BlockPermutationResult block_permutation_construct(const Digraph& g, const Permutation& sigma, std::size_t q,
                                                   std::size_t retries, std::uint64_t seed,
                                                   const OracleLimits& limits, std::optional<std::size_t> num_blocks) {
  if (retries == 0) throw PreconditionError("block_permutation_construct needs at least one retry");
  BlockPermutationResult result;
  result.plan = make_block_plan(g, sigma, q, num_blocks);
  for (std::size_t r = 0; r < retries; ++r) {
    Rng rng(Rng::derive(seed, r));
    std::vector<Vertex> order;
    order.reserve(g.num_vertices());
    for (const auto& block : result.plan.blocks) {
      std::vector<Vertex> shuffled = block;
      rng.shuffle(shuffled.begin(), shuffled.end());
      order.insert(order.end(), shuffled.begin(), shuffled.end());
    }
    Permutation pi = Permutation::from_order(order);
    Measured alpha = independence_upper_bound(underlying(forward_subgraph(g, pi)), limits);
    if (r == 0 || alpha.value < result.alpha.value) {
      result.best = std::move(pi);
      result.alpha = alpha;
      result.best_retry = r;
    }
  }
  return result;
}

AlphaTail alpha_gpi_tail_mc(const Digraph& g, std::size_t trials, std::uint64_t seed, std::size_t s,
                            std::optional<std::size_t> kset_size, const OracleLimits& limits) {
  if (trials == 0) throw PreconditionError("alpha_gpi_tail_mc needs at least one trial");
  const std::size_t n = g.num_vertices();
  if (n > std::min(limits.max_n_exact_chi, kMaskVertices))
    throw LimitExceeded("alpha_gpi_tail_mc: exact alpha per trial needs n <= max_n_exact_chi");
  if (kset_size) detail::require_enumerable(n, *kset_size, limits, "alpha_gpi_tail_mc");

  AlphaTail tail;
  tail.trials = trials;
  tail.threshold = 4.0 * std::sqrt(static_cast<double>(n) * static_cast<double>(s));
  tail.kset_size = kset_size;
  std::size_t exceed = 0;
  double sum = 0.0, sum_sq = 0.0;
  detail::MaskGraph fwd;
  fwd.n = n;
  for (std::size_t t = 0; t < trials; ++t) {
    const Permutation pi = random_permutation(n, Rng::derive(seed, t));
    std::fill(fwd.nbr.begin(), fwd.nbr.begin() + n, 0);
    for (const Edge& e : g.edges())
      if (pi.position(e.from) < pi.position(e.to)) {
        fwd.nbr[e.from] |= bit(e.to);
        fwd.nbr[e.to] |= bit(e.from);
      }
    const std::size_t alpha = detail::alpha_exact(fwd);
    ++tail.histogram[alpha];
    exceed += static_cast<double>(alpha) > tail.threshold;
    if (kset_size) {
      std::uint64_t count = 0;
      detail::for_each_ksubset(full_mask(n), *kset_size, [&](VertexMask set) {
        for (VertexMask m = set; m; m &= m - 1)
          if (fwd.nbr[std::countr_zero(m)] & set) return;
        ++count;
      });
      sum += static_cast<double>(count);
      sum_sq += static_cast<double>(count) * static_cast<double>(count);
    }
  }
  const double dt = static_cast<double>(trials);
  tail.exceed_frequency = static_cast<double>(exceed) / dt;
  if (kset_size) {
    tail.kset_count.trials = trials;
    tail.kset_count.mean = sum / dt;
    const double var = trials > 1 ? std::max(0.0, (sum_sq - dt * tail.kset_count.mean * tail.kset_count.mean) / (dt - 1.0)) : 0.0;
    tail.kset_count.std_error = std::sqrt(var / dt);
  }
  return tail;
}

Permutation score_order(const Digraph& g) {
  std::vector<Vertex> order(g.num_vertices());
  std::iota(order.begin(), order.end(), Vertex{0});
  auto score = [&](Vertex v) {
    return static_cast<long long>(g.out_degree(v)) - static_cast<long long>(g.in_degree(v));
  };
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return score(a) > score(b); });
  return Permutation::from_order(order);
}

}  // namespace dagchrom
