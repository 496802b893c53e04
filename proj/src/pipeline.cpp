#include "dagchrom/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dagchrom/almost_acyclic.hpp"
#include "dagchrom/errors.hpp"
#include "dagchrom/rng.hpp"

namespace dagchrom {

void PipelineParams::validate() const {
  if (s == 0) throw PreconditionError("pipeline needs s >= 1");
  if (k && *k == 0) throw PreconditionError("pipeline needs k >= 1");
  if (folklore_trials == 0 || search_trials == 0 || block_retries == 0 || count_samples == 0)
    throw PreconditionError("pipeline budgets must be at least 1");
  dagchrom::validate(limits);
}

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::folklore: return "folklore";
    case Branch::few_ksets: return "few-ksets";
    case Branch::extract_then_order: return "extract-then-order";
  }
  return "?";
}

std::size_t default_k(std::size_t n, std::size_t s) {
  if (n == 0) return 1;
  const double k = std::pow(static_cast<double>(n), 4.0 / 9.0) * std::pow(static_cast<double>(s), 14.0 / 9.0);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(k)), 1, n);
}

namespace {

// Streams of the pipeline seed.
enum Stream : std::uint64_t { kFolklore = 1, kSearch = 2, kBlocks = 3, kSampling = 4 };

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

KsetCount count_ksets(const Digraph& g, std::size_t k, const PipelineParams& params) {
  KsetCount out;
  const std::size_t n = g.num_vertices();
  if (g.fits_mask() && binomial(n, k) <= params.limits.max_subset_enum) {
    out.exact = true;
    out.count = count_acyclic_ksets(g, k, params.limits);
    out.log_count = out.count ? std::log(static_cast<double>(out.count)) : -std::numeric_limits<double>::infinity();
    out.log_upper = out.log_count;
    return out;
  }
  Rng rng(Rng::derive(params.seed, kSampling));
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), Vertex{0});
  out.samples = params.count_samples;
  for (std::size_t t = 0; t < out.samples; ++t) {
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
    std::vector<Vertex> pick(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    out.hits += is_acyclic(induced_subgraph(g, pick).graph);
  }
  const double p = static_cast<double>(out.hits) / static_cast<double>(out.samples);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(out.samples));
  const double upper = std::min(1.0, p + 1.96 * se + 1.0 / static_cast<double>(out.samples));
  const double lb = log_binomial(n, k);
  out.log_count = p > 0 ? lb + std::log(p) : -std::numeric_limits<double>::infinity();
  out.log_upper = lb + std::log(upper);
  return out;
}

void finish(const Digraph& g, PipelineResult& r, const OracleLimits& limits) {
  r.subgraph = forward_subgraph(g, r.witness);
  ChromaticBounds b = chromatic_bounds(underlying(r.subgraph), limits);
  r.coloring = std::move(b.coloring);
  r.lower_bound = std::max(r.lower_bound, b.lower);
  r.lower_bound_exact = b.exact;
  if (b.exact) r.lower_bound = b.lower;
}

void run_folklore(const Digraph& g, const PipelineParams& params, PipelineResult& r) {
  r.branch = Branch::folklore;
  r.lower_bound = 0;
  const std::size_t n = g.num_vertices();
  std::vector<Permutation> candidates{score_order(g)};
  for (std::size_t t = 0; t < params.folklore_trials; ++t)
    candidates.push_back(random_permutation(n, Rng::derive(Rng::derive(params.seed, kFolklore), t)));
  std::size_t best = 0;
  for (const auto& pi : candidates) {
    FolkloreSplit split = folklore_split(g, pi, params.limits);
    const std::size_t value = std::max(split.forward_chi, split.backward_chi);
    if (r.witness.size() != n || value > best) {
      best = value;
      r.witness = split.chosen == Side::forward ? pi : pi.reversed();
    }
  }
  finish(g, r, params.limits);
}

bool run_few_ksets(const Digraph& g, const PipelineParams& params, PipelineResult& r) {
  SearchResult found = random_perm_search(g, r.k, params.search_trials, Rng::derive(params.seed, kSearch), params.limits);
  if (!found.success) {
    r.notes.push_back("few-ksets: no permutation with alpha(G_pi) <= k in " + std::to_string(params.search_trials) +
                      " trials (best " + std::to_string(found.alpha.value) + ")");
    return false;
  }
  r.branch = Branch::few_ksets;
  r.witness = found.best;
  // alpha(G_pi) <= alpha.value, so chi(G_pi) >= n / alpha.value.
  const std::size_t n = g.num_vertices();
  r.lower_bound = found.alpha.value ? (n + found.alpha.value - 1) / found.alpha.value : 0;
  finish(g, r, params.limits);
  return true;
}

bool run_extract(const Digraph& g, const PipelineParams& params, PipelineResult& r) {
  ReduceResult red;
  try {
    red = iterate_reduce(g, r.k, params.s, params.limits, params.refine);
  } catch (const LimitExceeded& e) {
    r.notes.push_back(std::string("extract: ") + e.what());
    return false;
  } catch (const PreconditionError& e) {
    r.notes.push_back(std::string("extract: ") + e.what());
    return false;
  }
  r.traces = red.traces;
  if (red.status == RefineStatus::dead_end) {
    r.notes.push_back("extract: dead end: " + red.reason);
    return false;
  }
  if (!red.reason.empty()) r.notes.push_back("extract: " + red.reason);
  const std::size_t n_prime = red.graph.graph.num_vertices();
  if (n_prime == 0) {
    r.notes.push_back("extract: empty white part");
    return false;
  }
  const std::size_t q = std::max<std::size_t>(1, red.measured_q);
  const double window_low = std::cbrt(static_cast<double>(n_prime)) * std::pow(static_cast<double>(params.s), -2.0 / 3.0);
  r.notes.push_back("q window: q = " + std::to_string(red.measured_q) + ", n' = " + std::to_string(n_prime) +
                    ", q >= n'^(1/3) s^(-2/3) " + (static_cast<double>(q) >= window_low ? "holds" : "fails") +
                    ", q < n' " + (q < n_prime ? "holds" : "fails"));
  BlockPermutationResult blocks =
      block_permutation_construct(red.graph.graph, red.order, q, params.block_retries,
                                  Rng::derive(params.seed, kBlocks), params.limits);
  r.branch = Branch::extract_then_order;
  r.reduced = red.graph;
  r.reduced_order = red.order;
  r.measured_q = red.measured_q;

  // Extracted vertices first in pi order, the rest after them by id.
  std::vector<Vertex> order;
  std::vector<char> used(g.num_vertices(), 0);
  for (Vertex local : blocks.best.order()) {
    order.push_back(red.graph.to_parent[local]);
    used[red.graph.to_parent[local]] = 1;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (!used[v]) order.push_back(v);
  r.witness = Permutation::from_order(order);
  r.lower_bound = 0;
  finish(g, r, params.limits);
  return true;
}

}  // namespace

PipelineResult main_pipeline(const Digraph& g, const PipelineParams& params) {
  params.validate();
  PipelineResult r;
  const std::size_t n = g.num_vertices();
  r.k = params.k ? std::min(*params.k, std::max<std::size_t>(n, 1)) : default_k(n, params.s);
  r.log_kset_threshold = static_cast<double>(r.k) *
                         (std::log(static_cast<double>(r.k)) - std::log(static_cast<double>(params.s)) - 1.0);
  if (n == 0) {
    r.notes.push_back("empty graph");
    return r;
  }

  const UndirectedGraph h = underlying(g);
  if (n <= std::min(params.limits.max_n_exact_chi, params.limits.max_n_exact_astar)) {
    r.alpha = independence_number_exact(h, params.limits);
    r.alpha_star = bipartite_independence_number_exact(h, params.limits);
    r.precondition_checked = true;
    r.precondition_holds = *r.alpha < params.s && *r.alpha_star < params.s;
  }
  if (!r.precondition_holds) {
    r.degraded = true;
    r.notes.push_back("precondition alpha < s and alpha* < s fails (alpha = " + std::to_string(*r.alpha) +
                      ", alpha* = " + std::to_string(*r.alpha_star) + ", s = " + std::to_string(params.s) + ")");
    run_folklore(g, params, r);
    return r;
  }

  if (static_cast<double>(params.s) >= std::pow(static_cast<double>(n), params.s_threshold_exponent)) {
    run_folklore(g, params, r);
    return r;
  }

  r.kset_count = count_ksets(g, r.k, params);
  // Sampled counts decide on the upper end of their interval.
  const double log_count = r.kset_count->exact ? r.kset_count->log_count : r.kset_count->log_upper;
  const bool ok = log_count < r.log_kset_threshold ? run_few_ksets(g, params, r) : run_extract(g, params, r);
  if (!ok) {
    r.degraded = true;
    run_folklore(g, params, r);
  }
  return r;
}

}  // namespace dagchrom
