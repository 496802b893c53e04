#include "dagchrom/oracles.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dagchrom/errors.hpp"
#include "dagchrom/rng.hpp"
#include "mask_graph.hpp"

namespace dagchrom {

void validate(const OracleLimits& limits) {
  if (limits.max_n_exact_chi == 0 || limits.max_n_exact_fG == 0 || limits.max_n_exact_astar == 0 ||
      limits.max_perm_enum == 0 || limits.max_subset_enum == 0)
    throw PreconditionError("oracle limits must all be positive");
}

namespace {

void require_size(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit || n > kMaskVertices)
    throw LimitExceeded(std::string(what) + ": n = " + std::to_string(n) + " exceeds the exact-oracle limit " +
                        std::to_string(std::min(limit, kMaskVertices)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Mask-level kernels shared with the other modules.

namespace detail {

MaskGraph to_masks(const UndirectedGraph& h) {
  MaskGraph g;
  g.n = h.num_vertices();
  for (Vertex v = 0; v < g.n; ++v) g.nbr[v] = h.neighbor_mask(v);
  return g;
}

MaskGraph to_masks(const Digraph& d) {
  MaskGraph g;
  g.n = d.num_vertices();
  for (Vertex v = 0; v < g.n; ++v) g.nbr[v] = d.neighbor_mask(v);
  return g;
}

std::size_t clique_lower_bound(const MaskGraph& g) {
  VertexMask cand = full_mask(g.n);
  std::size_t size = 0;
  while (cand) {
    Vertex pick = 0;
    int best = -1;
    for (VertexMask m = cand; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      int d = std::popcount(g.nbr[v] & cand);
      if (d > best) best = d, pick = v;
    }
    ++size;
    cand &= g.nbr[pick];
  }
  return size;
}

namespace {

// DSATUR branch and bound. The first descent is plain greedy DSATUR.
class DsaturSearch {
 public:
  explicit DsaturSearch(const MaskGraph& g) : g_(g) {}

  // Looks for colorings using fewer than `limit` colors and stops at the first one
  // using at most `target`. Returns whether any coloring below `limit` was found.
  bool run(std::size_t limit, std::size_t target) {
    best_ = limit;
    target_ = target;
    found_ = false;
    classes_.fill(0);
    color_.fill(0);
    uncolored_ = full_mask(g_.n);
    search(0);
    return found_;
  }

  std::size_t best() const { return best_; }
  Coloring coloring() const {
    Coloring c;
    c.color.assign(best_color_.begin(), best_color_.begin() + g_.n);
    c.num_colors = best_;
    return c;
  }

 private:
  // True means stop the whole search.
  bool search(std::size_t used) {
    if (used >= best_) return false;
    if (!uncolored_) {
      best_ = used;
      best_color_ = color_;
      found_ = true;
      return used <= target_;
    }
    Vertex pick = 0;
    int best_sat = -1, best_deg = -1;
    for (VertexMask m = uncolored_; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      int sat = 0;
      for (std::size_t c = 0; c < used; ++c) sat += (classes_[c] & g_.nbr[v]) != 0;
      int deg = std::popcount(g_.nbr[v] & uncolored_);
      if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
        best_sat = sat;
        best_deg = deg;
        pick = v;
      }
    }
    uncolored_ &= ~bit(pick);
    for (std::size_t c = 0; c < used; ++c) {
      if (classes_[c] & g_.nbr[pick]) continue;
      classes_[c] |= bit(pick);
      color_[pick] = static_cast<std::uint8_t>(c);
      bool stop = search(used);
      classes_[c] &= ~bit(pick);
      if (stop) return true;
    }
    if (used + 1 < best_) {
      classes_[used] = bit(pick);
      color_[pick] = static_cast<std::uint8_t>(used);
      bool stop = search(used + 1);
      classes_[used] = 0;
      if (stop) return true;
    }
    uncolored_ |= bit(pick);
    return false;
  }

  const MaskGraph& g_;
  std::size_t best_ = 0;
  std::size_t target_ = 0;
  bool found_ = false;
  VertexMask uncolored_ = 0;
  std::array<VertexMask, kMaskVertices> classes_{};
  std::array<std::uint8_t, kMaskVertices> color_{};
  std::array<std::uint8_t, kMaskVertices> best_color_{};
};

}  // namespace

std::pair<std::size_t, Coloring> chromatic_exact(const MaskGraph& g) {
  if (g.n == 0) return {0, Coloring{}};
  DsaturSearch search(g);
  search.run(g.n + 1, clique_lower_bound(g));
  return {search.best(), search.coloring()};
}

bool k_colorable(const MaskGraph& g, std::size_t k) {
  if (k >= g.n) return true;
  if (k == 0) return false;
  if (clique_lower_bound(g) > k) return false;
  DsaturSearch search(g);
  return search.run(k + 1, k);
}

namespace {

class AlphaSearch {
 public:
  explicit AlphaSearch(const MaskGraph& g) : g_(g) {}

  std::size_t run() {
    best_ = 0;
    search(full_mask(g_.n), 0);
    return best_;
  }

 private:
  void search(VertexMask p, std::size_t taken) {
    // Vertices of degree <= 1 inside p can always be taken.
    while (p) {
      Vertex low = 0;
      int low_deg = std::numeric_limits<int>::max();
      for (VertexMask m = p; m; m &= m - 1) {
        Vertex v = std::countr_zero(m);
        int d = std::popcount(g_.nbr[v] & p);
        if (d < low_deg) low_deg = d, low = v;
        if (d <= 1) break;
      }
      if (low_deg > 1) break;
      ++taken;
      p &= ~(bit(low) | g_.nbr[low]);
    }
    if (!p) {
      best_ = std::max(best_, taken);
      return;
    }
    if (taken + static_cast<std::size_t>(std::popcount(p)) <= best_) return;
    Vertex high = 0;
    int high_deg = -1;
    for (VertexMask m = p; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      int d = std::popcount(g_.nbr[v] & p);
      if (d > high_deg) high_deg = d, high = v;
    }
    search(p & ~(bit(high) | g_.nbr[high]), taken + 1);
    search(p & ~bit(high), taken);
  }

  const MaskGraph& g_;
  std::size_t best_ = 0;
};

}  // namespace

std::size_t alpha_exact(const MaskGraph& g) { return AlphaSearch(g).run(); }

std::size_t longest_forward_path(const Digraph& d, const std::vector<Vertex>& order,
                                 const std::vector<std::size_t>& pos) {
  std::array<std::size_t, kMaskVertices> len{};
  std::size_t best = 0;
  for (Vertex v : order) {
    std::size_t l = 1;
    for (Vertex u : d.in_neighbors(v))
      if (pos[u] < pos[v]) l = std::max(l, len[u] + 1);
    len[v] = l;
    best = std::max(best, l);
  }
  return best;
}

}  // namespace detail

using detail::MaskGraph;

// ---------------------------------------------------------------------------

ChromaticResult chromatic_number_exact(const UndirectedGraph& h, const OracleLimits& limits) {
  require_size(h.num_vertices(), limits.max_n_exact_chi, "chromatic_number_exact");
  auto [chi, coloring] = detail::chromatic_exact(detail::to_masks(h));
  return {chi, std::move(coloring)};
}

bool is_k_colorable(const UndirectedGraph& h, std::size_t k, const OracleLimits& limits) {
  require_size(h.num_vertices(), limits.max_n_exact_chi, "is_k_colorable");
  return detail::k_colorable(detail::to_masks(h), k);
}

Coloring greedy_coloring(const UndirectedGraph& h, ColorOrder policy) {
  const std::size_t n = h.num_vertices();
  Coloring c;
  c.color.assign(n, 0);
  if (n == 0) return c;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> color(n, kNone);
  std::vector<char> forbidden(n + 1, 0);

  auto smallest_free = [&](Vertex v) {
    for (Vertex u : h.neighbors(v))
      if (color[u] != kNone) forbidden[color[u]] = 1;
    std::size_t k = 0;
    while (forbidden[k]) ++k;
    for (Vertex u : h.neighbors(v))
      if (color[u] != kNone) forbidden[color[u]] = 0;
    return k;
  };

  if (policy == ColorOrder::dsatur) {
    // seen[v * (n+1) + c]: neighbor of v already holds color c.
    std::vector<char> seen(n * (n + 1), 0);
    std::vector<std::size_t> sat(n, 0), free_deg(n);
    for (Vertex v = 0; v < n; ++v) free_deg[v] = h.degree(v);
    for (std::size_t step = 0; step < n; ++step) {
      Vertex pick = kNone;
      for (Vertex v = 0; v < n; ++v) {
        if (color[v] != kNone) continue;
        if (pick == kNone || sat[v] > sat[pick] || (sat[v] == sat[pick] && free_deg[v] > free_deg[pick])) pick = v;
      }
      std::size_t k = smallest_free(pick);
      color[pick] = k;
      for (Vertex u : h.neighbors(pick)) {
        --free_deg[u];
        if (!seen[u * (n + 1) + k]) {
          seen[u * (n + 1) + k] = 1;
          ++sat[u];
        }
      }
    }
  } else {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    if (policy == ColorOrder::largest_first) {
      std::stable_sort(order.begin(), order.end(),
                       [&](Vertex a, Vertex b) { return h.degree(a) > h.degree(b); });
    } else if (policy == ColorOrder::smallest_last) {
      std::vector<std::size_t> deg(n);
      std::vector<char> removed(n, 0);
      for (Vertex v = 0; v < n; ++v) deg[v] = h.degree(v);
      std::vector<Vertex> removal;
      for (std::size_t step = 0; step < n; ++step) {
        Vertex pick = kNone;
        for (Vertex v = 0; v < n; ++v)
          if (!removed[v] && (pick == kNone || deg[v] < deg[pick])) pick = v;
        removed[pick] = 1;
        removal.push_back(pick);
        for (Vertex u : h.neighbors(pick))
          if (!removed[u]) --deg[u];
      }
      order.assign(removal.rbegin(), removal.rend());
    }
    for (Vertex v : order) color[v] = smallest_free(v);
  }
  return normalize_coloring(color);
}

std::vector<Vertex> greedy_clique(const UndirectedGraph& h) {
  const std::size_t n = h.num_vertices();
  std::vector<char> cand(n, 1);
  std::vector<Vertex> clique;
  while (true) {
    Vertex pick = n;
    std::size_t best = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (!cand[v]) continue;
      std::size_t d = 0;
      for (Vertex u : h.neighbors(v)) d += cand[u];
      if (pick == n || d > best) best = d, pick = v;
    }
    if (pick == n) break;
    clique.push_back(pick);
    std::vector<char> next(n, 0);
    for (Vertex u : h.neighbors(pick)) next[u] = cand[u];
    cand.swap(next);
  }
  return clique;
}

std::size_t independence_number_exact(const UndirectedGraph& h, const OracleLimits& limits) {
  require_size(h.num_vertices(), limits.max_n_exact_chi, "independence_number_exact");
  return detail::alpha_exact(detail::to_masks(h));
}

std::size_t bipartite_independence_number_exact(const UndirectedGraph& h, const OracleLimits& limits) {
  const std::size_t n = h.num_vertices();
  require_size(n, limits.max_n_exact_astar, "bipartite_independence_number_exact");
  if (n > 30) throw LimitExceeded("bipartite_independence_number_exact: subset scan needs n <= 30");
  const MaskGraph g = detail::to_masks(h);
  // alpha* = max over A of min(|A|, |V \ (A ∪ N(A))|); a best B is any subset of
  // the non-neighbors of A.
  std::size_t best = 0;
  const VertexMask all = full_mask(n);
  for (VertexMask a = 1; a <= all && a != 0; ++a) {
    const std::size_t size_a = std::popcount(a);
    if (size_a <= best || 2 * size_a > n) continue;
    VertexMask closed = a;
    for (VertexMask m = a; m; m &= m - 1) closed |= g.nbr[std::countr_zero(m)];
    const std::size_t room = n - std::popcount(closed);
    best = std::max(best, std::min(size_a, room));
    if (best == n / 2) break;
  }
  return best;
}

Measured independence_upper_bound(const UndirectedGraph& h, const OracleLimits& limits) {
  if (h.num_vertices() <= std::min(limits.max_n_exact_chi, kMaskVertices))
    return {independence_number_exact(h, limits), true};
  return {greedy_coloring(complement(h), ColorOrder::dsatur).num_colors, false};
}

ChromaticBounds chromatic_bounds(const UndirectedGraph& h, const OracleLimits& limits) {
  ChromaticBounds b;
  const std::size_t n = h.num_vertices();
  if (n <= std::min(limits.max_n_exact_chi, kMaskVertices)) {
    auto exact = chromatic_number_exact(h, limits);
    b.lower = b.upper = exact.chi;
    b.exact = true;
    b.coloring = std::move(exact.witness);
    return b;
  }
  b.coloring = greedy_coloring(h, ColorOrder::dsatur);
  b.upper = b.coloring.num_colors;
  const Measured alpha = independence_upper_bound(h, limits);
  b.lower = std::max<std::size_t>(greedy_clique(h).size(), alpha.value ? (n + alpha.value - 1) / alpha.value : 0);
  return b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace detail {

void require_enumerable(std::size_t n, std::size_t k, const OracleLimits& limits, const char* what) {
  if (n > kMaskVertices) throw LimitExceeded(std::string(what) + ": more than 64 vertices");
  if (binomial(n, k) > limits.max_subset_enum)
    throw LimitExceeded(std::string(what) + ": C(" + std::to_string(n) + "," + std::to_string(k) +
                        ") exceeds max_subset_enum");
}

}  // namespace detail

std::uint64_t count_acyclic_ksets(const Digraph& g, std::size_t k, const OracleLimits& limits) {
  detail::require_enumerable(g.num_vertices(), k, limits, "count_acyclic_ksets");
  std::uint64_t count = 0;
  detail::for_each_ksubset(full_mask(g.num_vertices()), k, [&](VertexMask s) { count += is_acyclic_mask(g, s); });
  return count;
}

std::uint64_t count_independent_ksets(const UndirectedGraph& h, std::size_t k, const OracleLimits& limits) {
  detail::require_enumerable(h.num_vertices(), k, limits, "count_independent_ksets");
  const MaskGraph g = detail::to_masks(h);
  std::uint64_t count = 0;
  detail::for_each_ksubset(full_mask(g.n), k, [&](VertexMask s) {
    for (VertexMask m = s; m; m &= m - 1)
      if (g.nbr[std::countr_zero(m)] & s) return;
    ++count;
  });
  return count;
}

FResult f_exact(const Digraph& g, const OracleLimits& limits) {
  const std::size_t n = g.num_vertices();
  require_size(n, limits.max_n_exact_fG, "f_exact");
  FResult result;
  result.witness = Permutation::identity(n);
  if (n == 0) return result;

  // f(G) <= chi(G); stop as soon as that is reached.
  const std::size_t ceiling = detail::chromatic_exact(detail::to_masks(g)).first;

  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::vector<std::size_t> pos(n);
  MaskGraph fwd;
  fwd.n = n;
  do {
    for (std::size_t r = 0; r < n; ++r) pos[order[r]] = r;
    if (detail::longest_forward_path(g, order, pos) <= result.f) continue;
    std::fill(fwd.nbr.begin(), fwd.nbr.begin() + n, 0);
    for (const Edge& e : g.edges())
      if (pos[e.from] < pos[e.to]) {
        fwd.nbr[e.from] |= bit(e.to);
        fwd.nbr[e.to] |= bit(e.from);
      }
    if (result.f > 0 && detail::k_colorable(fwd, result.f)) continue;
    auto [chi, coloring] = detail::chromatic_exact(fwd);
    result.f = chi;
    result.witness = Permutation::from_order(order);
    result.coloring = std::move(coloring);
    if (result.f >= ceiling) break;
  } while (std::next_permutation(order.begin(), order.end()));
  return result;
}

Rational edgeless_probability_exact(const Digraph& g, const OracleLimits& limits) {
  const std::size_t n = g.num_vertices();
  require_size(n, limits.max_perm_enum, "edgeless_probability_exact");
  // ways[mask]: orderings of `mask` that are prefixes of a topological order of g.
  // G_pi is edgeless exactly when pi lists g's vertices in reverse topological
  // order, and reversal is a bijection on orders.
  std::vector<BigInt> ways(std::size_t{1} << n);
  ways[0] = 1;
  for (VertexMask mask = 0; mask < ways.size(); ++mask) {
    if (ways[mask] == 0) continue;
    for (Vertex v = 0; v < n; ++v)
      if (!(mask & bit(v)) && (g.in_mask(v) & ~mask) == 0) ways[mask | bit(v)] += ways[mask];
  }
  BigInt factorial = 1;
  for (std::size_t i = 2; i <= n; ++i) factorial *= i;
  return Rational(ways.back(), factorial);
}

Estimate edgeless_probability_mc(const Digraph& g, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw PreconditionError("edgeless_probability_mc needs at least one trial");
  const std::size_t n = g.num_vertices();
  Rng rng(seed);
  std::vector<Vertex> order(n);
  std::vector<std::size_t> pos(n);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(order.begin(), order.end(), Vertex{0});
    rng.shuffle(order.begin(), order.end());
    for (std::size_t r = 0; r < n; ++r) pos[order[r]] = r;
    bool edgeless = std::all_of(g.edges().begin(), g.edges().end(),
                                [&](const Edge& e) { return pos[e.from] > pos[e.to]; });
    hits += edgeless;
  }
  Estimate est;
  est.trials = trials;
  est.mean = static_cast<double>(hits) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
  return est;
}

double log_gallai_bound(std::size_t k, std::size_t s) {
  if (k == 0 || s == 0) throw PreconditionError("gallai bound needs k >= 1 and s >= 1");
  const double kd = static_cast<double>(k);
  return kd * (std::log(static_cast<double>(s)) + 1.0 - std::log(kd));
}

double gallai_bound_value(std::size_t k, std::size_t s) { return std::exp(log_gallai_bound(k, s)); }

}  // namespace dagchrom
