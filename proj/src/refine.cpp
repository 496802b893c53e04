#include "dagchrom/refine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "dagchrom/almost_acyclic.hpp"
#include "dagchrom/errors.hpp"
#include "mask_graph.hpp"

namespace dagchrom {

BinInterval allowed_interval(const Digraph& g, std::span<const Vertex> walls, Vertex v) {
  const std::size_t i = walls.size();
  std::size_t last_in = 0, first_out = i + 1;  // wall indices, 1-based
  for (std::size_t j = 1; j <= i; ++j) {
    if (g.has_edge(walls[j - 1], v)) last_in = j;
    if (g.has_edge(v, walls[j - 1]) && first_out == i + 1) first_out = j;
  }
  if (last_in >= first_out) return {0, 0, true};
  return {last_in, first_out - 1, false};
}

BinInterval split_interval(const Digraph& g, const BinInterval& old, Vertex v, Vertex w, std::size_t bin) {
  if (old.empty) return old;
  std::size_t first = old.first <= bin ? old.first : old.first + 1;
  std::size_t last = old.last < bin ? old.last : old.last + 1;
  if (g.has_edge(w, v)) first = std::max(first, bin + 1);
  if (g.has_edge(v, w)) last = std::min(last, bin);
  if (first > last) return {0, 0, true};
  return {first, last, false};
}

bool incompatible_pair(const Digraph& g, Vertex x, const BinInterval& ix, Vertex y, const BinInterval& iy) {
  if (!g.has_edge(x, y) || ix.empty || iy.empty) return false;
  return ix.first > iy.last;
}

const char* to_string(RefinePhase phase) { return phase == RefinePhase::refine ? "refine" : "align"; }

bool RefineTrace::all_steps_ok() const {
  return std::all_of(steps.begin(), steps.end(), [](const RefineStep& st) { return st.all_ok(); });
}

std::string format_trace_log(const RefineTrace& trace) {
  std::ostringstream os;
  os << "# n=" << trace.n << " k=" << trace.k << " s=" << trace.s << " z=" << trace.refinement_steps
     << " N'0=" << trace.initial_hyperedges << "\n";
  for (const auto& clamp : trace.clamps) os << "# clamp: " << clamp << "\n";
  os << "# step phase N' |V'| w bin blacks\n";
  for (const auto& st : trace.steps)
    os << st.index << ' ' << to_string(st.phase) << ' ' << st.hyperedges << ' ' << st.candidates << ' ' << st.chosen
       << ' ' << st.bin << ' ' << st.blacks << "\n";
  os << "# t=" << trace.t << " k'=" << trace.k_prime << " |V_t|=" << trace.final_core.size()
     << " N_t=" << trace.final_core_hyperedges << "\n";
  return os.str();
}

std::string format_trace_csv(const RefineTrace& trace) {
  std::ostringstream os;
  os << "step,phase,candidates,core,hyperedges,core_hyperedges,core_min_degree,popular_bin,popular_balls,"
        "modal_group,incompatible,chosen,bin,width,degree,placed,next_hyperedges,new_blacks,blacks,"
        "min_degree_ok,recurrence_ok,chain_ok,widths_ok,black_bound_ok,state_ok,walls_ok\n";
  for (const auto& st : trace.steps)
    os << st.index << ',' << to_string(st.phase) << ',' << st.candidates << ',' << st.core << ',' << st.hyperedges
       << ',' << st.core_hyperedges << ',' << st.core_min_degree << ',' << st.popular_bin << ','
       << st.popular_balls << ',' << st.modal_group << ',' << st.incompatible << ',' << st.chosen << ','
       << st.bin << ',' << st.width << ',' << st.degree << ',' << st.placed << ',' << st.next_hyperedges << ','
       << st.new_blacks << ',' << st.blacks << ',' << st.min_degree_ok << ',' << st.recurrence_ok << ','
       << st.chain_ok << ',' << st.widths_ok << ',' << st.black_bound_ok << ',' << st.state_ok << ','
       << st.walls_ok << "\n";
  return os.str();
}

namespace {

std::vector<Vertex> insert_wall(std::span<const Vertex> walls, Vertex w, std::size_t bin) {
  std::vector<Vertex> out(walls.begin(), walls.begin() + static_cast<std::ptrdiff_t>(bin));
  out.push_back(w);
  out.insert(out.end(), walls.begin() + static_cast<std::ptrdiff_t>(bin), walls.end());
  return out;
}

std::vector<VertexMask> enumerate_hyperedges(const Digraph& g, VertexMask candidates, std::size_t size,
                                             std::span<const Vertex> walls) {
  std::vector<VertexMask> edges;
  detail::for_each_ksubset(candidates, size, [&](VertexMask s) {
    if (consistent_topo_exists(g, s, walls)) edges.push_back(s);
  });
  return edges;
}

struct Peeled {
  VertexMask core = 0;
  std::vector<VertexMask> edges;
  std::uint64_t min_degree = 0;
};

// Removes vertices of degree below total / |candidates| until none remain.
Peeled peel(const std::vector<VertexMask>& edges, VertexMask candidates, std::uint64_t total, std::size_t size) {
  Peeled out;
  out.core = candidates;
  out.edges = edges;
  std::array<std::uint64_t, kMaskVertices> degree{};
  while (true) {
    degree.fill(0);
    for (VertexMask e : out.edges)
      for (VertexMask m = e; m; m &= m - 1) ++degree[std::countr_zero(m)];
    VertexMask drop = 0;
    for (VertexMask m = out.core; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      if (degree[v] * size < total) drop |= bit(v);
    }
    if (!drop) break;
    out.core &= ~drop;
    std::erase_if(out.edges, [&](VertexMask e) { return (e & drop) != 0; });
  }
  out.min_degree = out.core ? ~std::uint64_t{0} : 0;
  for (VertexMask m = out.core; m; m &= m - 1) out.min_degree = std::min(out.min_degree, degree[std::countr_zero(m)]);
  return out;
}

std::size_t lowest_argmax(const std::vector<std::uint64_t>& values, std::size_t from, std::size_t to) {
  std::size_t best = from;
  for (std::size_t j = from; j <= to; ++j)
    if (values[j] > values[best]) best = j;
  return best;
}

void add_balls(std::vector<std::uint64_t>& balls, const BinInterval& iv, int sign) {
  if (iv.empty) return;
  for (std::size_t j = iv.first; j <= iv.last; ++j) balls[j] += static_cast<std::uint64_t>(sign);
}

class Extractor {
 public:
  Extractor(const Digraph& g, std::size_t k, std::size_t s, const OracleLimits& limits, const RefineOptions& options)
      : g_(g), n_(g.num_vertices()), k_(k), s_(s) {
    if (!g.fits_mask()) throw LimitExceeded("refine_align: more than 64 vertices");
    if (k == 0 || s == 0) throw PreconditionError("refine_align needs k >= 1 and s >= 1");
    if (n_ < k) throw PreconditionError("refine_align needs n >= k");
    detail::require_enumerable(n_, k, limits, "refine_align");

    auto& tr = result_.trace;
    tr.n = n_;
    tr.k = k;
    tr.s = s;
    const double ln_n = n_ >= 2 ? std::log(static_cast<double>(n_)) : 0.0;
    std::size_t z = ln_n > 0 ? std::max<std::size_t>(1, std::llround(static_cast<double>(k) / ln_n)) : 1;
    if (options.refinement_steps) z = *options.refinement_steps;
    tr.refinement_steps_unclamped = z;
    tr.refinement_steps = std::min(z, k - 1);
    if (tr.refinement_steps != z)
      tr.clamps.push_back("refinement steps " + std::to_string(z) + " -> " + std::to_string(tr.refinement_steps) +
                          " (hyperedges keep at least one vertex)");
    tr.epsilon = options.epsilon.value_or(ln_n > 0 ? std::min(1.0, ln_n * ln_n / static_cast<double>(k)) : 1.0);
    if (!options.epsilon && ln_n > 0 && ln_n * ln_n / static_cast<double>(k) > 1.0)
      tr.clamps.push_back("epsilon clamped to 1");

    allowed_.assign(n_, BinInterval{});
    black_.assign(n_, 0);
    candidates_ = full_mask(n_);
    hyper_ = enumerate_hyperedges(g_, candidates_, k, walls_);
    tr.initial_hyperedges = hyper_.size();
    if (hyper_.empty()) throw PreconditionError("refine_align: the graph has no acyclic k-set");
    balls_.assign(1, 0);
    for (Vertex v = 0; v < n_; ++v) add_balls(balls_, allowed_[v], +1);
  }

  RefineResult run() {
    auto& tr = result_.trace;
    for (std::size_t i = 0;; ++i) {
      const std::uint64_t n_prime = hyper_.size();
      const std::size_t v_prime = std::popcount(candidates_);
      Peeled peeled = peel(hyper_, candidates_, n_prime, v_prime);
      for (VertexMask m = candidates_ & ~peeled.core; m; m &= m - 1) {
        Vertex v = std::countr_zero(m);
        if (!black_[v]) add_balls(balls_, allowed_[v], -1);
      }
      core_ = peeled.core;
      core_edges_ = std::move(peeled.edges);

      if (i + 1 >= k_) return finish(i, "");

      RefineStep st;
      st.index = i;
      st.candidates = v_prime;
      st.core = std::popcount(core_);
      st.hyperedges = n_prime;
      st.core_hyperedges = core_edges_.size();
      st.core_min_degree = peeled.min_degree;
      st.min_degree_ok = core_ != 0 && peeled.min_degree * v_prime >= n_prime;
      st.state_ok = state_matches();

      std::optional<std::pair<Vertex, std::size_t>> choice;
      if (i < tr.refinement_steps) {
        st.phase = RefinePhase::refine;
        choice = choose_refinement(st);
        if (!choice) return dead_end(i, st, dead_end_reason_);
      } else {
        st.phase = RefinePhase::align;
        choice = choose_alignment(st);
        if (!choice) return finish(i, "");
      }
      if (!apply(i, st, choice->first, choice->second)) return dead_end(i + 1, st, "no hyperedge survives the split");
    }
  }

 private:
  std::vector<std::uint64_t> placements(Vertex v) const {
    std::vector<std::uint64_t> count(walls_.size() + 1, 0);
    const BinInterval& iv = allowed_[v];
    if (iv.empty) return count;
    std::vector<std::vector<Vertex>> inserted;
    for (std::size_t b = iv.first; b <= iv.last; ++b) inserted.push_back(insert_wall(walls_, v, b));
    for (VertexMask e : core_edges_) {
      if (!(e & bit(v))) continue;
      const VertexMask rest = e & ~bit(v);
      for (std::size_t b = iv.first; b <= iv.last; ++b)
        count[b] += consistent_topo_exists(g_, rest, inserted[b - iv.first]);
    }
    return count;
  }

  std::size_t preferred_bin(Vertex v) const {
    return lowest_argmax(placements(v), allowed_[v].first, allowed_[v].last);
  }

  bool state_matches() const {
    std::vector<std::uint64_t> fresh(walls_.size() + 1, 0);
    for (VertexMask m = core_; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      if (!(allowed_[v] == allowed_interval(g_, walls_, v))) return false;
      if (!black_[v]) add_balls(fresh, allowed_[v], +1);
    }
    return fresh == balls_;
  }

  std::optional<std::pair<Vertex, std::size_t>> choose_refinement(RefineStep& st) {
    const std::size_t popular = lowest_argmax(balls_, 0, walls_.size());
    st.popular_bin = popular;
    st.popular_balls = balls_[popular];
    if (balls_[popular] == 0) {
      dead_end_reason_ = "no white vertex left in V_i";
      return std::nullopt;
    }
    std::map<std::size_t, std::vector<Vertex>> by_bin;  // p_{i,v} -> vertices of X_{i,p_i}
    for (VertexMask m = core_; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      if (!black_[v] && allowed_[v].contains(popular)) by_bin[preferred_bin(v)].push_back(v);
    }
    auto modal = by_bin.begin();
    for (auto it = by_bin.begin(); it != by_bin.end(); ++it)
      if (it->second.size() > modal->second.size()) modal = it;
    const std::vector<Vertex>& group = modal->second;
    st.modal_group = group.size();
    InducedSubgraph sub = induced_subgraph(g_, group);
    auto local = high_inout_vertex(sub.graph, s_);
    if (!local) {
      dead_end_reason_ = "no vertex of G[Y] clears |Y|/4s - 1/2 in both degrees";
      return std::nullopt;
    }
    return std::make_pair(sub.to_parent[*local], modal->first);
  }

  std::optional<std::pair<Vertex, std::size_t>> choose_alignment(RefineStep& st) {
    const double need = result_.trace.epsilon * static_cast<double>(std::popcount(core_));
    std::optional<Vertex> pick;
    std::size_t best = 0;
    for (VertexMask m = core_; m; m &= m - 1) {
      Vertex w = std::countr_zero(m);
      if (black_[w]) continue;
      const std::size_t count = std::popcount(incompatible_with(w));
      if (static_cast<double>(count) + 1e-9 >= need && (!pick || count > best)) {
        pick = w;
        best = count;
      }
    }
    if (!pick) return std::nullopt;
    st.incompatible = best;
    return std::make_pair(*pick, preferred_bin(*pick));
  }

  VertexMask incompatible_with(Vertex w) const {
    VertexMask out = 0;
    for (VertexMask m = core_ & ~bit(w); m; m &= m - 1) {
      Vertex x = std::countr_zero(m);
      if (incompatible_pair(g_, w, allowed_[w], x, allowed_[x]) || incompatible_pair(g_, x, allowed_[x], w, allowed_[w]))
        out |= bit(x);
    }
    return out;
  }

  bool apply(std::size_t i, RefineStep& st, Vertex w, std::size_t bin) {
    const std::size_t two_s = 2 * s_;
    const auto counts = placements(w);
    st.chosen = w;
    st.bin = bin;
    st.width = allowed_[w].width();
    st.placed = counts[bin];
    st.degree = std::count_if(core_edges_.begin(), core_edges_.end(), [&](VertexMask e) { return (e & bit(w)) != 0; });
    const VertexMask incompatible = incompatible_with(w);
    if (st.phase == RefinePhase::refine) st.incompatible = std::popcount(incompatible);
    const VertexMask next = core_ & ~bit(w) & ~incompatible;

    // Ball counts: split bin `bin`, then correct every vertex whose interval is
    // not the plain shifted one or that leaves the white candidate set.
    std::vector<std::uint64_t> balls(balls_.size() + 1, 0);
    for (std::size_t j = 0; j < balls_.size(); ++j) {
      if (j <= bin) balls[j] += balls_[j];
      if (j >= bin) balls[j + 1] += balls_[j];
    }
    std::vector<Vertex> problematic;
    for (Vertex v = 0; v < n_; ++v) {
      if (std::find(walls_.begin(), walls_.end(), v) != walls_.end()) continue;
      const BinInterval old = allowed_[v];
      BinInterval shifted = old;
      if (!old.empty) {
        shifted.first = old.first <= bin ? old.first : old.first + 1;
        shifted.last = old.last < bin ? old.last : old.last + 1;
      }
      const BinInterval updated = v == w ? BinInterval{0, 0, true} : split_interval(g_, old, v, w, bin);
      allowed_[v] = updated;
      if (!(core_ & bit(v)) || black_[v]) continue;
      const bool stays = (next & bit(v)) != 0;
      const bool blackened = stays && updated.width() > two_s;
      if (blackened) {
        black_[v] = 1;
        problematic.push_back(v);
      }
      if (!stays || blackened) {
        add_balls(balls, shifted, -1);
      } else if (!(updated == shifted)) {
        add_balls(balls, shifted, -1);
        add_balls(balls, updated, +1);
      }
    }
    balls_ = std::move(balls);
    blacks_ += problematic.size();
    walls_ = insert_wall(walls_, w, bin);
    candidates_ = next;
    hyper_ = enumerate_hyperedges(g_, candidates_, k_ - i - 1, walls_);

    st.next_hyperedges = hyper_.size();
    st.new_blacks = problematic.size();
    st.blacks = blacks_;
    st.recurrence_ok = st.next_hyperedges * two_s * st.candidates >= st.hyperedges;
    st.chain_ok = st.width >= 1 && st.width <= two_s && st.next_hyperedges >= st.placed &&
                  st.placed * st.width >= st.degree;
    st.widths_ok = true;
    for (VertexMask m = candidates_; m; m &= m - 1) {
      Vertex v = std::countr_zero(m);
      if (!black_[v] && allowed_[v].width() > two_s) st.widths_ok = false;
    }
    st.black_bound_ok = blacks_ <= two_s * (i + 1);
    st.walls_ok = is_ordered_acyclic(g_, walls_);
    if (problematic.size() >= two_s && !result_.trace.witness) record_witness(i, problematic, w, bin);
    result_.trace.steps.push_back(st);
    return !hyper_.empty();
  }

  // At least s problematic vertices share a side of the new wall, where each has
  // s or more allowed bins; none of them is adjacent to the s walls nearest the
  // new one on that side, the new wall included.
  void record_witness(std::size_t i, const std::vector<Vertex>& problematic, Vertex w, std::size_t bin) {
    std::vector<Vertex> left, right;
    for (Vertex v : problematic) {
      const BinInterval& iv = allowed_[v];  // after the split: w is wall bin+1
      if (bin + 1 - iv.first >= s_ + 1) left.push_back(v);
      else right.push_back(v);
    }
    BlackeningWitness wit;
    wit.step = i;
    const bool use_left = left.size() >= s_;
    const auto& side = use_left ? left : right;
    wit.vertices.assign(side.begin(), side.begin() + static_cast<std::ptrdiff_t>(std::min(side.size(), s_)));
    // walls_ already includes w at index bin.
    for (std::size_t d = 0; d < s_; ++d) {
      if (use_left && d <= bin) wit.walls.push_back(walls_[bin - d]);
      if (!use_left && bin + d < walls_.size()) wit.walls.push_back(walls_[bin + d]);
    }
    wit.verified = wit.vertices.size() == s_ && wit.walls.size() == s_ && wit.walls.front() == w;
    for (Vertex a : wit.vertices)
      for (Vertex b : wit.walls)
        if (a == b || g_.adjacent(a, b)) wit.verified = false;
    result_.trace.witness = std::move(wit);
  }

  void fill_outputs() {
    auto& tr = result_.trace;
    tr.final_core = mask_vertices(core_);
    tr.final_walls = walls_;
    tr.final_core_hyperedges = core_edges_.size();
    tr.final_blacks.clear();
    std::vector<Vertex> whites;
    for (Vertex v : tr.final_core) (black_[v] ? tr.final_blacks : whites).push_back(v);
    result_.extracted = induced_subgraph(g_, tr.final_core);
    result_.white_part = induced_subgraph(g_, whites);
    std::vector<Vertex> local(whites.size());
    for (std::size_t j = 0; j < local.size(); ++j) local[j] = j;
    std::stable_sort(local.begin(), local.end(),
                     [&](Vertex a, Vertex b) { return allowed_[whites[a]].first < allowed_[whites[b]].first; });
    result_.order = Permutation::from_order(local);
    result_.measured_q = max_against_degree(result_.white_part.graph, result_.order);
  }

  RefineResult finish(std::size_t t, const std::string& reason) {
    result_.trace.t = t;
    result_.trace.k_prime = k_ - t;
    result_.status = RefineStatus::complete;
    result_.reason = reason;
    fill_outputs();
    return std::move(result_);
  }

  RefineResult dead_end(std::size_t t, const RefineStep& st, const std::string& reason) {
    if (result_.trace.steps.empty() || result_.trace.steps.back().index != st.index) result_.trace.steps.push_back(st);
    result_.trace.t = t;
    result_.trace.k_prime = k_ - t;
    result_.status = RefineStatus::dead_end;
    result_.reason = reason;
    fill_outputs();
    return std::move(result_);
  }

  const Digraph& g_;
  const std::size_t n_, k_, s_;
  RefineResult result_;
  std::vector<Vertex> walls_;
  std::vector<BinInterval> allowed_;
  std::vector<char> black_;
  std::size_t blacks_ = 0;
  VertexMask candidates_ = 0;  // V'_i
  VertexMask core_ = 0;        // V_i
  std::vector<VertexMask> hyper_;       // H'_i
  std::vector<VertexMask> core_edges_;  // H_i
  std::vector<std::uint64_t> balls_;    // X_{i,j} over white vertices of the current set
  std::string dead_end_reason_;
};

}  // namespace

RefineResult refine_align(const Digraph& g, std::size_t k, std::size_t s, const OracleLimits& limits,
                          const RefineOptions& options) {
  return Extractor(g, k, s, limits, options).run();
}

ReduceResult iterate_reduce(const Digraph& g, std::size_t k, std::size_t s, const OracleLimits& limits,
                            const RefineOptions& options) {
  const std::size_t n = g.num_vertices();
  if (n < k) throw PreconditionError("iterate_reduce needs n >= k");
  ReduceResult out;
  const double ln_n = n >= 2 ? std::log(static_cast<double>(n)) : 0.0;
  out.rounds_planned = std::max<std::size_t>(1, std::llround(std::sqrt(ln_n)));

  Digraph current = g;
  std::vector<Vertex> to_input(n);
  for (Vertex v = 0; v < n; ++v) to_input[v] = v;
  std::size_t k_cur = k;

  for (std::size_t round = 0; round < out.rounds_planned; ++round) {
    if (round > 0) {
      if (k_cur < 2) {
        out.reason = "stopped: k' < 2";
        break;
      }
      if (current.num_vertices() < k_cur || count_acyclic_ksets(current, k_cur, limits) == 0) {
        out.reason = "stopped: no acyclic k'-set left";
        break;
      }
    }
    RefineResult res = refine_align(current, k_cur, s, limits, options);
    out.ks.push_back(k_cur);
    out.traces.push_back(res.trace);
    if (res.status == RefineStatus::dead_end) {
      if (round == 0) {
        out.status = RefineStatus::dead_end;
        out.reason = res.reason;
        std::vector<Vertex> ids;
        for (Vertex v : res.white_part.to_parent) ids.push_back(to_input[v]);
        out.graph = {res.white_part.graph, ids};
        out.order = res.order;
        out.measured_q = res.measured_q;
      } else {
        out.reason = "stopped after dead end in round " + std::to_string(round) + ": " + res.reason;
      }
      return out;
    }
    std::vector<Vertex> ids;
    for (Vertex v : res.white_part.to_parent) ids.push_back(to_input[v]);
    out.graph = {res.white_part.graph, ids};
    out.order = res.order;
    out.measured_q = res.measured_q;
    current = res.white_part.graph;
    to_input = ids;
    k_cur = res.trace.k_prime;
  }
  return out;
}

}  // namespace dagchrom
