#include "dagchrom/pathcover.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "dagchrom/errors.hpp"

namespace dagchrom {

bool is_valid_cover(const Digraph& g, const PathCover& cover) {
  std::vector<char> seen(g.num_vertices(), 0);
  std::size_t covered = 0;
  for (const auto& path : cover.paths) {
    if (path.empty()) return false;
    for (std::size_t i = 0; i < path.size(); ++i) {
      Vertex v = path[i];
      if (v >= g.num_vertices() || seen[v]) return false;
      seen[v] = 1;
      ++covered;
      if (i > 0 && !g.has_edge(path[i - 1], v)) return false;
    }
  }
  return covered == g.num_vertices();
}

namespace {

using Paths = std::vector<std::vector<Vertex>>;

class TerminalExchange {
 public:
  explicit TerminalExchange(const Digraph& g) : g_(g) {}

  // One path fewer with terminals a subset of the current ones, or nullopt with
  // `witness_` holding an independent set of size paths.size().
  std::optional<Paths> shrink(Paths paths) {
    const std::size_t p = paths.size();
    std::vector<std::pair<Vertex, std::size_t>> ends;  // (terminal, path index)
    ends.reserve(p);
    for (std::size_t i = 0; i < p; ++i) ends.emplace_back(paths[i].back(), i);
    std::sort(ends.begin(), ends.end());

    std::optional<std::pair<std::size_t, std::size_t>> arc;  // indices into ends
    for (std::size_t a = 0; a < p && !arc; ++a)
      for (std::size_t b = 0; b < p; ++b)
        if (a != b && g_.has_edge(ends[a].first, ends[b].first)) {
          arc = {a, b};
          break;
        }
    if (!arc) {
      witness_.clear();
      for (auto& e : ends) witness_.push_back(e.first);
      return std::nullopt;
    }

    const Vertex x = ends[arc->first].first;
    const Vertex y = ends[arc->second].first;
    const std::size_t px = ends[arc->first].second;
    const std::size_t py = ends[arc->second].second;

    if (paths[py].size() == 1) {
      paths[px].push_back(y);
      paths.erase(paths.begin() + static_cast<std::ptrdiff_t>(py));
      return paths;
    }

    // Drop y and recurse on G - y, where u (y's predecessor) becomes a terminal.
    paths[py].pop_back();
    const Vertex u = paths[py].back();
    auto smaller = shrink(std::move(paths));
    if (!smaller) return std::nullopt;

    // The recursive terminals miss exactly one of ter - y + u. If u survived, y
    // follows u; otherwise every old terminal but y survived, x among them.
    auto ends_at = [&](Vertex t) {
      return std::find_if(smaller->begin(), smaller->end(), [&](const auto& path) { return path.back() == t; });
    };
    auto it = ends_at(u);
    if (it == smaller->end()) it = ends_at(x);
    it->push_back(y);
    return smaller;
  }

  const std::vector<Vertex>& witness() const { return witness_; }

 private:
  const Digraph& g_;
  std::vector<Vertex> witness_;
};

}  // namespace

CertifiedPathCover gallai_milgram_cover_certified(const Digraph& g) {
  Paths paths;
  for (Vertex v = 0; v < g.num_vertices(); ++v) paths.push_back({v});
  TerminalExchange exchange(g);
  while (!paths.empty()) {
    auto next = exchange.shrink(paths);
    if (!next) break;
    paths = std::move(*next);
  }
  CertifiedPathCover out;
  out.cover.paths = std::move(paths);
  if (!out.cover.paths.empty()) out.independent_set = exchange.witness();
  std::sort(out.cover.paths.begin(), out.cover.paths.end());
  return out;
}

PathCover gallai_milgram_cover(const Digraph& g) { return gallai_milgram_cover_certified(g).cover; }

BigInt cover_factorial_product(const PathCover& cover) {
  BigInt product = 1;
  for (const auto& path : cover.paths)
    for (std::size_t i = 2; i <= path.size(); ++i) product *= i;
  return product;
}

bool convexity_bound_check(const PathCover& cover, std::size_t s) {
  if (s == 0 || cover.paths.size() > s)
    throw PreconditionError("convexity_bound_check: cover has more than s paths");
  std::size_t k = 0;
  double log_product = 0.0;
  for (const auto& path : cover.paths) {
    k += path.size();
    log_product += std::lgamma(static_cast<double>(path.size()) + 1.0);
  }
  if (k == 0) return true;
  // ln((k / (s e))^k) = -ln((s e / k)^k)
  return log_product >= -log_gallai_bound(k, s) - 1e-9;
}

}  // namespace dagchrom
