#include "dagchrom/coloring.hpp"

#include <algorithm>
#include <map>

namespace dagchrom {

std::optional<std::pair<Vertex, Vertex>> monochromatic_edge(const UndirectedGraph& h, const Coloring& c) {
  for (auto [u, v] : h.edges())
    if (c.color[u] == c.color[v]) return std::make_pair(u, v);
  return std::nullopt;
}

bool is_proper(const UndirectedGraph& h, const Coloring& c) {
  if (c.color.size() != h.num_vertices()) return false;
  std::vector<char> used(c.num_colors, 0);
  for (std::size_t col : c.color) {
    if (col >= c.num_colors) return false;
    used[col] = 1;
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) return false;
  return !monochromatic_edge(h, c);
}

bool is_proper(const Digraph& g, const Coloring& c) { return is_proper(underlying(g), c); }

Coloring normalize_coloring(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::size_t> renumber;
  Coloring c;
  c.color.reserve(labels.size());
  for (std::size_t label : labels) {
    auto [it, inserted] = renumber.try_emplace(label, renumber.size());
    c.color.push_back(it->second);
  }
  c.num_colors = renumber.size();
  return c;
}

}  // namespace dagchrom
