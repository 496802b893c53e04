#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dagchrom/digraph.hpp"

namespace dagchrom {

/// Vertex coloring of an (underlying) undirected graph.
struct Coloring {
  std::vector<std::size_t> color;
  std::size_t num_colors = 0;

  friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// Proper, colors in 0..num_colors-1, every color used.
bool is_proper(const UndirectedGraph& h, const Coloring& c);
bool is_proper(const Digraph& g, const Coloring& c);

/// First monochromatic edge, if any.
std::optional<std::pair<Vertex, Vertex>> monochromatic_edge(const UndirectedGraph& h, const Coloring& c);

/// Builds a Coloring from raw labels, renumbering them to 0..k-1 by first appearance.
Coloring normalize_coloring(const std::vector<std::size_t>& labels);

}  // namespace dagchrom
