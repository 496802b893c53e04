#pragma once

#include <iosfwd>
#include <string>

#include "dagchrom/coloring.hpp"
#include "dagchrom/digraph.hpp"

namespace dagchrom {

// Digraph text format: first line "n m", then m lines "u v" (0-based).
// Blank lines are ignored. Orientation violations raise InvalidGraph with the
// offending line number in the message; malformed text raises ParseError.
Digraph read_digraph(std::istream& in);
Digraph read_digraph_file(const std::string& path);
/// Edges are emitted in lexicographic order.
void write_digraph(std::ostream& out, const Digraph& g);

// Permutation file: one line of n ranks, rank of vertex 0 first.
Permutation read_permutation(std::istream& in, std::size_t n);
void write_permutation(std::ostream& out, const Permutation& pi);

// Coloring file: one line of n color ids.
Coloring read_coloring(std::istream& in, std::size_t n);
void write_coloring(std::ostream& out, const Coloring& c);

std::string to_text(const Digraph& g);
std::string to_text(const Permutation& pi);
std::string to_text(const Coloring& c);

}  // namespace dagchrom
