#include "dagchrom/digraph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "dagchrom/errors.hpp"

namespace dagchrom {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line, split into unsigned integers.
  bool next(std::vector<std::size_t>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      fields.clear();
      std::string_view rest(line);
      bool any = false;
      while (true) {
        auto start = rest.find_first_not_of(" \t\r");
        if (start == std::string_view::npos) break;
        rest.remove_prefix(start);
        auto stop = std::min(rest.find_first_of(" \t\r"), rest.size());
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + stop, value);
        if (ec != std::errc() || ptr != rest.data() + stop)
          throw ParseError(line_no_, "expected a non-negative integer, got '" + std::string(rest.substr(0, stop)) + "'");
        fields.push_back(value);
        rest.remove_prefix(stop);
        any = true;
      }
      if (any) return true;
    }
    return false;
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::vector<std::size_t> read_single_line(std::istream& in, std::size_t n, const char* what) {
  LineReader reader(in);
  std::vector<std::size_t> fields;
  if (!reader.next(fields)) {
    if (n == 0) return {};
    throw ParseError(reader.line() + 1, std::string("missing ") + what + " line");
  }
  if (fields.size() != n)
    throw ParseError(reader.line(), std::string(what) + " has " + std::to_string(fields.size()) +
                                        " entries, expected " + std::to_string(n));
  std::vector<std::size_t> extra;
  if (reader.next(extra)) throw ParseError(reader.line(), std::string("unexpected content after ") + what);
  return fields;
}

}  // namespace

Digraph read_digraph(std::istream& in) {
  LineReader reader(in);
  std::vector<std::size_t> fields;
  if (!reader.next(fields)) throw ParseError(1, "missing header line 'n m'");
  if (fields.size() != 2) throw ParseError(reader.line(), "header must be 'n m'");
  const std::size_t n = fields[0], m = fields[1];
  std::vector<Edge> edges;
  edges.reserve(m);
  std::vector<std::size_t> lines;
  for (std::size_t i = 0; i < m; ++i) {
    if (!reader.next(fields)) throw ParseError(reader.line() + 1, "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    if (fields.size() != 2) throw ParseError(reader.line(), "edge line must be 'u v'");
    edges.push_back({fields[0], fields[1]});
    lines.push_back(reader.line());
  }
  if (reader.next(fields)) throw ParseError(reader.line(), "more edge lines than declared");

  // Validate edge by edge so the message can carry a line number.
  std::vector<std::pair<Edge, std::size_t>> seen;
  seen.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Edge& e = edges[i];
    const std::string where = "line " + std::to_string(lines[i]) + ": ";
    if (e.from >= n || e.to >= n) throw InvalidGraph(where + "endpoint out of range");
    if (e.from == e.to) throw InvalidGraph(where + "self-loop at vertex " + std::to_string(e.from));
    seen.emplace_back(e, lines[i]);
  }
  std::vector<std::pair<Edge, std::size_t>> keyed;
  for (auto& [e, line] : seen) keyed.push_back({{std::min(e.from, e.to), std::max(e.from, e.to)}, line});
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 1; i < keyed.size(); ++i)
    if (keyed[i].first == keyed[i - 1].first)
      throw InvalidGraph("line " + std::to_string(keyed[i].second) + ": pair {" + std::to_string(keyed[i].first.from) +
                         "," + std::to_string(keyed[i].first.to) + "} repeated (line " +
                         std::to_string(keyed[i - 1].second) + "); duplicate or anti-parallel edge");
  return make_digraph(n, edges);
}

Digraph read_digraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_digraph(in);
}

void write_digraph(std::ostream& out, const Digraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.from << ' ' << e.to << '\n';
}

Permutation read_permutation(std::istream& in, std::size_t n) {
  auto ranks = read_single_line(in, n, "permutation");
  try {
    return Permutation::from_positions(std::move(ranks));
  } catch (const PreconditionError& e) {
    throw ParseError(1, e.what());
  }
}

void write_permutation(std::ostream& out, const Permutation& pi) {
  for (std::size_t v = 0; v < pi.size(); ++v) out << (v ? " " : "") << pi.position(v);
  out << '\n';
}

Coloring read_coloring(std::istream& in, std::size_t n) {
  Coloring c;
  c.color = read_single_line(in, n, "coloring");
  c.num_colors = c.color.empty() ? 0 : *std::max_element(c.color.begin(), c.color.end()) + 1;
  return c;
}

void write_coloring(std::ostream& out, const Coloring& c) {
  for (std::size_t v = 0; v < c.color.size(); ++v) out << (v ? " " : "") << c.color[v];
  out << '\n';
}

std::string to_text(const Digraph& g) {
  std::ostringstream os;
  write_digraph(os, g);
  return os.str();
}

std::string to_text(const Permutation& pi) {
  std::ostringstream os;
  write_permutation(os, pi);
  return os.str();
}

std::string to_text(const Coloring& c) {
  std::ostringstream os;
  write_coloring(os, c);
  return os.str();
}

}  // namespace dagchrom
