#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "brute.hpp"
#include "corpus.hpp"
#include "dagchrom/coloring.hpp"
#include "dagchrom/digraph.hpp"
#include "dagchrom/digraph_io.hpp"
#include "dagchrom/errors.hpp"
#include "dagchrom/rng.hpp"

using namespace dagchrom;

TEST_CASE("make_digraph rejects non-orientations") {
  CHECK_THROWS_AS(make_digraph(2, {{0, 0}}), InvalidGraph);
  CHECK_THROWS_AS(make_digraph(2, {{0, 1}, {1, 0}}), InvalidGraph);
  CHECK_THROWS_AS(make_digraph(2, {{0, 1}, {0, 1}}), InvalidGraph);
  CHECK_THROWS_AS(make_digraph(2, {{0, 2}}), InvalidGraph);
  const Digraph g = make_digraph(3, {{2, 0}, {0, 1}});
  CHECK(g.num_edges() == 2);
  CHECK(g.edges().front() == Edge{0, 1});
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.adjacent(0, 2));
  CHECK(g.out_degree(0) == 1);
  CHECK(g.in_degree(0) == 1);
}

TEST_CASE("digraph text round trip sorts edges") {
  const Digraph g = make_digraph(4, {{3, 1}, {0, 2}, {1, 0}});
  const std::string text = to_text(g);
  CHECK(text == "4 3\n0 2\n1 0\n3 1\n");
  std::istringstream in(text);
  CHECK(read_digraph(in) == g);
}

TEST_CASE("digraph parse errors carry line numbers") {
  auto parse_line = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_digraph(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(parse_line("") == 1);
  CHECK(parse_line("3 2\n0 1\n1 x\n") == 3);
  CHECK(parse_line("3 2\n0 1\n") == 3);
  CHECK(parse_line("3 1\n0 1\n1 2\n") == 3);
  std::istringstream anti("3 2\n0 1\n1 0\n");
  try {
    read_digraph(anti);
    FAIL("expected InvalidGraph");
  } catch (const InvalidGraph& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("permutation and coloring files") {
  const Permutation pi = Permutation::from_order(std::vector<Vertex>{2, 0, 1});
  CHECK(pi.position(2) == 0);
  CHECK(to_text(pi) == "1 2 0\n");
  std::istringstream in(to_text(pi));
  CHECK(read_permutation(in, 3) == pi);
  std::istringstream bad("0 0 1\n");
  CHECK_THROWS_AS(read_permutation(bad, 3), ParseError);
  std::istringstream short_line("0 1\n");
  CHECK_THROWS_AS(read_permutation(short_line, 3), ParseError);
  Coloring c{{0, 1, 0}, 2};
  std::istringstream cin(to_text(c));
  CHECK(read_coloring(cin, 3) == c);
  CHECK(pi.reversed().order() == std::vector<Vertex>{1, 0, 2});
}

TEST_CASE("forward subgraph is acyclic and splits the edges") {
  for (const auto& inst : corpus::mixed(60, 10, 5)) {
    const Digraph& g = inst.graph;
    const Permutation pi = random_permutation(g.num_vertices(), inst.seed);
    const Digraph f = forward_subgraph(g, pi);
    const Digraph b = forward_subgraph(g, pi.reversed());
    CHECK(is_acyclic(f));
    CHECK(is_acyclic(b));
    CHECK(f.num_edges() + b.num_edges() == g.num_edges());
    std::size_t against = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) against += against_degree(g, pi, v);
    CHECK(against == 2 * b.num_edges());
  }
}

TEST_CASE("topological order and cycles") {
  CHECK_FALSE(is_acyclic(directed_cycle(3)));
  CHECK_FALSE(topological_order(directed_cycle(5)).has_value());
  const auto order = topological_order(make_digraph(3, {{2, 1}, {1, 0}}));
  REQUIRE(order);
  CHECK(*order == std::vector<Vertex>{2, 1, 0});
  CHECK(is_acyclic(transitive_tournament(7)));
  CHECK(max_against_degree(transitive_tournament(7), Permutation::identity(7)) == 0);
  for (const auto& inst : corpus::mixed(80, 9, 6)) {
    const auto& g = inst.graph;
    CHECK(is_acyclic(g) == brute::acyclic(g.num_vertices(), g.edges(), full_mask(g.num_vertices())));
  }
}

TEST_CASE("consistent_topo_exists matches enumeration of sorts") {
  // Brute force: some order of S ∪ W is a topological sort of g[S ∪ W] listing W in order.
  auto brute = [](const Digraph& g, const std::vector<Vertex>& s, const std::vector<Vertex>& w) {
    std::vector<Vertex> all = s;
    all.insert(all.end(), w.begin(), w.end());
    std::sort(all.begin(), all.end());
    const std::vector<Vertex> members = all;
    do {
      std::vector<std::size_t> pos(g.num_vertices(), 0);
      for (std::size_t r = 0; r < all.size(); ++r) pos[all[r]] = r;
      bool ok = true;
      for (std::size_t i = 1; i < w.size(); ++i) ok = ok && pos[w[i - 1]] < pos[w[i]];
      for (const Edge& e : g.edges()) {
        const bool in = std::binary_search(members.begin(), members.end(), e.from) &&
                        std::binary_search(members.begin(), members.end(), e.to);
        if (in && pos[e.from] > pos[e.to]) ok = false;
      }
      if (ok) return true;
    } while (std::next_permutation(all.begin(), all.end()));
    return false;
  };
  for (const auto& inst : corpus::mixed(60, 8, 7)) {
    const auto& g = inst.graph;
    const std::size_t n = g.num_vertices();
    Rng rng(inst.seed);
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    rng.shuffle(perm.begin(), perm.end());
    const std::size_t nw = rng.below(std::min<std::size_t>(n, 3) + 1);
    const std::size_t ns = rng.below(std::min<std::size_t>(n - nw, 4) + 1);
    std::vector<Vertex> w(perm.begin(), perm.begin() + nw);
    std::vector<Vertex> s(perm.begin() + nw, perm.begin() + nw + ns);
    VertexMask sm = 0;
    for (Vertex v : s) sm |= bit(v);
    const bool expected = brute(g, s, w);
    CHECK(consistent_topo_exists(g, s, w) == expected);
    CHECK(consistent_topo_exists(g, sm, w) == expected);
  }
}

TEST_CASE("ordered acyclic sets") {
  const Digraph g = make_digraph(3, {{0, 1}, {1, 2}});
  CHECK(is_ordered_acyclic(g, std::vector<Vertex>{0, 1, 2}));
  CHECK(is_ordered_acyclic(g, std::vector<Vertex>{0, 2}));
  CHECK_FALSE(is_ordered_acyclic(g, std::vector<Vertex>{1, 0}));
  CHECK_FALSE(is_ordered_acyclic(g, std::vector<Vertex>{0, 0}));
}

TEST_CASE("generators") {
  const Digraph t = random_tournament(9, 3);
  CHECK(t.num_edges() == 36);
  CHECK(t == random_tournament(9, 3));
  CHECK_FALSE(t == random_tournament(9, 4));
  CHECK(random_orientation_gnp(10, 0.0, 1).num_edges() == 0);
  CHECK(random_orientation_gnp(10, 1.0, 1).num_edges() == 45);
  CHECK(transitive_tournament(5).num_edges() == 10);
  CHECK(directed_cycle(4).num_edges() == 4);
  CHECK_THROWS_AS(directed_cycle(2), PreconditionError);
  CHECK_THROWS_AS(random_orientation_gnp(3, 1.5, 1), PreconditionError);
}

TEST_CASE("bucket construction partitions the multipartite edges") {
  const BucketColoring bc = multipartite_bucket_graph(18, 2);
  const UndirectedGraph k = complete_multipartite(18, 2);
  CHECK(bc.red.num_edges() + bc.blue.num_edges() == k.num_edges());
  CHECK(k.num_edges() == 18 * 16 / 2);
  std::set<std::pair<Vertex, Vertex>> red(bc.red.edges().begin(), bc.red.edges().end());
  for (const auto& e : bc.blue.edges()) CHECK(red.count(e) == 0);
  CHECK_THROWS_AS(multipartite_bucket_graph(12, 2), PreconditionError);
  CHECK_THROWS_AS(multipartite_bucket_graph(9, 2), PreconditionError);
}

TEST_CASE("rng streams are pure functions of the seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(Rng(42).split(3).next() == Rng(Rng::derive(42, 3)).next());
  CHECK(Rng::derive(1, 0) != Rng::derive(1, 1));
  Rng c(7);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) ++hits[c.below(5)];
  for (int h : hits) CHECK(h > 800);
  CHECK(random_permutation(8, 5) == random_permutation(8, 5));
}

TEST_CASE("coloring helpers") {
  const UndirectedGraph h = underlying(make_digraph(3, {{0, 1}, {1, 2}}));
  CHECK(is_proper(h, Coloring{{0, 1, 0}, 2}));
  CHECK_FALSE(is_proper(h, Coloring{{0, 0, 1}, 2}));
  CHECK_FALSE(is_proper(h, Coloring{{0, 1, 0}, 3}));  // color 2 unused
  const auto bad = monochromatic_edge(h, Coloring{{0, 0, 1}, 2});
  REQUIRE(bad);
  CHECK(*bad == std::pair<Vertex, Vertex>{0, 1});
  CHECK(normalize_coloring({5, 3, 5}) == Coloring{{0, 1, 0}, 2});
  const UndirectedGraph c = complement(h);
  CHECK(c.num_edges() == 1);
  CHECK(c.adjacent(0, 2));
}

TEST_CASE("small orientation examples") {
  const Digraph c3 = make_digraph(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(c3 == directed_cycle(3));
  const Digraph t4 = transitive_tournament(4);
  CHECK(t4 == make_digraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  CHECK(*topological_order(t4) == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(is_acyclic(make_digraph(1, {})));
  const Permutation id3 = Permutation::identity(3);
  CHECK(forward_subgraph(c3, id3).edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(forward_subgraph(t4, Permutation::identity(4)) == t4);
  CHECK(forward_subgraph(t4, Permutation::identity(4).reversed()).num_edges() == 0);
  CHECK(against_degree(t4, Permutation::identity(4), 2) == 0);
  CHECK(against_degree(c3, id3, 0) == 1);
  CHECK(against_degree(c3, id3, 1) == 0);
  CHECK(consistent_topo_exists(t4, std::vector<Vertex>{2, 3}, std::vector<Vertex>{0, 1}));
  CHECK(consistent_topo_exists(t4, std::vector<Vertex>{0}, std::vector<Vertex>{1}));
  CHECK_FALSE(consistent_topo_exists(c3, std::vector<Vertex>{0, 1, 2}, std::vector<Vertex>{}));
  CHECK_FALSE(consistent_topo_exists(t4, std::vector<Vertex>{2}, std::vector<Vertex>{3, 1}));
}
