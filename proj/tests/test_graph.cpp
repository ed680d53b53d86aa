#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sct/automorphism.hpp"
#include "sct/graph.hpp"
#include "sct/graph_io.hpp"

using namespace sct;

namespace {
Alphabet ab() { return Alphabet({"a", "b"}); }
LabelledGraph cycle(const std::string& w) {
  LabelledGraph g(ab());
  g.add_cycle(g.alphabet().parse(w));
  return g;
}
}  // namespace

TEST_CASE("validate") {
  LabelledGraph g(ab());
  g.add_vertices(2);
  g.add_edge(0, 1, 1);
  CHECK(validate(g).ok());
  CHECK(validate(cycle("aabb")).ok());
  LabelledGraph bad(ab());
  bad.add_vertices(2);
  int e = bad.add_raw_dart(0, 1, 1);
  int f = bad.add_raw_dart(1, 0, 1);
  bad.set_inverse(e, f);
  CHECK_FALSE(validate(bad).ok());
}

TEST_CASE("reducedness") {
  LabelledGraph w(ab());
  w.add_vertex();
  w.add_edge(0, 0, 1);
  w.add_edge(0, 0, 2);
  CHECK(is_reduced(w).holds);
  LabelledGraph two(ab());
  two.add_vertices(3);
  two.add_edge(0, 1, 1);
  two.add_edge(0, 2, 1);
  auto r = is_reduced(two);
  CHECK_FALSE(r.holds);
  CHECK(r.vertex == 0);
}

TEST_CASE("strong reducedness") {
  CHECK(is_strongly_reduced(cycle("abbabaabbaababba")).holds);
  LabelledGraph loop(ab());
  loop.add_vertex();
  loop.add_edge(0, 0, 1);
  CHECK_FALSE(is_strongly_reduced(loop).holds);
  LabelledGraph digon(ab());
  digon.add_vertices(2);
  digon.add_edge(0, 1, 1);
  digon.add_edge(0, 1, 2);
  auto r = is_strongly_reduced(digon);
  CHECK_FALSE(r.holds);
  CHECK(is_reduced(digon).holds);
}

TEST_CASE("automorphisms of cycles") {
  auto g = cycle("aaa");
  auto grp = automorphisms(g, 0);
  CHECK(grp.order == 3);
  CHECK(automorphisms(cycle("ab"), 0).order == 1);
  auto sq = cycle("abab");
  CHECK(automorphisms(sq, 0).order == 2);
  for (auto& phi : automorphisms(sq, 0).elements) CHECK(is_label_preserving_automorphism(sq, phi));
}

TEST_CASE("automorphisms agree with brute force") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    auto g = oracle::random_reduced_graph(rng, 6, 9, 2);
    auto brute = oracle::automorphisms(g);
    auto orb = vertex_orbits(g);
    // Orbit partitions agree.
    for (int v = 0; v < g.num_vertices(); ++v)
      for (int u = 0; u < g.num_vertices(); ++u) {
        bool same = false;
        for (auto& a : brute) same |= a[v] == u;
        CHECK(same == (orb.cls[v] == orb.cls[u]));
      }
    auto comps = components(g);
    for (std::size_t c = 0; c < comps.count(); ++c) {
      auto grp = automorphisms(g, static_cast<int>(c));
      for (auto& phi : grp.elements) CHECK(is_label_preserving_automorphism(g, phi));
      // Closure under composition.
      if (grp.elements.size() <= 24)
        for (auto& f : grp.elements)
          for (auto& h : grp.elements) {
            auto fh = compose(f, h);
            bool found = false;
            for (auto& k : grp.elements) found |= k.vertex == fh.vertex;
            CHECK(found);
          }
    }
  }
}

TEST_CASE("presentation text") {
  auto p = parse_presentation("a b c d\n# surface\na b a^-1 b^-1 c d c^-1 d^-1\n");
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0].size() == 8);
  auto q = parse_presentation(format_presentation(p));
  CHECK(q.relators == p.relators);
  auto g = disjoint_cycles(p);
  CHECK(g.num_vertices() == 8);
}

TEST_CASE("graph json round trip") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 50; ++it) {
    auto g = oracle::random_reduced_graph(rng, 6, 9, 2);
    auto j = graph_to_json(g);
    auto h = graph_from_json(j);
    CHECK(h.num_vertices() == g.num_vertices());
    CHECK(h.num_darts() == g.num_darts());
    for (int e = 0; e < g.num_darts(); ++e) {
      CHECK(h.origin(e) == g.origin(e));
      CHECK(h.label(e) == g.label(e));
      CHECK(h.inv(e) == g.inv(e));
    }
  }
  CHECK_THROWS_AS(parse_json_text("{\"vertices\": [1,"), parse_error);
  CHECK(graph_to_dot(cycle("ab")).find("digraph") != std::string::npos);
}
