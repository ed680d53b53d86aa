#include <deque>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sct/constructions.hpp"
#include "sct/geometry.hpp"

using namespace sct;

namespace {

Presentation genus2() { return parse_presentation("a b c d\na b A B c d C D\n"); }
Presentation tri() { return parse_presentation("a b c\na c a B a b a\n"); }

Presentation gamma_toy() {
  Presentation p;
  p.alphabet = Alphabet({"a", "b", "t"});
  for (std::size_t i : {0, 1}) p.relators.push_back(gamma_relator(i, 20, 1, 2, 3));
  return p;
}

std::size_t free_count(std::size_t gens, std::size_t R) {
  std::size_t total = 1, layer = 2 * gens;
  for (std::size_t r = 1; r <= R; ++r) {
    total += layer;
    layer *= 2 * gens - 1;
  }
  return total;
}

std::vector<int> cayley_bfs(const CayleyBall& B, int src) {
  std::vector<int> d(B.size(), -1);
  std::deque<int> q{src};
  d[static_cast<std::size_t>(src)] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int u : B.adj[static_cast<std::size_t>(v)])
      if (u >= 0 && d[static_cast<std::size_t>(u)] < 0) {
        d[static_cast<std::size_t>(u)] = d[static_cast<std::size_t>(v)] + 1;
        q.push_back(u);
      }
  }
  return d;
}

}  // namespace

TEST_CASE("free group balls") {
  auto p = parse_presentation("a b\n");
  CHECK(cayley_ball(p, 2).size() == 17);
  for (std::size_t R = 0; R <= 5; ++R) CHECK(cayley_ball(p, R).size() == free_count(2, R));
  auto B = cayley_ball(p, 3);
  CHECK(B.complete);
  CHECK(B.dist[0] == 0);
  CHECK(B.rep[0].empty());
  for (int u : B.adj[0]) CHECK(B.dist[static_cast<std::size_t>(u)] == 1);
}

TEST_CASE("long relators do not change small balls") {
  auto pride = pride_presentation(PrideSchedule::standard());
  for (const auto& p : {pride, gamma_toy()}) {
    std::size_t shortest = p.relators[0].size();
    for (const auto& r : p.relators) shortest = std::min(shortest, r.size());
    for (std::size_t R = 1; R <= 3; ++R) {
      REQUIRE(shortest > 4 * R + 2);
      CHECK(cayley_ball(p, R).size() == free_count(p.alphabet.size(), R));
    }
  }
  // A relator of length 8 shows up at radius 4.
  CHECK(cayley_ball(genus2(), 3).size() == free_count(4, 3));
  CHECK(cayley_ball(genus2(), 4).size() < free_count(4, 4));
}

TEST_CASE("ball invariants") {
  for (auto p : {genus2(), tri()}) {
    BallContext ctx(p, 3, 100000);
    const auto& B = ctx.ball();
    REQUIRE(B.complete);
    // Adjacency is symmetric and distances are BFS layers.
    auto d = cayley_bfs(B, 0);
    for (std::size_t v = 0; v < B.size(); ++v) {
      CHECK(d[v] == B.dist[v]);
      CHECK(B.rep[v].size() == static_cast<std::size_t>(B.dist[v]));
      for (std::size_t s = 0; s < B.adj[v].size(); ++s) {
        int u = B.adj[v][s];
        if (u < 0) {
          CHECK(B.dist[v] == 3);
          continue;
        }
        CHECK(B.adj[static_cast<std::size_t>(u)][s ^ 1u] == static_cast<int>(v));
        Letter x = letter(static_cast<int>(s / 2), s % 2 == 1);
        CHECK(ctx.solver().is_trivial(concat(concat(B.rep[v], Word{x}), inverse(B.rep[static_cast<std::size_t>(u)]))));
      }
    }
    CHECK(ctx.locate(p.relators[0]) == 0);
  }
}

TEST_CASE("vertices name distinct elements") {
  auto p = tri();
  BallContext ctx(p, 3, 100000);
  const auto& B = ctx.ball();
  REQUIRE(B.size() <= 500);
  auto qs = oracle::symmetric_quotients(p, 5, 8, 200000, 3);
  REQUIRE(!qs.empty());
  std::size_t separated = 0, pairs = 0;
  for (std::size_t u = 0; u < B.size(); ++u)
    for (std::size_t v = u + 1; v < B.size(); ++v) {
      Word w = concat(B.rep[u], inverse(B.rep[v]));
      CHECK_FALSE(ctx.solver().is_trivial(w));
      ++pairs;
      for (const auto& q : qs)
        if (oracle::acts_nontrivially(q, w)) {
          ++separated;
          break;
        }
    }
  // The quotients only witness a part of the pairs; record that they witness many.
  CHECK(separated * 2 > pairs);
}

TEST_CASE("relator copies") {
  SUBCASE("surface ball") {
    BallContext ctx(genus2(), 4, 100000);
    auto rel = embed_relators(ctx);
    CHECK(rel.notes.empty());
    CHECK(rel.max_diameter == 4);
    // The eight rotations of the relator at the root close inside B(4).
    CHECK(rel.copies.size() == 8);
    for (const auto& c : rel.copies) {
      CHECK(c.full);
      auto in = c.inside();
      CHECK(in.size() == 8);
      CHECK(std::binary_search(in.begin(), in.end(), 0));
      std::size_t at_root = 0;
      for (int v : c.vertices) at_root += v == 0;
      CHECK(at_root == 1);
    }
  }
  SUBCASE("too long for the ball") {
    BallContext ctx(genus2(), 3, 100000);
    auto rel = embed_relators(ctx);
    CHECK(rel.copies.empty());
    CHECK_FALSE(rel.partial.empty());
  }
  SUBCASE("toy relators through the root") {
    auto p = gamma_toy();
    BallContext ctx(p, 2, 100000);
    auto rel = embed_relators(ctx);
    CHECK(rel.copies.empty());
    CHECK(rel.notes.empty());
    std::vector<std::size_t> through(p.relators.size(), 0);
    for (const auto& c : rel.partial) {
      std::size_t at_root = 0;
      for (int v : c.vertices) at_root += v == 0;
      CHECK(at_root <= 1);
      through[static_cast<std::size_t>(c.relator)] += at_root;
    }
    for (std::size_t i = 0; i < p.relators.size(); ++i) CHECK(through[i] == p.relators[i].size());
  }
  SUBCASE("proper power") {
    auto p = parse_presentation("a b\na a a a a a a\n");
    BallContext ctx(p, 4, 100000);
    auto rel = embed_relators(ctx);
    CHECK(rel.notes.empty());
    for (const auto& c : rel.copies) CHECK(c.inside().size() == 7);
    // Every vertex lies on exactly one copy of a^7.
    std::vector<int> seen(ctx.ball().size(), 0);
    for (const auto& c : rel.copies)
      for (int v : c.inside()) ++seen[static_cast<std::size_t>(v)];
    for (const auto& c : rel.partial)
      for (int v : c.inside()) ++seen[static_cast<std::size_t>(v)];
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("cone-off ball") {
  BallContext ctx(tri(), 4, 100000);
  auto rel = embed_relators(ctx);
  auto cb = coneoff_ball(ctx, rel);
  const auto& B = ctx.ball();
  CHECK(cb.D == 3);
  CHECK(cb.clique_edges > 0);
  for (const auto& c : rel.copies) {
    auto in = c.inside();
    for (int x : in) {
      auto d = cb.bfs(x, 1);
      for (int y : in) CHECK(d[static_cast<std::size_t>(y)] <= 1);
    }
  }
  // 1-Lipschitz against the word metric.
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    int x = static_cast<int>(rng() % B.size());
    auto dc = cb.bfs(x);
    auto dw = cayley_bfs(B, x);
    for (std::size_t v = 0; v < B.size(); ++v) CHECK(dc[v] <= dw[v]);
  }
  // No relators: the cone-off metric is the word metric.
  BallContext fctx(parse_presentation("a b\n"), 3, 1000);
  auto frel = embed_relators(fctx);
  auto fcb = coneoff_ball(fctx, frel);
  CHECK(fcb.clique_edges == 0);
  CHECK(fcb.bfs(0) == cayley_bfs(fctx.ball(), 0));
}

TEST_CASE("exit bound certifies distances against a larger ball") {
  auto p = tri();
  BallContext small(p, 4, 100000), big(p, 6, 200000);
  auto rs = embed_relators(small), rb = embed_relators(big);
  auto cs = coneoff_ball(small, rs), cbig = coneoff_ball(big, rb);
  const auto& S = small.ball();
  std::vector<int> to_big(S.size());
  for (std::size_t v = 0; v < S.size(); ++v) to_big[v] = big.locate(S.rep[v]);
  std::size_t trusted = 0;
  for (std::size_t x = 0; x < S.size(); x += 7) {
    auto ds = cs.bfs(static_cast<int>(x));
    auto db = cbig.bfs(to_big[x]);
    for (std::size_t y = 0; y < S.size(); ++y) {
      if (static_cast<std::size_t>(ds[y]) > cs.exit_bound(static_cast<int>(x), static_cast<int>(y))) continue;
      ++trusted;
      CHECK(ds[y] == db[static_cast<std::size_t>(to_big[y])]);
    }
  }
  CHECK(trusted > 1000);
}

TEST_CASE("slimness") {
  for (auto [p, R] : {std::pair{genus2(), std::size_t{4}}, std::pair{tri(), std::size_t{5}}}) {
    BallContext ctx(p, R, 200000);
    auto rel = embed_relators(ctx);
    auto cb = coneoff_ball(ctx, rel);
    auto rep = sample_slimness(cb, 300, 7);
    CHECK(rep.trusted == 300);
    CHECK(rep.max_slimness <= 5);
    for (const auto& t : rep.worst) {
      CHECK(t.side_xy.front() == t.x);
      CHECK(t.side_xy.back() == t.y);
      CHECK(t.side_yz.back() == t.z);
      CHECK(t.side_zx.back() == t.x);
    }
    // A degenerate triangle.
    auto side = cb.geodesic(0, static_cast<int>(ctx.ball().size()) - 1);
    std::vector<int> first(side.begin(), side.begin() + static_cast<std::ptrdiff_t>(side.size() / 2 + 1));
    std::vector<int> second(side.begin() + static_cast<std::ptrdiff_t>(side.size() / 2), side.end());
    std::vector<int> back(side.rbegin(), side.rend());
    CHECK(triangle_slimness(cb, first, second, back) == 0);
  }
  BallContext fctx(parse_presentation("a b\n"), 4, 10000);
  auto frel = embed_relators(fctx);
  auto fcb = coneoff_ball(fctx, frel);
  auto frep = sample_slimness(fcb, 200, 3);
  CHECK(frep.trusted == 200);
  CHECK(frep.max_slimness == 0);
}

TEST_CASE("geodesic sequences") {
  BallContext ctx(tri(), 5, 100000);
  auto rel = embed_relators(ctx);
  auto cb = coneoff_ball(ctx, rel);
  auto g = intersection_graph(rel);
  REQUIRE(rel.copies.size() > 2);
  auto same = geodesic_sequences(cb, 0, 0);
  CHECK(same.length == 1);
  REQUIRE(!g[0].empty());
  auto two = geodesic_sequences(cb, 0, g[0][0]);
  CHECK(two.length == 2);
  CHECK(two.chains.size() == 1);
  // Chains against cone-off distances between the end relators.
  for (std::size_t b = 0; b < rel.copies.size(); b += 5) {
    auto seq = geodesic_sequences(cb, 0, static_cast<int>(b));
    if (seq.length == 0) continue;
    for (const auto& ch : seq.chains) {
      CHECK(ch.size() == seq.length);
      for (std::size_t i = 0; i + 1 < ch.size(); ++i)
        CHECK(std::binary_search(g[static_cast<std::size_t>(ch[i])].begin(), g[static_cast<std::size_t>(ch[i])].end(),
                                 ch[i + 1]));
    }
    if (!seq.trusted) continue;
    int best = 1 << 20;
    for (int x : rel.copies[0].vertices) {
      auto d = cb.bfs(x);
      for (int y : rel.copies[b].vertices) best = std::min(best, d[static_cast<std::size_t>(y)]);
    }
    CHECK(best <= static_cast<int>(seq.length));
    CHECK(best + 2 >= static_cast<int>(seq.length) - 1);
  }
}

TEST_CASE("chords and convexity") {
  for (auto [p, R] : {std::pair{genus2(), std::size_t{4}}, std::pair{tri(), std::size_t{5}}}) {
    BallContext ctx(p, R, 200000);
    auto rel = embed_relators(ctx);
    auto cb = coneoff_ball(ctx, rel);
    auto ch = check_chords(cb, R);
    CHECK(ch.passed());
    CHECK(ch.checked > 0);
    std::size_t convex_checked = 0;
    for (std::size_t i = 0; i < rel.copies.size(); ++i) {
      auto one = check_convexity(cb, {static_cast<int>(i)});
      CHECK(one.passed());
      convex_checked += one.checked;
    }
    CHECK(convex_checked > 0);
    auto g = intersection_graph(rel);
    for (std::size_t i = 0; i < rel.copies.size(); ++i)
      for (int j : g[i]) {
        auto seq = geodesic_sequences(cb, static_cast<int>(i), j);
        auto rep = check_convexity(cb, seq.chains.front());
        CHECK(rep.passed());
      }
  }
  BallContext fctx(parse_presentation("a b\n"), 3, 1000);
  auto frel = embed_relators(fctx);
  auto fcb = coneoff_ball(fctx, frel);
  CHECK(check_chords(fcb, 3).checked == 0);
  CHECK(check_convexity(fcb, {}).passed());
}

TEST_CASE("convexity detects a non-convex union") {
  // Two copies of a^7 meeting nowhere: their union is not convex.
  auto p = parse_presentation("a b\na a a a a a a\n");
  BallContext ctx(p, 4, 100000);
  auto rel = embed_relators(ctx);
  auto cb = coneoff_ball(ctx, rel);
  REQUIRE(rel.copies.size() >= 2);
  int root_copy = -1, other = -1;
  for (std::size_t i = 0; i < rel.copies.size(); ++i) {
    auto in = rel.copies[i].inside();
    if (std::binary_search(in.begin(), in.end(), 0)) root_copy = static_cast<int>(i);
  }
  int b = ctx.ball().step(0, letter(1));
  for (std::size_t i = 0; i < rel.copies.size(); ++i) {
    auto in = rel.copies[i].inside();
    if (std::binary_search(in.begin(), in.end(), b)) other = static_cast<int>(i);
  }
  REQUIRE(root_copy >= 0);
  REQUIRE(other >= 0);
  auto rep = check_convexity(cb, {root_copy, other});
  CHECK_FALSE(rep.passed());
}

TEST_CASE("classify_element") {
  auto c3 = parse_presentation("a b\na a a\n");
  auto g3 = disjoint_cycles(c3);
  auto e = classify_element(g3, c3, c3.alphabet.parse("a"), 4);
  CHECK(e.kind == "elliptic");
  CHECK(e.witness == c3.alphabet.parse("a"));
  CHECK(classify_element(g3, c3, {}, 4).kind == "elliptic");
  // Conjugates of a are found with the conjugator.
  auto conj = classify_element(g3, c3, c3.alphabet.parse("b a B"), 4);
  CHECK(conj.kind == "elliptic");
  DehnSolver s(c3);
  CHECK(s.is_trivial(concat(concat(concat(conj.conjugator, conj.witness), inverse(conj.conjugator)),
                            inverse(power(c3.alphabet.parse("b a B"), conj.power)))));

  auto p = gamma_toy();
  auto gp = disjoint_cycles(p);
  BallContext ctx(p, 3, 200000);
  auto rel = embed_relators(ctx);
  auto cb = coneoff_ball(ctx, rel);
  auto h = classify_element(gp, p, p.alphabet.parse("t"), 4, &cb);
  CHECK(h.kind == "hyperbolic-indication");
  CHECK(h.power_lengths == std::vector<int>{1, 2, 3});
  auto inc = classify_element(gp, p, p.alphabet.parse("a b"), 2);
  CHECK(inc.kind != "elliptic");
}

TEST_CASE("torsion from automorphisms") {
  auto c3 = parse_presentation("a\na a a\n");
  auto g = disjoint_cycles(c3);
  REQUIRE(g.num_vertices() == 3);
  std::vector<int> rot(3);
  for (int v = 0; v < 3; ++v) rot[static_cast<std::size_t>(v)] = g.terminus(g.follow(v, letter(0)));
  auto t = torsion_from_automorphism(g, rot, 0);
  CHECK(t.word == c3.alphabet.parse("a"));
  CHECK(t.order == 3);
  CHECK(t.closes);

  auto id = torsion_from_automorphism(g, {0, 1, 2}, 1);
  CHECK(id.word.empty());
  CHECK(id.order == 1);
  CHECK(id.closes);

  // r^2 with the half rotation.
  Alphabet ab({"a", "b"});
  LabelledGraph h(ab);
  h.add_cycle(ab.parse("a b b a b b"));
  std::vector<int> half(6);
  for (int v = 0; v < 6; ++v) half[static_cast<std::size_t>(v)] = (v + 3) % 6;
  auto r = torsion_from_automorphism(h, half, 0);
  CHECK(r.order == 2);
  CHECK(r.word.size() == 3);
  CHECK(r.closes);
  CHECK(h.read(0, r.word) == half[0]);

  std::vector<int> bad{1, 0, 2};
  CHECK_THROWS_AS(torsion_from_automorphism(g, bad, 0), std::invalid_argument);
}

TEST_CASE("constants") {
  auto c = constants(0, 2);
  CHECK(c.L == 25);
  CHECK(c.N == 7424);
  CHECK(c.N == 64 * 116);
  CHECK(c.inj_lower == Rational(80, 7424));
  CHECK(c.nu_upper == 17168);
  CHECK(c.A_upper == Rational(10) * 500 * 500 * 7424 * 7424 * 7424 * (25 + 400));
  CHECK(c.L_of(100 * c.delta) == c.L + 400 * c.delta + 100 * c.delta);
  CHECK(c.N_of(0) == 3 * c.N);
  CHECK(to_string(c.inj_lower) == "5/464");
  auto j = to_json(c);
  CHECK(j["N"] == "7424");
  CHECK(j["e"] == "symbolic");
  auto c1 = constants(Rational(1, 2), 1);
  CHECK(c1.L == 34);
  CHECK(c1.N == Rational(17, 2) * Rational(17, 2) * Rational(17, 2) * 108);
  CHECK_THROWS(constants(-1, 2));
  CHECK_THROWS(constants(0, 0));
  CHECK_THROWS(constants(0, 2, 80, 100));
}
