#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sct/freeprod.hpp"

using namespace sct;

namespace {

FreeProductSpec cyclic_spec(const std::vector<int>& orders) {
  std::vector<std::pair<std::string, int>> f;
  for (std::size_t i = 0; i < orders.size(); ++i) f.emplace_back(std::string(1, static_cast<char>('a' + i)), orders[i]);
  return FreeProductSpec::cyclic(f);
}

// Exponent of a cyclic-factor element as an integer power of its generator.
std::int64_t exponent_of(const FreeProductSpec& spec, const Syllable& s) {
  const Factor& F = spec.factors[static_cast<std::size_t>(s.factor)];
  if (F.infinite) return s.value;
  for (int k = 0; k < F.group.order(); ++k) {
    int a = F.group.identity;
    for (int j = 0; j < k; ++j) a = F.group(a, F.gens[0]);
    if (a == s.value) return k;
  }
  return -1;
}

oracle::Syllables to_oracle(const FreeProductSpec& spec, const NormalForm& g) {
  oracle::Syllables out;
  for (auto s : g.syllables)
    out.emplace_back(spec.factors[static_cast<std::size_t>(s.factor)].letters[0], exponent_of(spec, s));
  return out;
}

Word random_letters(std::mt19937_64& rng, std::size_t len, int gens) {
  std::uniform_int_distribution<int> d(0, 2 * gens - 1);
  Word w;
  for (std::size_t i = 0; i < len; ++i) {
    int x = d(rng);
    w.push_back(letter(x / 2, x % 2 == 1));
  }
  return w;
}

LabelledGraph relator_cycles(const FreeProductSpec& spec, const std::vector<Word>& rels) {
  LabelledGraph g(spec.alphabet);
  for (const auto& r : rels) g.add_cycle(spell(spec, cyclically_reduce(spec, normal_form(spec, r)).core));
  return g;
}

}  // namespace

TEST_CASE("normal form examples") {
  auto S = cyclic_spec({0, 3, 2});
  const Alphabet& A = S.alphabet;
  CHECK(normal_form(S, A.parse("a a b b b c")).size() == 2);
  CHECK(normal_form(S, A.parse("b c c b")).size() == 1);
  CHECK(normal_form(S, A.parse("b b b")).empty());
  CHECK(format(S, normal_form(S, A.parse("a a b b"))) == "a^2 b^2");
  CHECK(syllable_length(normal_form(S, A.parse("a b a^-1 b^-1"))) == 4);
  CHECK(is_locally_geodesic(S, A.parse("a a b^-1")));
  CHECK_FALSE(is_locally_geodesic(S, A.parse("a b b")));
  CHECK(spell(S, normal_form(S, A.parse("b b"))) == A.parse("b^-1"));
}

TEST_CASE("normal form against the stack oracle") {
  std::mt19937_64 rng(31);
  const std::vector<int> orders{0, 3, 5, 2};
  auto S = cyclic_spec(orders);
  for (int it = 0; it < 2000; ++it) {
    Word w = random_letters(rng, rng() % 30, 4);
    CHECK(to_oracle(S, normal_form(S, w)) == oracle::cyclic_reduce_word(orders, w));
  }
}

TEST_CASE("normal form is a congruence and lengths are subadditive") {
  std::mt19937_64 rng(32);
  auto S = cyclic_spec({0, 3, 4});
  for (int it = 0; it < 1000; ++it) {
    Word u = random_letters(rng, rng() % 20, 3), v = random_letters(rng, rng() % 20, 3), w = random_letters(rng, rng() % 20, 3);
    auto nu = normal_form(S, u), nv = normal_form(S, v), nw = normal_form(S, w);
    CHECK(multiply(S, nu, nv) == normal_form(S, concat(u, v)));
    CHECK(multiply(S, multiply(S, nu, nv), nw) == multiply(S, nu, multiply(S, nv, nw)));
    CHECK(multiply(S, nu, inverse(S, nu)).empty());
    CHECK(syllable_length(multiply(S, nu, nv)) <= nu.size() + nv.size());
    CHECK(normal_form(S, spell(S, nu)) == nu);
  }
}

TEST_CASE("table factors from json") {
  auto j = nlohmann::json::parse(R"({"factors":[
    {"type":"table","elements":["e","r","s"],"mul":[[0,1,2],[1,2,0],[2,0,1]],"gens":["r"]},
    {"type":"Z","gen":"t"},
    {"type":"cyclic","order":2,"gen":"u"}]})");
  auto S = FreeProductSpec::from_json(j);
  REQUIRE(S.factors.size() == 3);
  CHECK(S.factors[0].order() == 3);
  CHECK(S.factors[1].infinite);
  CHECK(normal_form(S, S.alphabet.parse("r r r t u u")).size() == 1);
  CHECK(S.element_length(0, 2) == 1);  // r^2 = r^-1
  CHECK(FreeProductSpec::from_json(S.to_json()).to_json() == S.to_json());
  CHECK_THROWS_AS(FreeProductSpec::from_json(nlohmann::json::parse(R"({"factors":[{"type":"cyclic","order":1,"gen":"x"}]})")),
                  std::invalid_argument);
}

TEST_CASE("weak cyclic reduction") {
  auto S = cyclic_spec({0, 3});
  const Alphabet& A = S.alphabet;
  auto r = weakly_cyclically_reduce(S, A.parse("b a b^-1"));
  CHECK(r.core.size() == 1);
  CHECK(multiply(S, multiply(S, r.conjugator, r.core), inverse(S, r.conjugator)) == normal_form(S, A.parse("b a b^-1")));
  // g_l g_1 non-trivial in one factor: weakly reduced, not cyclically reduced.
  auto w = normal_form(S, A.parse("b a b"));
  CHECK(is_weakly_cyclically_reduced(S, w));
  CHECK_FALSE(is_cyclically_reduced(w));
  CHECK(cyclically_reduce(S, w).core.size() == 2);
  CHECK(weakly_cyclically_reduce(S, A.parse("a a^-1")).identity);

  std::mt19937_64 rng(33);
  for (int it = 0; it < 500; ++it) {
    auto core = normal_form(S, random_letters(rng, 1 + rng() % 12, 2));
    auto c = normal_form(S, random_letters(rng, rng() % 8, 2));
    auto g = multiply(S, multiply(S, c, core), inverse(S, c));
    auto red = weakly_cyclically_reduce(S, g);
    CHECK(multiply(S, multiply(S, red.conjugator, red.core), inverse(S, red.conjugator)) == g);
    if (!red.identity) CHECK(is_weakly_cyclically_reduced(S, red.core));
    auto cr = cyclically_reduce(S, g);
    if (!cr.identity) CHECK((cr.core.size() == 1 || is_cyclically_reduced(cr.core)));
  }
}

TEST_CASE("symmetrized sets") {
  auto Z = cyclic_spec({0, 0});
  const Alphabet& A = Z.alphabet;
  auto s1 = symmetrize(Z, std::vector<Word>{A.parse("a b a b")});
  CHECK(s1.generated == 8);
  CHECK(s1.elements.size() == 4);
  auto s2 = symmetrize(Z, std::vector<Word>{A.parse("a b")});
  CHECK(s2.generated == 4);
  CHECK(s2.elements.size() == 4);
  // Splits of a^2 keep the sign: a b a^2 gives a b a.. and a a b a.
  auto s3 = symmetrize(Z, std::vector<Word>{A.parse("a a b")});
  CHECK(s3.elements.size() == 6);
  CHECK(symmetrize(Z, s3.elements).elements == s3.elements);
  CHECK_THROWS_AS(symmetrize(Z, std::vector<Word>{A.parse("a a^-1")}), std::invalid_argument);

  std::mt19937_64 rng(34);
  for (const std::vector<int>& orders : {std::vector<int>{3, 5, 2}, std::vector<int>{0, 3, 4}}) {
    auto S = cyclic_spec(orders);
    for (int it = 0; it < 200; ++it) {
      std::vector<Word> rels{random_letters(rng, 2 + rng() % 10, 3), random_letters(rng, 2 + rng() % 10, 3)};
      bool trivial = false;
      for (auto& r : rels) trivial |= normal_form(S, r).empty();
      if (trivial) continue;
      auto set = symmetrize(S, rels);
      auto want = oracle::star_conjugates(orders, rels);
      std::vector<oracle::Syllables> got;
      for (auto& e : set.elements) got.push_back(to_oracle(S, e));
      std::sort(got.begin(), got.end());
      CHECK(got == want);
      CHECK(symmetrize(S, set.elements).elements == set.elements);
    }
  }
}

TEST_CASE("star pieces and powers") {
  auto S = cyclic_spec({3, 3});
  const Alphabet& A = S.alphabet;
  auto n = [&](const char* w) { return normal_form(S, A.parse(w)); };
  CHECK(star_piece_length(n("a b a b"), n("a b a^-1 b")) == 3);
  CHECK(star_piece_length(n("a b"), n("b a")) == 0);
  CHECK(star_piece_length(n("a b"), n("a^-1 b")) == 1);
  CHECK(star_max_power(n("a b a b a b a")).exponent == 3);
  CHECK(star_max_power(n("a b a b a^-1")).exponent == 2);
  CHECK(star_max_power(n("a b")).exponent == 1);
}

TEST_CASE("classical checker against the brute-force set") {
  std::mt19937_64 rng(35);
  int compared = 0;
  for (const std::vector<int>& orders :
       {std::vector<int>{3, 5, 2}, std::vector<int>{5, 5, 3, 3}, std::vector<int>{3, 3}, std::vector<int>{0, 3, 5}}) {
    auto S = cyclic_spec(orders);
    const int k = static_cast<int>(orders.size());
    for (int it = 0; it < 150; ++it) {
      std::vector<Word> rels;
      const int count = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < count; ++j) {
        Word r = random_letters(rng, 3 + rng() % 14, k);
        if (rng() % 5 == 0) r = power(r, 2 + rng() % 3);
        rels.push_back(r);
      }
      bool trivial = false;
      for (auto& r : rels) trivial |= normal_form(S, r).empty();
      if (trivial) continue;
      for (Ratio lam : {Ratio{1, 6}, Ratio{1, 3}, Ratio{1, 2}}) {
        auto got = check_classical_star(S, rels, lam);
        auto want = oracle::star_brute(orders, rels, lam.num, lam.den);
        CHECK(got.max_piece == want.max_piece);
        CHECK(got.sc.violations.empty() == !want.piece_violation);
        if (want.max_power >= 3) CHECK(got.max_power == want.max_power);
        else CHECK(got.max_power <= 2);
        ++compared;
      }
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("classical checker clauses") {
  auto S = cyclic_spec({3, 5, 2, 3});
  const Alphabet& A = S.alphabet;
  Word r = A.parse("a b c d a^-1 b b c d d a b^-1 c d");
  auto rep = check_classical_star(S, {r, power(r, 2)}, Ratio{1, 6});
  CHECK(rep.sc.verdict == Verdict::fail);
  CHECK(rep.proper_powers == std::vector<std::size_t>{1});
  auto shortr = check_classical_star(S, {A.parse("a b c d")}, Ratio{1, 6});
  CHECK(shortr.short_relators == std::vector<std::size_t>{0});
  CHECK(shortr.sc.verdict == Verdict::fail);
  CHECK_THROWS_AS(check_classical_star(S, {A.parse("a a a")}, Ratio{1, 6}), std::invalid_argument);
  StarOptions o;
  o.symmetrize = false;
  CHECK_THROWS_AS(check_classical_star(S, {A.parse("a b c d a b")}, Ratio{1, 6}, o), std::invalid_argument);
  auto set = symmetrize(S, std::vector<Word>{A.parse("a b c d a b")});
  std::vector<Word> spelled;
  for (auto& e : set.elements) spelled.push_back(spell(S, e));
  CHECK_NOTHROW(check_classical_star(S, spelled, Ratio{1, 6}, o));
  // A high power prefix trips the p clause only.
  Word pw = concat(power(A.parse("a b"), 6), A.parse("c d c d^-1 c a^-1 d c^-1 b d a^-1 c b^-1 d c a c^-1 d a b^-1 c d b"));
  StarOptions p4;
  p4.p = 4;
  CHECK_FALSE(check_classical_star(S, {pw}, Ratio{1, 1}, p4).sc.power_violations.empty());
  p4.p = 6;
  CHECK(check_classical_star(S, {pw}, Ratio{1, 1}, p4).sc.power_violations.empty());
}

TEST_CASE("toy test group") {
  auto T = toy_test_group();
  CHECK(T.relators.size() == 5);
  StarOptions o;
  o.p = 10;
  auto rep = check_classical_star(T.spec, T.relators, Ratio{1, 6}, o);
  CHECK(rep.sc.verdict == Verdict::pass);
  CHECK(rep.max_power <= 3);
  // Five blocks per relator leave pieces over a sixth of the relator.
  auto small = toy_test_group(5, 5, 8);
  CHECK(check_classical_star(small.spec, small.relators, Ratio{1, 6}, o).sc.verdict == Verdict::fail);
  CHECK_THROWS_AS(toy_test_group(0), std::invalid_argument);
}

TEST_CASE("reduction over the free product") {
  auto S = cyclic_spec({3, 3});
  const Alphabet& A = S.alphabet;
  // Two a-edges out of vertices joined by the F-trivial path b^3.
  LabelledGraph g(S.alphabet);
  g.add_vertices(6);
  g.add_edge(0, 1, letter(1));
  g.add_edge(1, 2, letter(1));
  g.add_edge(2, 3, letter(1));
  g.add_edge(0, 4, letter(0));
  g.add_edge(3, 5, letter(0));
  auto r = reduce_over_F(S, g);
  CHECK(r.vertex_map[0] == r.vertex_map[3]);
  CHECK(r.vertex_map[4] == r.vertex_map[5]);
  CHECK(r.graph.num_vertices() == 4);
  CHECK(same_graph(reduce_over_F(S, r.graph).graph, r.graph));
  // Reduced already: identity on vertices.
  LabelledGraph c(S.alphabet);
  c.add_cycle(A.parse("a b a b^-1"));
  auto rc = reduce_over_F(S, c);
  CHECK(rc.trace.empty());
  CHECK(same_graph(rc.graph, c));
  std::mt19937_64 rng(36);
  for (int it = 0; it < 100; ++it) {
    auto h = oracle::random_reduced_graph(rng, 7, 10, 2);
    auto once = reduce_over_F(S, h);
    CHECK(same_graph(reduce_over_F(S, once.graph).graph, once.graph));
  }
}

TEST_CASE("completion") {
  auto S = cyclic_spec({3, 3});
  LabelledGraph g(S.alphabet);
  g.add_cycle(S.alphabet.parse("a b a b a b a b"));
  auto c = complete(S, g);
  // Each of the 8 edges grows a triangle: 8 + 8 vertices, 8 * 3 edges.
  CHECK(c.completed.num_vertices() == 16);
  CHECK(c.completed.num_darts() == 48);
  CHECK(c.copies.size() == 8);
  for (const auto& a : c.copies) CHECK(a.embedded);
  CHECK(is_completed(S, c.completed));
  CHECK(same_graph(complete(S, c.completed).completed, c.completed));
  for (int e = 0; e < g.num_darts(); ++e) CHECK(c.edge_copy[static_cast<std::size_t>(e)] >= 0);

  auto Z2 = cyclic_spec({2, 2});
  auto empty = complete(Z2, LabelledGraph(Z2.alphabet));
  CHECK(empty.completed.num_vertices() == 4);
  CHECK(components(empty.completed).count() == 2);
  CHECK(empty.added_factors == std::vector<int>{0, 1});

  auto Zs = cyclic_spec({0, 3});
  LabelledGraph z(Zs.alphabet);
  z.add_cycle(Zs.alphabet.parse("a b"));
  CHECK_THROWS_AS(complete(Zs, z), std::invalid_argument);
  auto t = complete(Zs, z, 2);
  CHECK_FALSE(t.certifiable);
  CHECK(t.truncation == std::optional<std::size_t>(2));
  CHECK(to_json(t)["certifiable"] == false);
}

TEST_CASE("cylinder-freeness") {
  auto S = cyclic_spec({0, 0, 0, 2});
  LabelledGraph g(S.alphabet);
  g.add_cycle(S.alphabet.parse("a b c d c^-1 b^-1 a^-1 d"));
  auto c = complete(S, g, 2);
  auto cy = cylinder_free(S, c.completed);
  CHECK_FALSE(cy.cylinder_free);
  CHECK_FALSE(cy.certified);
  REQUIRE(cy.copy1 >= 0);
  CHECK(is_label_preserving_automorphism(c.completed, cy.witness));
  CHECK_FALSE(cy.witness.is_identity());
  for (int k : {cy.copy1, cy.copy2}) {
    const auto& copy = cy.copies[static_cast<std::size_t>(k)];
    for (int v : copy.vertices) CHECK(copy.contains(cy.witness.vertex[static_cast<std::size_t>(v)]));
  }

  auto T = cyclic_spec({3, 3});
  LabelledGraph one(T.alphabet);
  one.add_cycle(T.alphabet.parse("a b a b^-1 a^-1 b^-1 a b a^-1 b a^-1 b^-1"));
  CHECK(cylinder_free(T, complete(T, one).completed).cylinder_free);
  // A single triangle has no two disjoint attached copies.
  auto tri = complete(T, LabelledGraph(T.alphabet)).completed;
  CHECK(cylinder_free(T, tri).cylinder_free);
  CHECK_THROWS_AS(cylinder_free(T, one), std::invalid_argument);
}

TEST_CASE("graphical star condition") {
  auto S = cyclic_spec({3, 3});
  // An x x cycle cannot sit in Cay(Z/3).
  LabelledGraph bad(S.alphabet);
  bad.add_cycle(S.alphabet.parse("a a"));
  auto rep = check_star_graphical(S, bad, Ratio{1, 6});
  CHECK(rep.sc.verdict == Verdict::fail);
  REQUIRE(rep.embedding_witness.has_value());
  CHECK_FALSE(rep.embedding_witness->embedded);
  // Not completed.
  LabelledGraph g(S.alphabet);
  g.add_cycle(S.alphabet.parse("a b a b^-1 a^-1 b^-1 a b a^-1 b a^-1 b^-1"));
  auto nc = check_star_graphical(S, g, Ratio{1, 6});
  CHECK(nc.sc.verdict == Verdict::fail);
  CHECK_FALSE(nc.completed);

  auto full = complete(S, g).completed;
  auto lo = check_star_graphical(S, full, Ratio{1, 6});
  auto hi = check_star_graphical(S, full, Ratio{1, 2});
  CHECK(lo.trivial_cycles > 0);
  if (lo.sc.verdict == Verdict::pass) CHECK(hi.sc.verdict == Verdict::pass);
  if (hi.sc.verdict == Verdict::fail) CHECK(lo.sc.verdict == Verdict::fail);
  CHECK(lo.sc.stats.max_piece == hi.sc.stats.max_piece);
}

TEST_CASE("classical and graphical agree over Z/3 factors") {
  const std::vector<int> orders{3, 3, 3, 3, 3};
  auto S = cyclic_spec(orders);
  std::mt19937_64 rng(37);
  int pass = 0, fail = 0, inconclusive = 0;
  for (int it = 0; it < 400 && pass + fail < 24; ++it) {
    std::vector<Word> rels{random_letters(rng, 13, 5)};
    auto nf = normal_form(S, rels[0]);
    auto cr = cyclically_reduce(S, nf);
    if (cr.identity || cr.core.size() < 12 || cr.core.size() > 13) continue;
    auto classical = check_classical_star(S, rels, Ratio{1, 6});
    if (classical.sc.verdict == Verdict::pass ? pass >= 12 : fail >= 12) continue;
    auto g = complete(S, relator_cycles(S, rels)).completed;
    auto graphical = check_star_graphical(S, g, Ratio{1, 6});
    CHECK(graphical.sc.verdict != Verdict::inconclusive);
    CHECK((graphical.sc.verdict == Verdict::pass) == (classical.sc.verdict == Verdict::pass));
    CHECK(graphical.sc.stats.max_piece == classical.max_piece);
    StarGraphOptions gp;
    gp.p = 10;
    StarOptions cp;
    cp.p = 10;
    auto gpow = check_star_graphical(S, g, Ratio{1, 6}, gp);
    auto cpow = check_classical_star(S, rels, Ratio{1, 6}, cp);
    if (gpow.sc.verdict != Verdict::inconclusive) CHECK((gpow.sc.verdict == Verdict::pass) == (cpow.sc.verdict == Verdict::pass));
    else ++inconclusive;
    REQUIRE(gpow.cylinder.has_value());
    CHECK(gpow.cylinder->cylinder_free);
    (classical.sc.verdict == Verdict::pass ? pass : fail)++;
  }
  CHECK(pass > 0);
  CHECK(fail > 0);
  MESSAGE("power variant inconclusive on " << inconclusive << " of " << pass + fail);
}
