#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sct/dehn.hpp"

using namespace sct;

namespace {

Presentation genus2() { return parse_presentation("a b c d\na b A B c d C D\n"); }
Presentation tri() { return parse_presentation("a b c\na c a B a b a\n"); }
Presentation two_sevens() { return parse_presentation("a b c d e f g\na b c d e f g\na c e g b d f\n"); }

}  // namespace

TEST_CASE("relators and their conjugates are trivial") {
  auto p = genus2();
  DehnSolver s(p);
  const Word r = p.relators[0];
  CHECK(s.is_trivial(r));
  CHECK(s.is_trivial(inverse(r)));
  for (std::size_t k = 0; k < r.size(); ++k) CHECK(s.is_trivial(rotate(r, k)));
  CHECK(s.is_trivial(p.alphabet.parse("a b a b A B c d C D B A")));
  CHECK_FALSE(s.is_trivial(p.alphabet.parse("a b")));
  CHECK_FALSE(s.is_trivial(p.alphabet.parse("a b A B")));
  CHECK(s.is_trivial({}));
}

TEST_CASE("product of two relators is trivial") {
  auto p = two_sevens();
  DehnSolver s(p);
  CHECK(s.is_trivial(concat(p.relators[0], p.relators[1])));
  CHECK(s.is_trivial(concat(p.relators[1], inverse(p.relators[0]))));
}

TEST_CASE("uncertified presentations are rejected") {
  CHECK_THROWS_AS(DehnSolver(parse_presentation("a b\na b A B\n")), std::invalid_argument);
  CHECK_NOTHROW(DehnSolver(parse_presentation("a b\na b A B\n"), false));
  CHECK_THROWS_AS(DehnSolver(parse_presentation("a b\na A b\n")), std::invalid_argument);
}

TEST_CASE("free group: reduction is free reduction") {
  auto p = parse_presentation("a b\n");
  DehnSolver s(p);
  auto w = p.alphabet.parse("a b B a A b");
  auto res = s.reduce(w);
  CHECK(res.result == free_reduce(w));
  CHECK(res.trace.steps.empty());
}

TEST_CASE("irreducibility agrees with subword scan") {
  std::mt19937_64 rng(11);
  for (auto p : {genus2(), tri(), two_sevens()}) {
    DehnSolver s(p);
    for (int t = 0; t < 400; ++t) {
      Word w = oracle::random_word(rng, 1 + rng() % 14, static_cast<int>(p.alphabet.size()), true);
      CHECK(s.is_dehn_irreducible(w) == !oracle::has_dehn_subword(w, p.relators));
      auto res = s.reduce(w);
      CHECK_FALSE(oracle::has_dehn_subword(res.result, p.relators));
      CHECK(res.result.size() <= w.size());
    }
  }
}

TEST_CASE("random conjugate products reduce with verified traces") {
  std::mt19937_64 rng(5);
  for (auto p : {genus2(), tri()}) {
    DehnSolver s(p);
    for (int t = 0; t < 200; ++t) {
      Word w = oracle::random_conjugate_product(rng, p, 1 + rng() % 5, 6);
      auto res = s.reduce(w);
      CHECK(res.result.empty());
      std::string why;
      CHECK_MESSAGE(verify_trace(p, w, res.result, res.trace, &why), why);
    }
  }
}

TEST_CASE("traces of nontrivial words verify and re-expand") {
  std::mt19937_64 rng(9);
  auto p = genus2();
  DehnSolver s(p);
  for (int t = 0; t < 100; ++t) {
    Word w = concat(oracle::random_conjugate_product(rng, p, 2, 4), oracle::random_word(rng, 3, 4, true));
    auto res = s.reduce(w);
    CHECK(verify_trace(p, w, res.result, res.trace));
    Word prod;
    for (const auto& c : trace_conjugates(p, res.trace)) {
      const Word& r = p.relators[static_cast<std::size_t>(c.relator)];
      prod = concat(prod, concat(concat(c.conjugator, c.inverted ? inverse(r) : r), inverse(c.conjugator)));
    }
    CHECK(free_reduce(concat(prod, res.result)) == free_reduce(w));
  }
}

TEST_CASE("corrupted traces are rejected") {
  auto p = genus2();
  DehnSolver s(p);
  Word w = p.alphabet.parse("c a b A B c d C D C");
  auto res = s.reduce(w);
  REQUIRE(res.result.empty());
  REQUIRE(res.trace.steps.size() >= 1);
  CHECK(verify_trace(p, w, res.result, res.trace));

  auto t = res.trace;
  t.steps[0].position += 1;
  CHECK_FALSE(verify_trace(p, w, res.result, t));
  t = res.trace;
  t.steps[0].relator = 3;
  CHECK_FALSE(verify_trace(p, w, res.result, t));
  t = res.trace;
  t.steps[0].result.push_back(1);
  CHECK_FALSE(verify_trace(p, w, res.result, t));
  t = res.trace;
  t.steps.pop_back();
  CHECK_FALSE(verify_trace(p, w, res.result, t));
  t = res.trace;
  t.steps[0].rotation = (t.steps[0].rotation + 1) % 8;
  CHECK_FALSE(verify_trace(p, w, res.result, t));
  // Claiming triviality without steps.
  CHECK_FALSE(verify_trace(p, w, {}, DehnTrace{free_reduce(w), {}}));
  CHECK(verify_trace(p, p.alphabet.parse("a b"), p.alphabet.parse("a b"), DehnTrace{p.alphabet.parse("a b"), {}}));
  std::string why;
  CHECK_FALSE(verify_trace(p, w, p.alphabet.parse("a"), res.trace, &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("trace json round trip") {
  auto p = tri();
  DehnSolver s(p);
  Word w = p.alphabet.parse("b a c a B a b a a B");
  auto res = s.reduce(w);
  auto j = to_json(res.trace, p.alphabet);
  auto back = trace_from_json(j, p.alphabet);
  CHECK(to_json(back, p.alphabet) == j);
  CHECK(verify_trace(p, w, res.result, back));
}

TEST_CASE("abelianization") {
  auto s = Abelianization(genus2());
  CHECK(s.rank() == 4);
  CHECK(s.torsion().empty());
  auto c6 = Abelianization(parse_presentation("a\na a a a a a\n"));
  CHECK(c6.rank() == 0);
  CHECK(c6.torsion() == std::vector<std::int64_t>{6});
  CHECK(c6.is_zero(parse_presentation("a\n").alphabet.parse("a a a a a a a a a a a a")));
  CHECK_FALSE(c6.is_zero(parse_presentation("a\n").alphabet.parse("a a a")));
  // Relation matrix [[2,4],[4,2]]: Z/2 + Z/6.
  auto m = Abelianization(parse_presentation("a b\na a b b b b\na a a a b b\n"));
  CHECK(m.rank() == 0);
  CHECK(m.torsion() == std::vector<std::int64_t>{2, 6});
  auto t = Abelianization(tri());
  CHECK(t.rank() == 2);
  CHECK(t.torsion().empty());
  // Canonical images agree exactly when the difference is in the lattice.
  auto p = tri();
  CHECK(t.canonical(p.alphabet.parse("c")) == t.canonical(p.alphabet.parse("A A A A")));
  CHECK(t.canonical(p.alphabet.parse("c")) != t.canonical(p.alphabet.parse("A A A")));
}
