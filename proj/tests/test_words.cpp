#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sct/words.hpp"

using namespace sct;

namespace {
Alphabet ab() { return Alphabet({"a", "b"}); }
}  // namespace

TEST_CASE("free reduction") {
  Alphabet a = ab();
  CHECK(free_reduce(a.parse("a b b^-1 a")) == a.parse("a a"));
  CHECK(free_reduce(Word{}).empty());
  std::mt19937_64 rng(1);
  for (int it = 0; it < 200; ++it) {
    Word u = oracle::random_word(rng, it % 17, 2, false);
    Word v = oracle::random_word(rng, it % 13, 2, false);
    CHECK(free_reduce(concat(u, inverse(u))).empty());
    CHECK(free_reduce(free_reduce(u)) == free_reduce(u));
    CHECK(free_reduce(concat(u, free_reduce(v))) == free_reduce(concat(u, v)));
    CHECK(is_reduced(free_reduce(u)));
  }
}

TEST_CASE("alphabet errors and syntax") {
  Alphabet a = ab();
  CHECK_THROWS_AS(a.parse("c"), alphabet_error);
  CHECK(a.parse("abAB") == a.parse("a b a^-1 b^-1"));
  CHECK(a.format(a.parse("a B")) == "a b^-1");
  Alphabet long_names({"x1", "x2"});
  CHECK(long_names.parse("x1 x2^-1") == Word{1, -2});
}

TEST_CASE("cyclic reduction") {
  Alphabet a = ab();
  auto r = cyclic_reduce(a.parse("b a b^-1"));
  CHECK(r.core == a.parse("a"));
  CHECK(r.conjugator == a.parse("b"));
  r = cyclic_reduce(a.parse("a b"));
  CHECK(r.core == a.parse("a b"));
  CHECK(r.conjugator.empty());
  Word w = a.parse("b a b a^-1 b^-1");
  r = cyclic_reduce(w);
  CHECK(is_cyclically_reduced(r.core));
  CHECK(free_reduce(concat(concat(r.conjugator, r.core), inverse(r.conjugator))) == w);
  std::mt19937_64 rng(2);
  for (int it = 0; it < 300; ++it) {
    Word u = oracle::random_word(rng, 1 + it % 15, 2, true);
    auto c = cyclic_reduce(u);
    CHECK(is_cyclically_reduced(c.core));
    CHECK(free_reduce(concat(concat(c.conjugator, c.core), inverse(c.conjugator))) == u);
  }
}

TEST_CASE("cyclic conjugates") {
  Alphabet a = ab();
  auto c = cyclic_conjugates(a.parse("a b"));
  REQUIRE(c.size() == 2);
  CHECK(c[0] == a.parse("a b"));
  CHECK(c[1] == a.parse("b a"));
  CHECK(cyclic_conjugates(a.parse("a a")) == std::vector<Word>{a.parse("a a"), a.parse("a a")});
  CHECK_THROWS(cyclic_conjugates(a.parse("a b a^-1")));
}

TEST_CASE("primitive roots") {
  Alphabet a({"a", "b", "c"});
  auto p = primitive_root(a.parse("a b a b"));
  CHECK(p.root == a.parse("a b"));
  CHECK(p.exponent == 2);
  CHECK(primitive_root(a.parse("a b c")).exponent == 1);
  CHECK_THROWS(primitive_root(Word{}));
  std::mt19937_64 rng(3);
  for (int it = 0; it < 300; ++it) {
    Word u = oracle::random_word(rng, 1 + it % 6, 2, true);
    if (!is_cyclically_reduced(u) || !is_primitive(u)) continue;
    for (std::size_t k = 1; k <= 8; ++k) {
      auto q = primitive_root(power(u, k));
      CHECK(q.root == u);
      CHECK(q.exponent == k);
    }
  }
  // Exhaustive comparison with the divisor-length oracle up to length 12.
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      Word w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = (m >> i & 1) ? 2 : 1;
      auto x = primitive_root(w);
      auto y = oracle::primitive_root(w);
      CHECK(x.root == y.root);
      CHECK(x.exponent == y.exponent);
    }
}

TEST_CASE("necklaces") {
  Alphabet a = ab();
  CHECK(canonical_necklace(a.parse("b a a")) == a.parse("a a b"));
  std::mt19937_64 rng(4);
  for (int it = 0; it < 200; ++it) {
    Word u = oracle::random_word(rng, 1 + it % 10, 2, false);
    Word best = u;
    for (std::size_t k = 0; k < u.size(); ++k) best = std::min(best, rotate(u, k));
    CHECK(canonical_necklace(u) == best);
  }
}

TEST_CASE("thue-morse") {
  Alphabet a = ab();
  CHECK(a.format(thue_morse(8)) == a.format(a.parse("abbabaab")));
  CHECK(thue_morse(52) == a.parse("abbabaabbaababbabaababbaabbabaabbaababbaabbabaababba"));
  CHECK(thue_morse(0).empty());
  Word big = thue_morse(1000);
  for (std::size_t n : {0, 1, 7, 64, 999}) CHECK(Word(big.begin(), big.begin() + n) == thue_morse(n));
}

TEST_CASE("power freeness") {
  Alphabet a = ab();
  auto w = find_kth_power(a.parse("a a b"), 2);
  REQUIRE(w);
  CHECK(w->base == a.parse("a"));
  CHECK(w->position == 0);
  w = find_kth_power(a.parse("a b a b a b"), 3);
  REQUIRE(w);
  CHECK(w->base == a.parse("a b"));
  CHECK(w->position == 0);
  CHECK(is_kth_power_free(thue_morse(10000), 3));
  CHECK_FALSE(is_kth_power_free(thue_morse(10000), 2));
  CHECK_THROWS(find_kth_power(a.parse("a"), 1));
  std::mt19937_64 rng(5);
  for (int it = 0; it < 3000; ++it) {
    std::size_t n = 1 + it % 30;
    Word u(n);
    for (auto& x : u) x = (rng() & 1) ? 1 : 2;
    for (std::size_t k = 2; k <= 4; ++k) {
      auto x = find_kth_power(u, k);
      auto y = oracle::kth_power(u, k);
      REQUIRE(x.has_value() == y.has_value());
      if (x) {
        CHECK(x->position == y->position);
        CHECK(x->base == y->base);
      }
    }
  }
}

TEST_CASE("maximal runs") {
  std::mt19937_64 rng(6);
  for (int it = 0; it < 2000; ++it) {
    std::size_t n = 1 + it % 40;
    Word u(n);
    int gens = 1 + it % 3;
    for (auto& x : u) x = static_cast<Letter>(1 + rng() % gens);
    for (std::size_t e : {2u, 3u}) {
      auto x = find_runs(u, e);
      auto y = oracle::runs(u, e);
      REQUIRE(x.size() == y.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i].start == y[i].start);
        CHECK(x[i].length == y[i].length);
        CHECK(x[i].period == y[i].period);
      }
    }
  }
}
