#include "sct/constructions.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sct {

namespace {

bool tm_bit(std::size_t i) { return std::popcount(i) & 1; }

Alphabet names(std::initializer_list<const char*> l) {
  Alphabet a;
  for (const char* s : l) a.add(s);
  return a;
}

}  // namespace

Word tm_block(std::size_t k, Letter a, Letter b) {
  const std::size_t s = (k * k) % 1024;
  Word w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = tm_bit(s + i) ? b : a;
  return w;
}

Word gamma_relator(std::size_t i, std::size_t block, Letter a, Letter b, Letter t) {
  Word w;
  for (std::size_t k = block * i + 1; k <= block * i + block; ++k) {
    w.push_back(t);
    Word u = tm_block(k, a, b);
    w.insert(w.end(), u.begin(), u.end());
  }
  return w;
}

LabelledGraph gamma_I(const std::set<std::size_t>& I, std::size_t i_max, std::size_t n, std::size_t block) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("gamma_I: n must be odd and positive");
  if (block < 2) throw std::invalid_argument("gamma_I: block must be at least 2");
  for (std::size_t i : I)
    if (i > i_max) throw std::invalid_argument("gamma_I: index " + std::to_string(i) + " exceeds i_max");
  LabelledGraph g(names({"a", "b", "t"}));
  for (std::size_t i = 0; i <= i_max; ++i) {
    Word r = gamma_relator(i, block, letter(0), letter(1), letter(2));
    g.add_cycle(I.count(i) ? r : power(r, n));
  }
  return g;
}

RipsResult rips_graph(const Presentation& Q, Ratio lambda, std::size_t n, std::size_t min_len, int max_attempts) {
  const int m = static_cast<int>(Q.alphabet.size());
  if (m == 0) throw std::invalid_argument("rips_graph: presentation has no generators");
  if (lambda.num <= 0 || lambda.num * 6 > lambda.den)
    throw std::invalid_argument("rips_graph: lambda must be at most 1/6");
  Alphabet a = Q.alphabet;
  for (const char* s : {"x", "y", "t"})
    if (a.index(s) >= 0) throw std::invalid_argument(std::string("rips_graph: generator name '") + s + "' is reserved");
  const Letter x = letter(a.add("x")), y = letter(a.add("y")), t = letter(a.add("t"));

  RipsResult res;
  std::size_t blocks = 16;
  for (int attempt = 1; attempt <= max_attempts; ++attempt, blocks *= 2) {
    LabelledGraph g(a);
    std::vector<std::vector<std::size_t>> lens;
    std::size_t k = 1;
    auto pad = [&](Word& w, std::vector<std::size_t>& used) {
      Word u = tm_block(k, x, y);
      w.insert(w.end(), u.begin(), u.end());
      used.push_back(k++);
    };
    std::size_t conj = 0;
    for (int i = 0; i < m; ++i)
      for (bool e : {false, true})
        for (Letter u : {x, y, t}) {
          Word w{letter(i, e), u, letter(i, !e)};
          std::vector<std::size_t> used;
          while (used.size() < blocks || w.size() < min_len) {
            w.push_back(t);
            pad(w, used);
          }
          g.add_cycle(w);
          lens.push_back(std::move(used));
          ++conj;
        }
    for (const Word& r : Q.relators) {
      if (r.empty()) continue;
      // Conjugate by a power of the first generator until there are enough
      // letters; each letter is followed by its own padding block.
      for (std::size_t j = 0;; ++j) {
        Word seq = concat(concat(power(Word{letter(0)}, j), r), power(Word{letter(0, true)}, j));
        std::size_t k_save = k;
        Word w;
        std::vector<std::size_t> used;
        for (Letter c : seq) {
          w.push_back(c);
          pad(w, used);
        }
        if (seq.size() >= blocks && w.size() >= min_len) {
          g.add_cycle(w);
          lens.push_back(std::move(used));
          break;
        }
        k = k_save;
      }
    }
    SCOptions opt;
    opt.p = 3;
    opt.n = n;
    res.certificate = check_graphical(g, lambda, opt);
    res.graph = std::move(g);
    res.conjugation_cycles = conj;
    res.block_lengths = std::move(lens);
    res.blocks_per_cycle = blocks;
    res.attempts = attempt;
    if (res.certificate.passed()) return res;
  }
  return res;
}

Word sq_block(std::size_t k) {
  if (k < 1) throw std::invalid_argument("sq_block: k must be positive");
  // Thue-Morse from its first b; TM has no cube, so a b is at most two letters away.
  std::size_t len = 3 * (k - 1) + 1;
  while (!tm_bit(len)) ++len;
  Word w(len);
  for (std::size_t i = 0; i < len; ++i) w[i] = tm_bit(i + 1) ? letter(1) : letter(0);
  return w;
}

Word sq_relator(std::size_t i, std::size_t N) {
  Word w;
  for (std::size_t k = i * N + 1; k <= i * N + N; ++k) {
    w.insert(w.end(), 3, letter(0));
    Word u = sq_block(k);
    w.insert(w.end(), u.begin(), u.end());
  }
  return w;
}

LabelledGraph sq_graph(std::size_t N, std::size_t i_max) {
  if (N < 8) throw std::invalid_argument("sq_graph: N must be at least 8");
  if (i_max < 1) throw std::invalid_argument("sq_graph: i_max must be at least 1");
  LabelledGraph g(names({"a", "b"}));
  std::vector<int> v(i_max + 1), w(i_max + 1);
  for (std::size_t i = 1; i <= i_max; ++i) {
    Word r = sq_relator(i, N);
    auto darts = g.add_cycle(r);
    // Offset of the fourth a^3 block.
    std::size_t off = 0;
    for (std::size_t k = 0; k < 3; ++k) off += 3 + sq_block(i * N + 1 + k).size();
    v[i] = g.terminus(darts[0]);
    w[i] = g.terminus(darts[off]);
    g.marks["v" + std::to_string(i)] = v[i];
    g.marks["w" + std::to_string(i)] = w[i];
  }
  for (std::size_t i = 1; i < i_max; ++i) g.add_path(v[i], w[i + 1], Word{letter(1), letter(0, true), letter(1)});
  return g;
}

std::vector<int> cover_basis(const LabelledGraph& g0) {
  const int V = g0.num_vertices();
  if (V == 0) throw std::invalid_argument("cover: empty graph");
  std::vector<int> seen(V, 0);
  std::vector<char> tree(g0.num_darts(), 0);
  std::deque<int> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int e : g0.out(u)) {
      int t = g0.terminus(e);
      if (seen[t]) continue;
      seen[t] = 1;
      tree[e] = tree[g0.inv(e)] = 1;
      q.push_back(t);
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw std::invalid_argument("cover: graph is not connected");
  std::vector<int> basis;
  for (int e = 0; e < g0.num_darts(); ++e) {
    if (g0.inv(e) == e) throw std::invalid_argument("cover: self-inverse darts are not supported");
    if (e < g0.inv(e) && !tree[e]) basis.push_back(e);
  }
  return basis;
}

Cover finite_cover(const LabelledGraph& g0, const FiniteGroup& A, const std::vector<int>& images) {
  auto basis = cover_basis(g0);
  if (images.size() != basis.size())
    throw std::invalid_argument("cover: expected " + std::to_string(basis.size()) + " images, got " +
                                std::to_string(images.size()));
  for (int x : images)
    if (x < 0 || x >= A.order()) throw std::invalid_argument("cover: image outside the group");
  const int V = g0.num_vertices(), n = A.order();
  std::vector<int> h(g0.num_darts(), A.identity);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    h[basis[j]] = images[j];
    h[g0.inv(basis[j])] = A.inv[images[j]];
  }
  Cover c;
  c.graph = LabelledGraph(g0.alphabet());
  c.graph.add_vertices(n * V);
  for (int x = 0; x < n; ++x)
    for (int v = 0; v < V; ++v) c.vertex_projection.push_back(v);
  c.dart_projection.assign(static_cast<std::size_t>(2) * n * (g0.num_darts() / 2), -1);
  for (int e = 0; e < g0.num_darts(); ++e) {
    if (e > g0.inv(e)) continue;
    for (int x = 0; x < n; ++x) {
      int u = x * V + g0.origin(e), t = A(x, h[e]) * V + g0.terminus(e);
      int d = c.graph.add_edge(u, t, g0.label(e));
      c.dart_projection[d] = e;
      c.dart_projection[c.graph.inv(d)] = g0.inv(e);
    }
  }
  return c;
}

PrideSchedule PrideSchedule::standard() {
  auto primes = [](std::int64_t lo, std::size_t count) {
    std::vector<std::int64_t> out;
    for (std::int64_t x = lo; out.size() < count; ++x) {
      bool prime = x > 1;
      for (std::int64_t d = 2; d * d <= x && prime; ++d) prime = x % d != 0;
      if (prime) out.push_back(x);
    }
    return out;
  };
  PrideSchedule s;
  s.p = primes(101, 21);
  s.q = primes(s.p.back() + 1, 21);
  s.cap = 3;
  return s;
}

namespace {

Word syllables(Letter first_inv, Letter even, Letter odd, const std::vector<std::int64_t>& e, std::int64_t m) {
  if (e.empty() || e.size() % 2 == 0) throw std::invalid_argument("pride: need an odd number of exponents");
  Word w{first_inv};
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] <= 0) throw std::invalid_argument("pride: exponents must be positive");
    w.insert(w.end(), static_cast<std::size_t>(e[i] * m), i % 2 == 0 ? even : odd);
  }
  return w;
}

}  // namespace

Word pride_r(const std::vector<std::int64_t>& p, std::int64_t m) {
  return syllables(letter(0, true), letter(1), letter(0), p, m);
}

Word pride_s(const std::vector<std::int64_t>& q, std::int64_t m) {
  return syllables(letter(1, true), letter(0), letter(1), q, m);
}

Presentation pride_presentation(const PrideSchedule& s) {
  if (s.cap < 1) throw std::invalid_argument("pride: cap must be positive");
  Presentation pres;
  pres.alphabet = names({"a", "b"});
  for (std::size_t m = 1; m <= s.cap; ++m) pres.relators.push_back(pride_r(s.p, static_cast<std::int64_t>(m)));
  for (std::size_t m = 1; m <= s.cap; ++m) pres.relators.push_back(pride_s(s.q, static_cast<std::int64_t>(m)));
  return pres;
}

PrideCertificate certify_pride(const PrideSchedule& s, Ratio lambda, std::size_t p) {
  PrideCertificate c;
  Presentation pres = pride_presentation(s);
  c.pieces = check_classical(pres, lambda);
  auto pw = analyse_powers(disjoint_cycles(pres));
  c.powers_unbounded_in_family = pw.exhaustive;
  for (const auto& cl : pw.classes) {
    if (cl.max_exponent < p || cl.closed()) continue;
    c.cube_roots.push_back(cl.root);
    // Only a single generator has unbounded exponents as m grows.
    if (cl.root.size() != 1) c.powers_unbounded_in_family = false;
  }
  c.passed = c.pieces.passed() && c.powers_unbounded_in_family;
  return c;
}

CollapseReport burnside_collapse(const Presentation& pres, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("burnside_collapse: n must be positive");
  const std::size_t G = pres.alphabet.size();
  CollapseReport rep;
  rep.trivial.assign(G, false);
  std::vector<Word> rel = pres.relators;
  if (n == 1) {
    rep.trivial.assign(G, true);
    rep.all_trivial = true;
    rep.verdict = "trivial group";
    rep.steps.push_back("n = 1: every generator is its own first power");
    return rep;
  }
  using Syl = std::pair<int, std::int64_t>;
  auto to_syllables = [](const Word& w) {
    std::vector<Syl> s;
    for (Letter x : w) {
      std::int64_t e = x > 0 ? 1 : -1;
      if (!s.empty() && s.back().first == generator_of(x)) {
        s.back().second += e;
        if (s.back().second == 0) s.pop_back();
      } else {
        s.push_back({generator_of(x), e});
      }
    }
    return s;
  };
  auto to_word = [](const std::vector<Syl>& s) {
    Word w;
    for (auto [g, e] : s) w.insert(w.end(), static_cast<std::size_t>(e > 0 ? e : -e), letter(g, e < 0));
    return w;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      Word w;
      for (Letter x : rel[i])
        if (!rep.trivial[generator_of(x)]) w.push_back(x);
      auto s = to_syllables(w);
      // Cyclic: merge the ends, drop syllables that are n-th powers, repeat.
      for (bool again = true; again;) {
        again = false;
        while (s.size() >= 2 && s.front().first == s.back().first) {
          s.front().second += s.back().second;
          s.pop_back();
          if (s.front().second == 0) s.erase(s.begin());
          again = true;
        }
        for (std::size_t k = 0; k < s.size(); ++k)
          if (s[k].second % n == 0) {
            s.erase(s.begin() + static_cast<std::ptrdiff_t>(k));
            s = to_syllables(to_word(s));
            again = true;
            break;
          }
      }
      Word nw = to_word(s);
      if (nw != rel[i]) {
        rel[i] = nw;
        changed = true;
      }
      if (s.size() == 1) {
        auto [g, e] = s.front();
        if (std::gcd(e < 0 ? -e : e, n) == 1 && !rep.trivial[g]) {
          rep.trivial[g] = true;
          rep.steps.push_back("relator " + std::to_string(i + 1) + " reduces to " + pres.alphabet.format(nw) +
                              "; with " + pres.alphabet.name(g) + "^" + std::to_string(n) + " = 1 this forces " +
                              pres.alphabet.name(g) + " = 1");
          changed = true;
        }
      }
    }
  }
  rep.final_relators = rel;
  rep.all_trivial = std::all_of(rep.trivial.begin(), rep.trivial.end(), [](bool b) { return b; });
  rep.verdict = rep.all_trivial ? "trivial group" : "unknown";
  return rep;
}

int eccentricity(const LabelledGraph& g, int v) {
  std::vector<int> d(g.num_vertices(), -1);
  std::deque<int> q{v};
  d[v] = 0;
  int ecc = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    ecc = std::max(ecc, d[u]);
    for (int e : g.out(u))
      if (d[g.terminus(e)] < 0) {
        d[g.terminus(e)] = d[u] + 1;
        q.push_back(g.terminus(e));
      }
  }
  return ecc;
}

int girth_from_root(const LabelledGraph& g) {
  const int V = g.num_vertices();
  if (V == 0) return 0;
  std::vector<int> d(V, -1), parent(V, -1);
  std::deque<int> q{0};
  d[0] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int e : g.out(u))
      if (d[g.terminus(e)] < 0) {
        d[g.terminus(e)] = d[u] + 1;
        parent[g.terminus(e)] = e;
        q.push_back(g.terminus(e));
      }
  }
  int best = 0;
  for (int e = 0; e < g.num_darts(); ++e) {
    int u = g.origin(e), v = g.terminus(e);
    if (d[u] < 0 || e > g.inv(e)) continue;
    if (parent[v] == e || parent[u] == g.inv(e)) continue;
    int c = d[u] + d[v] + 1;
    if (best == 0 || c < best) best = c;
  }
  return best;
}

SL2Cayley sl2_cayley(int p) {
  if (p < 3) throw std::invalid_argument("sl2_cayley: p must be an odd prime");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("sl2_cayley: " + std::to_string(p) + " is not prime");
  SL2Cayley c;
  auto code = [p](const std::array<int, 4>& m) { return ((m[0] * p + m[1]) * p + m[2]) * p + m[3]; };
  std::vector<int> index(static_cast<std::size_t>(p) * p * p * p, -1);
  c.matrices.push_back({1, 0, 0, 1});
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int cc = 0; cc < p; ++cc)
        for (int d = 0; d < p; ++d)
          if (((a * d - b * cc) % p + p) % p == 1 && !(a == 1 && b == 0 && cc == 0 && d == 1))
            c.matrices.push_back({a, b, cc, d});
  for (std::size_t i = 0; i < c.matrices.size(); ++i) index[code(c.matrices[i])] = static_cast<int>(i);
  auto mul = [p](const std::array<int, 4>& x, const std::array<int, 4>& y) {
    return std::array<int, 4>{(x[0] * y[0] + x[1] * y[2]) % p, (x[0] * y[1] + x[1] * y[3]) % p,
                              (x[2] * y[0] + x[3] * y[2]) % p, (x[2] * y[1] + x[3] * y[3]) % p};
  };
  const std::array<int, 4> M1{1, 2, 0, 1}, M2{1, 0, 2, 1};
  c.graph = LabelledGraph(names({"a", "b"}));
  c.graph.add_vertices(static_cast<int>(c.matrices.size()));
  for (std::size_t i = 0; i < c.matrices.size(); ++i) {
    c.graph.add_edge(static_cast<int>(i), index[code(mul(c.matrices[i], M1))], letter(0));
    c.graph.add_edge(static_cast<int>(i), index[code(mul(c.matrices[i], M2))], letter(1));
  }
  c.stats.order = c.matrices.size();
  c.stats.degree = c.graph.degree(0);
  c.stats.regular = true;
  for (int v = 0; v < c.graph.num_vertices(); ++v) c.stats.regular &= c.graph.degree(v) == c.stats.degree;
  c.stats.girth = girth_from_root(c.graph);
  c.stats.diameter = eccentricity(c.graph, 0);
  return c;
}

LabelledGraph product_labelling(const LabelledGraph& g1, const LabelledGraph& g2) {
  if (g1.num_vertices() != g2.num_vertices() || g1.num_darts() != g2.num_darts())
    throw std::invalid_argument("product_labelling: underlying graphs differ");
  for (int e = 0; e < g1.num_darts(); ++e)
    if (g1.origin(e) != g2.origin(e) || g1.terminus(e) != g2.terminus(e) || g1.inv(e) != g2.inv(e) ||
        g1.inv(e) == e)
      throw std::invalid_argument("product_labelling: underlying graphs differ at dart " + std::to_string(e));
  Alphabet a;
  std::map<std::pair<int, Letter>, int> gen;
  LabelledGraph g(a);
  g.add_vertices(g1.num_vertices());
  for (int e = 0; e < g1.num_darts(); ++e) {
    if (e > g1.inv(e)) continue;
    int f = g1.label(e) > 0 ? e : g1.inv(e);
    int s = generator_of(g1.label(f));
    Letter y = g2.label(f);
    auto it = gen.find({s, y});
    if (it == gen.end()) {
      std::string nm = "(" + g1.alphabet().name(s) + "," + g2.alphabet().name(generator_of(y)) + (y < 0 ? "-" : "") + ")";
      it = gen.emplace(std::make_pair(s, y), g.alphabet().add(nm)).first;
    }
    g.add_edge(g1.origin(f), g1.terminus(f), letter(it->second));
  }
  return g;
}

std::optional<std::vector<int>> square_on_simple_path(const LabelledGraph& g, std::size_t cap) {
  const int V = g.num_vertices();
  std::vector<char> on(V, 0);
  std::vector<int> path;
  Word w;
  std::optional<std::vector<int>> found;
  std::function<void(int)> dfs = [&](int v) {
    if (found || path.size() >= cap) return;
    for (int e : g.out(v)) {
      int t = g.terminus(e);
      if (on[t]) continue;
      path.push_back(e);
      w.push_back(g.label(e));
      const std::size_t L = w.size();
      for (std::size_t h = 1; 2 * h <= L && !found; ++h)
        if (std::equal(w.end() - 2 * static_cast<std::ptrdiff_t>(h), w.end() - static_cast<std::ptrdiff_t>(h),
                       w.end() - static_cast<std::ptrdiff_t>(h)))
          found = path;
      on[t] = 1;
      dfs(t);
      on[t] = 0;
      path.pop_back();
      w.pop_back();
      if (found) return;
    }
  };
  for (int v = 0; v < V && !found; ++v) {
    on[v] = 1;
    dfs(v);
    on[v] = 0;
  }
  return found;
}

NonrepetitiveResult nonrepetitive_labelling(const LabelledGraph& g, int alphabet_size, std::uint64_t seed,
                                            int max_tries, std::size_t path_cap) {
  if (alphabet_size < 1) throw std::invalid_argument("nonrepetitive_labelling: alphabet must be non-empty");
  NonrepetitiveResult res;
  res.path_cap = path_cap;
  Alphabet a;
  for (int i = 0; i < alphabet_size; ++i)
    a.add(alphabet_size <= 26 ? std::string(1, static_cast<char>('a' + i)) : "c" + std::to_string(i + 1));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, alphabet_size - 1), sign(0, 1);
  for (res.tries = 1; res.tries <= max_tries; ++res.tries) {
    LabelledGraph h(a);
    h.add_vertices(g.num_vertices());
    for (int e = 0; e < g.num_darts(); ++e) {
      if (e > g.inv(e)) continue;
      if (e == g.inv(e)) throw std::invalid_argument("nonrepetitive_labelling: self-inverse darts are not supported");
      int s = pick(rng);
      bool inv = sign(rng) == 1;
      h.add_edge(g.origin(e), g.terminus(e), letter(s, inv));
    }
    if (!square_on_simple_path(h, path_cap)) {
      res.success = true;
      res.graph = std::move(h);
      return res;
    }
  }
  res.tries = max_tries;
  return res;
}

}  // namespace sct
