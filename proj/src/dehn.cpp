#include "sct/dehn.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sct/sc.hpp"

namespace sct {

namespace {

std::uint64_t hash_letters(const Letter* p, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[i]));
    h *= 1099511628211ull;
  }
  return h;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("abelianization: integer overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("abelianization: integer overflow");
  return r;
}

}  // namespace

SymmetrizedSet SymmetrizedSet::build(const std::vector<Word>& relators) {
  SymmetrizedSet s;
  std::set<Word> necklaces;
  for (std::size_t i = 0; i < relators.size(); ++i) {
    const Word& r = relators[i];
    if (r.empty() || !is_cyclically_reduced(r))
      throw std::invalid_argument("relator " + std::to_string(i + 1) + " is not cyclically reduced");
    const std::size_t per = primitive_root(r).root.size();
    for (bool inv : {false, true}) {
      Word base = inv ? inverse(r) : r;
      s.doubled_.push_back(concat(base, base));
      if (!necklaces.insert(canonical_necklace(base)).second) continue;
      for (std::size_t k = 0; k < per; ++k) s.elements.push_back({static_cast<int>(i), inv, k, r.size()});
    }
    s.min_length = i == 0 ? r.size() : std::min(s.min_length, r.size());
  }
  return s;
}

const Letter* SymmetrizedSet::data(std::size_t e) const {
  const auto& el = elements[e];
  return doubled_[2 * static_cast<std::size_t>(el.relator) + (el.inverted ? 1 : 0)].data() + el.rotation;
}

Word SymmetrizedSet::word(std::size_t e) const {
  const Letter* p = data(e);
  return Word(p, p + elements[e].length);
}

DehnSolver::DehnSolver(Presentation pres, bool certify) : pres_(std::move(pres)) {
  set_ = SymmetrizedSet::build(pres_.relators);
  if (certify && !pres_.relators.empty()) {
    auto rep = check_classical(pres_, {1, 6}, 1);
    if (!rep.passed()) throw std::invalid_argument("presentation is not C'(1/6); Dehn's algorithm is not certified");
  }
  // Every match has length > |e|/2 >= min_length/2, so that many letters key it.
  key_len_ = std::max<std::size_t>(1, std::min<std::size_t>(set_.min_length / 2 + 1, 16));
  for (std::size_t e = 0; e < set_.elements.size(); ++e)
    index_[hash_letters(set_.data(e), key_len_)].push_back(e);
}

std::optional<DehnSolver::Match> DehnSolver::find_match(const Word& w) const {
  if (set_.elements.empty()) return std::nullopt;
  for (std::size_t i = 0; i + key_len_ <= w.size(); ++i) {
    auto it = index_.find(hash_letters(w.data() + i, key_len_));
    if (it == index_.end()) continue;
    std::optional<Match> best;
    for (std::size_t e : it->second) {
      const Letter* u = set_.data(e);
      const std::size_t n = set_.elements[e].length;
      std::size_t l = 0;
      while (l < n && i + l < w.size() && u[l] == w[i + l]) ++l;
      if (2 * l <= n) continue;
      if (!best || l > best->length || (l == best->length && e < best->element)) best = Match{i, l, e};
    }
    if (best) return best;
  }
  return std::nullopt;
}

bool DehnSolver::is_dehn_irreducible(const Word& w) const { return !find_match(free_reduce(w)).has_value(); }

DehnResult DehnSolver::reduce(const Word& w) const {
  pres_.alphabet.check(w);
  DehnResult res;
  Word cur = free_reduce(w);
  res.trace.input = cur;
  while (auto m = find_match(cur)) {
    const auto& el = set_.elements[m->element];
    DehnStep st;
    st.position = m->position;
    st.removed.assign(cur.begin() + static_cast<std::ptrdiff_t>(m->position),
                      cur.begin() + static_cast<std::ptrdiff_t>(m->position + m->length));
    const Letter* u = set_.data(m->element);
    st.inserted = inverse(Word(u + m->length, u + el.length));
    st.element = m->element;
    st.relator = el.relator;
    st.inverted = el.inverted;
    st.rotation = el.rotation;
    Word next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(m->position));
    next.insert(next.end(), st.inserted.begin(), st.inserted.end());
    next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(m->position + m->length), cur.end());
    cur = free_reduce(next);
    st.result = cur;
    res.trace.steps.push_back(std::move(st));
  }
  res.result = cur;
  return res;
}

DehnResult dehn_reduce(const Presentation& pres, const Word& w) { return DehnSolver(pres).reduce(w); }

bool is_trivial(const Presentation& pres, const Word& w) { return DehnSolver(pres).is_trivial(w); }

std::vector<RelatorConjugate> trace_conjugates(const Presentation& pres, const DehnTrace& trace) {
  std::vector<RelatorConjugate> out;
  Word cur = trace.input;
  for (const auto& st : trace.steps) {
    const Word& r = pres.relators.at(static_cast<std::size_t>(st.relator));
    Word R = st.inverted ? inverse(r) : r;
    // x rotate(R, k) x^-1 = (x s^-1) R (x s^-1)^-1 with s = R[0..k).
    Word x(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(std::min(st.position, cur.size())));
    Word s(R.begin(), R.begin() + static_cast<std::ptrdiff_t>(std::min(st.rotation, R.size())));
    out.push_back({free_reduce(concat(x, inverse(s))), st.relator, st.inverted});
    cur = st.result;
  }
  return out;
}

bool verify_trace(const Presentation& pres, const Word& w, const Word& result, const DehnTrace& trace,
                  std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  Word cur = free_reduce(w);
  if (trace.input != cur) return fail("trace input differs from the reduced word");
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    const std::string at = "step " + std::to_string(i + 1) + ": ";
    if (st.relator < 0 || static_cast<std::size_t>(st.relator) >= pres.relators.size())
      return fail(at + "relator index out of range");
    const Word& r = pres.relators[static_cast<std::size_t>(st.relator)];
    Word R = st.inverted ? inverse(r) : r;
    if (st.rotation >= R.size()) return fail(at + "rotation out of range");
    Word el = concat(st.removed, inverse(st.inserted));
    if (el != rotate(R, st.rotation)) return fail(at + "removed and inserted parts do not form the stated relator");
    if (2 * st.removed.size() <= el.size()) return fail(at + "removed part is not more than half of the relator");
    if (st.position + st.removed.size() > cur.size() ||
        !std::equal(st.removed.begin(), st.removed.end(), cur.begin() + static_cast<std::ptrdiff_t>(st.position)))
      return fail(at + "removed part does not occur at the stated position");
    Word next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(st.position));
    next.insert(next.end(), st.inserted.begin(), st.inserted.end());
    next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(st.position + st.removed.size()), cur.end());
    next = free_reduce(next);
    if (next != st.result) return fail(at + "recorded result differs from the replayed step");
    if (next.size() >= cur.size()) return fail(at + "length does not decrease");
    cur = std::move(next);
  }
  if (cur != free_reduce(result)) return fail("final word differs from the stated result");
  // Free-group identity w = (prod of conjugates) * result.
  Word prod;
  for (const auto& c : trace_conjugates(pres, trace)) {
    const Word& r = pres.relators[static_cast<std::size_t>(c.relator)];
    prod = concat(prod, concat(concat(c.conjugator, c.inverted ? inverse(r) : r), inverse(c.conjugator)));
  }
  if (free_reduce(concat(prod, result)) != free_reduce(w)) return fail("re-expanded product differs from the input");
  return true;
}

nlohmann::json to_json(const DehnTrace& t, const Alphabet& a) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"position", s.position},
                     {"removed", a.format(s.removed)},
                     {"inserted", a.format(s.inserted)},
                     {"relator", s.relator},
                     {"inverted", s.inverted},
                     {"rotation", s.rotation},
                     {"result", a.format(s.result)}});
  return {{"input", a.format(t.input)}, {"steps", steps}};
}

DehnTrace trace_from_json(const nlohmann::json& j, const Alphabet& a) {
  DehnTrace t;
  t.input = a.parse(j.at("input").get<std::string>());
  for (const auto& s : j.at("steps")) {
    DehnStep st;
    st.position = s.at("position").get<std::size_t>();
    st.removed = a.parse(s.at("removed").get<std::string>());
    st.inserted = a.parse(s.at("inserted").get<std::string>());
    st.relator = s.at("relator").get<int>();
    st.inverted = s.at("inverted").get<bool>();
    st.rotation = s.at("rotation").get<std::size_t>();
    st.result = a.parse(s.at("result").get<std::string>());
    t.steps.push_back(std::move(st));
  }
  return t;
}

Abelianization::Abelianization(const Presentation& pres) : gens_(pres.alphabet.size()) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& r : pres.relators) {
    std::vector<std::int64_t> v(gens_, 0);
    for (Letter x : r) v[static_cast<std::size_t>(generator_of(x))] += x > 0 ? 1 : -1;
    rows.push_back(std::move(v));
  }
  // Row echelon form by gcd elimination, column by column.
  std::size_t top = 0;
  for (std::size_t c = 0; c < gens_ && top < rows.size(); ++c) {
    for (;;) {
      std::size_t piv = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (piv == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[piv][c]))) piv = i;
      if (piv == rows.size()) break;
      std::swap(rows[top], rows[piv]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        std::int64_t q = rows[i][c] / rows[top][c];
        for (std::size_t k = 0; k < gens_; ++k) rows[i][k] = checked_sub(rows[i][k], checked_mul(q, rows[top][k]));
        if (rows[i][c] != 0) done = false;
      }
      if (done) {
        if (rows[top][c] < 0)
          for (auto& x : rows[top]) x = -x;
        pivots_.push_back(c);
        ++top;
        break;
      }
    }
  }
  rows.resize(top);
  hnf_ = rows;
  rank_ = gens_ - top;

  // Invariant factors by Smith normal form of the echelon rows.
  std::vector<std::vector<std::int64_t>> m = rows;
  const std::size_t R = m.size();
  for (std::size_t t = 0; t < R; ++t) {
    for (;;) {
      // Smallest non-zero entry of the remaining block to (t, t).
      std::size_t bi = R, bj = gens_;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < gens_; ++j)
          if (m[i][j] != 0 && (bi == R || std::llabs(m[i][j]) < std::llabs(m[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == R) break;
      std::swap(m[t], m[bi]);
      for (auto& row : m) std::swap(row[t], row[bj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        std::int64_t q = m[i][t] / m[t][t];
        for (std::size_t k = t; k < gens_; ++k) m[i][k] = checked_sub(m[i][k], checked_mul(q, m[t][k]));
        if (m[i][t]) clean = false;
      }
      for (std::size_t j = t + 1; j < gens_; ++j) {
        std::int64_t q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < R; ++i) m[i][j] = checked_sub(m[i][j], checked_mul(q, m[i][t]));
        if (m[t][j]) clean = false;
      }
      if (!clean) continue;
      // Divisibility of the remaining block by the pivot.
      bool divides = true;
      for (std::size_t i = t + 1; i < R && divides; ++i)
        for (std::size_t j = t + 1; j < gens_ && divides; ++j)
          if (m[i][j] % m[t][t]) {
            for (std::size_t k = t; k < gens_; ++k) m[t][k] += m[i][k];
            divides = false;
          }
      if (divides) break;
    }
  }
  for (std::size_t t = 0; t < R; ++t) {
    std::int64_t d = std::llabs(m[t][t]);
    if (d > 1) torsion_.push_back(d);
  }
}

std::vector<std::int64_t> Abelianization::image(const Word& w) const {
  std::vector<std::int64_t> v(gens_, 0);
  for (Letter x : w) {
    auto g = static_cast<std::size_t>(generator_of(x));
    if (g >= gens_) throw alphabet_error("letter outside the alphabet");
    v[g] += x > 0 ? 1 : -1;
  }
  return v;
}

std::vector<std::int64_t> Abelianization::canonical(const Word& w) const { return reduce(image(w)); }

std::vector<std::int64_t> Abelianization::reduce(std::vector<std::int64_t> v) const {
  for (std::size_t i = 0; i < hnf_.size(); ++i) {
    std::size_t c = pivots_[i];
    std::int64_t p = hnf_[i][c];
    std::int64_t q = v[c] >= 0 ? v[c] / p : -((-v[c] + p - 1) / p);
    if (q != 0)
      for (std::size_t k = 0; k < gens_; ++k) v[k] = checked_sub(v[k], checked_mul(q, hnf_[i][k]));
  }
  return v;
}

bool Abelianization::is_zero(const Word& w) const {
  auto v = image(w);
  for (std::size_t i = 0; i < hnf_.size(); ++i) {
    std::size_t c = pivots_[i];
    if (v[c] % hnf_[i][c] != 0) return false;
    std::int64_t q = v[c] / hnf_[i][c];
    for (std::size_t k = 0; k < gens_; ++k) v[k] = checked_sub(v[k], checked_mul(q, hnf_[i][k]));
  }
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace sct
