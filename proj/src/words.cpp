#include "sct/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sct/suffix_array.hpp"

namespace sct {

Alphabet::Alphabet(std::vector<std::string> names) {
  for (auto& n : names) {
    if (index_.count(n)) throw alphabet_error("duplicate generator name: " + n);
    add(n);
  }
}

int Alphabet::add(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  if (name.empty() || name.find('^') != std::string::npos ||
      name.find_first_of(" \t\n") != std::string::npos)
    throw alphabet_error("invalid generator name: '" + name + "'");
  int id = static_cast<int>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

int Alphabet::index(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

bool Alphabet::short_names() const {
  for (auto& n : names_)
    if (n.size() != 1 || !std::islower(static_cast<unsigned char>(n[0]))) return false;
  return !names_.empty();
}

Letter Alphabet::parse_letter(std::string_view tok) const {
  bool inv = false;
  std::string_view base = tok;
  if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
    inv = true;
    base = tok.substr(0, tok.size() - 3);
  } else if (tok.size() > 2 && tok.substr(tok.size() - 2) == "^1") {
    base = tok.substr(0, tok.size() - 2);
  }
  int g = index(std::string(base));
  if (g < 0 && base.size() == 1 && std::isupper(static_cast<unsigned char>(base[0])) && short_names()) {
    g = index(std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(base[0])))));
    if (g >= 0) inv = !inv;
  }
  if (g < 0) throw alphabet_error("unknown letter: '" + std::string(tok) + "'");
  return letter(g, inv);
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  std::string s(text);
  std::istringstream in(s);
  std::string tok;
  const bool compact = short_names();
  while (in >> tok) {
    if (index(tok) >= 0 || tok.find('^') != std::string::npos || !compact || tok.size() == 1) {
      w.push_back(parse_letter(tok));
      continue;
    }
    // Compact spelling such as "abAB" over a one-character alphabet.
    for (char c : tok) w.push_back(parse_letter(std::string_view(&c, 1)));
  }
  return w;
}

std::string Alphabet::format_letter(Letter x) const {
  int g = generator_of(x);
  if (g < 0 || g >= static_cast<int>(names_.size())) throw alphabet_error("letter outside alphabet");
  return x > 0 ? names_[g] : names_[g] + "^-1";
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += format_letter(w[i]);
  }
  return out;
}

void Alphabet::check(const Word& w) const {
  for (Letter x : w)
    if (x == 0 || generator_of(x) >= static_cast<int>(names_.size()))
      throw alphabet_error("letter outside alphabet");
}

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& x : r) x = -x;
  return r;
}

Word concat(const Word& u, const Word& v) {
  Word r(u);
  r.insert(r.end(), v.begin(), v.end());
  return r;
}

Word power(const Word& w, std::size_t k) {
  Word r;
  r.reserve(w.size() * k);
  for (std::size_t i = 0; i < k; ++i) r.insert(r.end(), w.begin(), w.end());
  return r;
}

Word cyclic_subword(const Word& w, std::size_t pos, std::size_t len) {
  Word r;
  if (w.empty()) return r;
  r.reserve(len);
  for (std::size_t i = 0; i < len; ++i) r.push_back(w[(pos + i) % w.size()]);
  return r;
}

Word rotate(const Word& w, std::size_t k) { return cyclic_subword(w, w.empty() ? 0 : k % w.size(), w.size()); }

Word free_reduce(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (Letter x : w) {
    if (x == 0) throw alphabet_error("letter 0 is not a valid letter");
    if (!r.empty() && r.back() == -x)
      r.pop_back();
    else
      r.push_back(x);
  }
  return r;
}

bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == -w[i - 1]) return false;
  return true;
}

bool is_cyclically_reduced(const Word& w) {
  return is_reduced(w) && (w.size() < 2 || w.front() != -w.back());
}

CyclicReduction cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return {Word(r.begin() + lo, r.begin() + hi), Word(r.begin(), r.begin() + lo)};
}

std::vector<Word> cyclic_conjugates(const Word& w) {
  if (!is_cyclically_reduced(w)) throw std::invalid_argument("cyclic_conjugates: word is not cyclically reduced");
  std::vector<Word> out;
  out.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out.push_back(rotate(w, k));
  return out;
}

PrimitiveRoot primitive_root(const Word& w) {
  if (w.empty()) throw std::invalid_argument("primitive_root: empty word");
  const std::size_t n = w.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = w[i] == w[i - d];
    if (periodic) return {Word(w.begin(), w.begin() + d), n / d};
  }
  return {w, 1};
}

bool is_primitive(const Word& w) { return !w.empty() && primitive_root(w).exponent == 1; }

std::size_t least_rotation(const Word& w) {
  const std::size_t n = w.size();
  if (n == 0) return 0;
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter sj = w[j % n];
    long i = f[j - k - 1];
    while (i != -1 && sj != w[(k + i + 1) % n]) {
      if (sj < w[(k + i + 1) % n]) k = j - i - 1;
      i = f[i];
    }
    if (sj != w[(k + i + 1) % n]) {
      if (sj < w[k % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

Word canonical_necklace(const Word& w) { return rotate(w, least_rotation(w)); }

Word thue_morse(std::size_t len) {
  Word w(len);
  for (std::size_t i = 0; i < len; ++i) w[i] = (__builtin_popcountll(i) & 1) ? letter(1) : letter(0);
  return w;
}

std::optional<PowerWitness> find_kth_power(const Word& w, std::size_t k) {
  if (k < 2) throw std::invalid_argument("find_kth_power: k must be at least 2");
  const std::int32_t n = static_cast<std::int32_t>(w.size());
  if (n < static_cast<std::int32_t>(k)) return std::nullopt;
  // Text w # reverse(w): forward and backward extensions are both LCE queries.
  std::vector<std::int32_t> text(2 * n + 1);
  for (std::int32_t i = 0; i < n; ++i) {
    text[i] = w[i];
    text[2 * n - i] = w[i];
  }
  text[n] = 0;
  SuffixArray sa(text);
  auto rev = [n](std::int32_t x) { return 2 * n - x; };

  std::int32_t best_pos = n, best_q = 0;
  const std::int32_t kk = static_cast<std::int32_t>(k);
  for (std::int32_t q = 1; q * kk <= n; ++q) {
    const std::int32_t need = (kk - 1) * q;
    for (std::int32_t j = 0; j + q < n; j += q) {
      if (j >= best_pos + q) break;
      std::int32_t fwd = sa.lce(j, j + q);
      std::int32_t back = j > 0 ? std::min(sa.lce(rev(j - 1), rev(j + q - 1)), j) : 0;
      std::int32_t start = j - back;
      if (fwd + back >= need) {
        if (start < best_pos || (start == best_pos && q < best_q)) {
          best_pos = start;
          best_q = q;
        }
        break;
      }
      // Skip samples inside the agreement run we just measured.
      if (fwd > q) j += (fwd / q - 1) * q;
    }
  }
  if (best_q == 0) return std::nullopt;
  return PowerWitness{Word(w.begin() + best_pos, w.begin() + best_pos + best_q), static_cast<std::size_t>(best_pos)};
}

bool is_kth_power_free(const Word& w, std::size_t k) { return !find_kth_power(w, k).has_value(); }

std::vector<Run> find_runs(const Word& w, std::size_t min_exponent, std::size_t max_period) {
  if (min_exponent < 2) throw std::invalid_argument("find_runs: exponent must be at least 2");
  std::vector<Run> out;
  const std::int32_t n = static_cast<std::int32_t>(w.size());
  if (n < 2) return out;
  std::vector<std::int32_t> text(2 * n + 1);
  for (std::int32_t i = 0; i < n; ++i) {
    text[i] = w[i];
    text[2 * n - i] = w[i];
  }
  text[n] = 0;
  SuffixArray sa(text);
  auto rev = [n](std::int32_t x) { return 2 * n - x; };
  const std::int32_t e = static_cast<std::int32_t>(min_exponent);
  std::int32_t qmax = n / e;
  if (max_period > 0) qmax = std::min<std::int32_t>(qmax, static_cast<std::int32_t>(max_period));
  for (std::int32_t q = 1; q <= qmax; ++q) {
    std::int32_t last_end = -1;
    for (std::int32_t j = 0; j + q < n; j += q) {
      std::int32_t fwd = std::min(sa.lce(j, j + q), n - j - q);
      std::int32_t back = j > 0 ? std::min(sa.lce(rev(j - 1), rev(j + q - 1)), j) : 0;
      std::int32_t start = j - back, end = j + q + fwd;
      if (end - start >= e * q && end != last_end) {
        last_end = end;
        Word root(w.begin() + start, w.begin() + start + q);
        if (is_primitive(root))
          out.push_back({static_cast<std::size_t>(start), static_cast<std::size_t>(end - start),
                         static_cast<std::size_t>(q)});
      }
      if (fwd > q) j += (fwd / q - 1) * q;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Run& a, const Run& b) { return a.start != b.start ? a.start < b.start : a.period < b.period; });
  return out;
}

}  // namespace sct
