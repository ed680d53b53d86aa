#include "sct/freeprod.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "sct/constructions.hpp"
#include "sct/suffix_array.hpp"

namespace sct {

using nlohmann::json;

void FreeProductSpec::index_factor(std::size_t f) {
  Factor& F = factors[f];
  if (F.infinite) {
    if (F.letters.size() != 1) throw std::invalid_argument("infinite cyclic factor needs exactly one generator");
  } else if (F.letters.size() != F.gens.size()) {
    throw std::invalid_argument("factor " + F.name + ": generator list mismatch");
  }
  for (std::size_t j = 0; j < F.letters.size(); ++j) {
    const auto gen = static_cast<std::size_t>(F.letters[j]);
    if (factor_of_gen_.size() <= gen) {
      factor_of_gen_.resize(gen + 1, -1);
      local_of_gen_.resize(gen + 1, -1);
    }
    factor_of_gen_[gen] = static_cast<int>(f);
    local_of_gen_[gen] = static_cast<int>(j);
  }
  geodesic_.resize(factors.size());
  if (F.infinite) return;
  // BFS from the identity; letters in order s_1, s_1^-1, s_2, ...
  const int n = F.group.order();
  std::vector<Word> spell(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<int> q{F.group.identity};
  seen[static_cast<std::size_t>(F.group.identity)] = true;
  while (!q.empty()) {
    int a = q.front();
    q.pop_front();
    for (std::size_t j = 0; j < F.gens.size(); ++j) {
      for (bool neg : {false, true}) {
        int s = neg ? F.group.inv[static_cast<std::size_t>(F.gens[j])] : F.gens[j];
        int b = F.group(a, s);
        if (seen[static_cast<std::size_t>(b)]) continue;
        seen[static_cast<std::size_t>(b)] = true;
        spell[static_cast<std::size_t>(b)] = spell[static_cast<std::size_t>(a)];
        spell[static_cast<std::size_t>(b)].push_back(letter(F.letters[j], neg));
        q.push_back(b);
      }
    }
  }
  for (int a = 0; a < n; ++a)
    if (!seen[static_cast<std::size_t>(a)])
      throw std::invalid_argument("factor " + F.name + ": generators do not generate the group");
  geodesic_[f] = std::move(spell);
}

void FreeProductSpec::add_table_factor(const std::string& name, const FiniteGroup& g,
                                       const std::vector<std::pair<std::string, int>>& gens) {
  if (gens.empty()) throw std::invalid_argument("factor " + name + ": no generators");
  Factor F;
  F.name = name;
  F.group = g;
  for (const auto& [gname, elem] : gens) {
    if (elem < 0 || elem >= g.order()) throw std::invalid_argument("factor " + name + ": generator element out of range");
    if (alphabet.index(gname) >= 0) throw std::invalid_argument("generator '" + gname + "' occurs in two factors");
    F.letters.push_back(alphabet.add(gname));
    F.gens.push_back(elem);
  }
  factors.push_back(std::move(F));
  index_factor(factors.size() - 1);
}

void FreeProductSpec::add_infinite_cyclic(const std::string& gen) {
  if (alphabet.index(gen) >= 0) throw std::invalid_argument("generator '" + gen + "' occurs in two factors");
  Factor F;
  F.name = "Z(" + gen + ")";
  F.infinite = true;
  F.letters.push_back(alphabet.add(gen));
  factors.push_back(std::move(F));
  index_factor(factors.size() - 1);
}

FreeProductSpec FreeProductSpec::cyclic(const std::vector<std::pair<std::string, int>>& list) {
  FreeProductSpec s;
  for (const auto& [gen, order] : list) {
    if (order < 0) throw std::invalid_argument("negative factor order");
    if (order == 0) {
      s.add_infinite_cyclic(gen);
      continue;
    }
    FiniteGroup g = FiniteGroup::cyclic(order);
    for (int a = 0; a < order; ++a)
      g.elements[static_cast<std::size_t>(a)] = a == 0 ? "1" : a == 1 ? gen : gen + "^" + std::to_string(a);
    s.add_table_factor("Z/" + std::to_string(order) + "(" + gen + ")", g, {{gen, 1}});
  }
  return s;
}

FreeProductSpec FreeProductSpec::from_json(const json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array())
    throw std::invalid_argument("factor spec: expected {\"factors\": [...]}");
  FreeProductSpec s;
  std::size_t idx = 0;
  for (const auto& f : j["factors"]) {
    const std::string type = f.value("type", "");
    const std::string fname = f.value("name", "F" + std::to_string(idx));
    try {
      if (type == "Z") {
        s.add_infinite_cyclic(f.at("gen").get<std::string>());
      } else if (type == "cyclic") {
        const int order = f.at("order").get<int>();
        auto one = cyclic({{f.at("gen").get<std::string>(), order}});
        if (one.factors[0].infinite)
          s.add_infinite_cyclic(f.at("gen").get<std::string>());
        else
          s.add_table_factor(fname, one.factors[0].group,
                             {{f.at("gen").get<std::string>(), one.factors[0].gens[0]}});
      } else if (type == "table") {
        auto names = f.at("elements").get<std::vector<std::string>>();
        auto table = f.at("mul").get<std::vector<std::vector<int>>>();
        FiniteGroup g = FiniteGroup::from_table(names, table);
        auto element_index = [&](const json& e) {
          if (e.is_number_integer()) return e.get<int>();
          auto it = std::find(g.elements.begin(), g.elements.end(), e.get<std::string>());
          if (it == g.elements.end()) throw std::invalid_argument("unknown element " + e.dump());
          return static_cast<int>(it - g.elements.begin());
        };
        std::vector<std::pair<std::string, int>> gens;
        for (const auto& e : f.at("gens")) {
          if (e.is_object()) {
            gens.emplace_back(e.at("name").get<std::string>(), element_index(e.at("element")));
          } else {
            int a = element_index(e);
            gens.emplace_back(g.elements[static_cast<std::size_t>(a)], a);
          }
        }
        s.add_table_factor(fname, g, gens);
      } else {
        throw std::invalid_argument("unknown factor type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument("factor " + std::to_string(idx) + ": " + e.what());
    } catch (const alphabet_error& e) {
      throw std::invalid_argument("factor " + std::to_string(idx) + ": " + e.what());
    }
    ++idx;
  }
  return s;
}

json FreeProductSpec::to_json() const {
  json fs = json::array();
  for (const auto& F : factors) {
    if (F.infinite) {
      fs.push_back({{"type", "Z"}, {"gen", alphabet.name(F.letters[0])}});
      continue;
    }
    json gens = json::array();
    for (std::size_t j = 0; j < F.gens.size(); ++j)
      gens.push_back({{"name", alphabet.name(F.letters[j])}, {"element", F.group.elements[static_cast<std::size_t>(F.gens[j])]}});
    fs.push_back({{"type", "table"}, {"name", F.name}, {"elements", F.group.elements}, {"mul", F.group.mul}, {"gens", gens}});
  }
  return {{"factors", fs}};
}

std::int64_t FreeProductSpec::value_of(Letter x) const {
  const auto gen = static_cast<std::size_t>(generator_of(x));
  const Factor& F = factors[static_cast<std::size_t>(factor_of_gen_.at(gen))];
  if (F.infinite) return x > 0 ? 1 : -1;
  int a = F.gens[static_cast<std::size_t>(local_of_gen_[gen])];
  return x > 0 ? a : F.group.inv[static_cast<std::size_t>(a)];
}

std::int64_t FreeProductSpec::identity(int f) const {
  const Factor& F = factors[static_cast<std::size_t>(f)];
  return F.infinite ? 0 : F.group.identity;
}

std::int64_t FreeProductSpec::mul(int f, std::int64_t a, std::int64_t b) const {
  const Factor& F = factors[static_cast<std::size_t>(f)];
  if (F.infinite) return a + b;
  return F.group.mul[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

std::int64_t FreeProductSpec::inv(int f, std::int64_t a) const {
  const Factor& F = factors[static_cast<std::size_t>(f)];
  return F.infinite ? -a : F.group.inv[static_cast<std::size_t>(a)];
}

bool FreeProductSpec::finite() const {
  return std::none_of(factors.begin(), factors.end(), [](const Factor& F) { return F.infinite; });
}

std::size_t FreeProductSpec::element_length(int f, std::int64_t a) const {
  if (factors[static_cast<std::size_t>(f)].infinite) return static_cast<std::size_t>(a < 0 ? -a : a);
  return geodesic_[static_cast<std::size_t>(f)][static_cast<std::size_t>(a)].size();
}

Word FreeProductSpec::spelling(int f, std::int64_t a) const {
  const Factor& F = factors[static_cast<std::size_t>(f)];
  if (!F.infinite) return geodesic_[static_cast<std::size_t>(f)][static_cast<std::size_t>(a)];
  return Word(static_cast<std::size_t>(a < 0 ? -a : a), letter(F.letters[0], a < 0));
}

std::string FreeProductSpec::element_name(int f, std::int64_t a) const {
  const Factor& F = factors[static_cast<std::size_t>(f)];
  if (!F.infinite) return F.group.elements[static_cast<std::size_t>(a)];
  const std::string& t = alphabet.name(F.letters[0]);
  if (a == 0) return "1";
  return a == 1 ? t : t + "^" + std::to_string(a);
}

std::vector<std::int64_t> FreeProductSpec::nontrivial_elements(int f) const {
  const Factor& F = factors[static_cast<std::size_t>(f)];
  if (F.infinite) throw std::invalid_argument("infinite factor has no element list");
  std::vector<std::int64_t> out;
  for (int a = 0; a < F.group.order(); ++a)
    if (a != F.group.identity) out.push_back(a);
  return out;
}

namespace {

void push_syllable(const FreeProductSpec& spec, std::vector<Syllable>& s, Syllable x) {
  if (!s.empty() && s.back().factor == x.factor) {
    s.back().value = spec.mul(x.factor, s.back().value, x.value);
    if (spec.is_identity(x.factor, s.back().value)) s.pop_back();
    return;
  }
  if (!spec.is_identity(x.factor, x.value)) s.push_back(x);
}

NormalForm slice(const NormalForm& g, std::size_t lo, std::size_t hi) {
  return NormalForm{std::vector<Syllable>(g.syllables.begin() + static_cast<std::ptrdiff_t>(lo),
                                          g.syllables.begin() + static_cast<std::ptrdiff_t>(hi))};
}

}  // namespace

NormalForm normal_form(const FreeProductSpec& spec, const Word& w) {
  NormalForm g;
  for (Letter x : w) {
    if (generator_of(x) >= static_cast<int>(spec.alphabet.size()))
      throw alphabet_error("letter outside the factor alphabet");
    push_syllable(spec, g.syllables, {spec.factor_of(x), spec.value_of(x)});
  }
  return g;
}

NormalForm multiply(const FreeProductSpec& spec, const NormalForm& a, const NormalForm& b) {
  NormalForm g = a;
  for (const auto& s : b.syllables) push_syllable(spec, g.syllables, s);
  return g;
}

NormalForm inverse(const FreeProductSpec& spec, const NormalForm& a) {
  NormalForm g;
  for (auto it = a.syllables.rbegin(); it != a.syllables.rend(); ++it)
    g.syllables.push_back({it->factor, spec.inv(it->factor, it->value)});
  return g;
}

Word spell(const FreeProductSpec& spec, const NormalForm& g) {
  Word w;
  for (const auto& s : g.syllables) {
    Word p = spec.spelling(s.factor, s.value);
    w.insert(w.end(), p.begin(), p.end());
  }
  return w;
}

std::string format(const FreeProductSpec& spec, const NormalForm& g) {
  if (g.empty()) return "1";
  std::string out;
  for (const auto& s : g.syllables) {
    if (!out.empty()) out += " ";
    out += spec.element_name(s.factor, s.value);
  }
  return out;
}

bool is_weakly_cyclically_reduced(const FreeProductSpec& spec, const NormalForm& g) {
  if (g.size() <= 1) return g.size() == 1;
  const auto& a = g.syllables.back();
  const auto& b = g.syllables.front();
  return a.factor != b.factor || !spec.is_identity(a.factor, spec.mul(a.factor, a.value, b.value));
}

bool is_cyclically_reduced(const NormalForm& g) {
  return g.size() == 1 || (g.size() > 1 && g.syllables.front().factor != g.syllables.back().factor);
}

bool is_locally_geodesic(const FreeProductSpec& spec, const Word& w) {
  std::size_t i = 0;
  while (i < w.size()) {
    const int f = spec.factor_of(w[i]);
    std::size_t j = i;
    std::int64_t v = spec.identity(f);
    for (; j < w.size() && spec.factor_of(w[j]) == f; ++j) {
      v = spec.mul(f, v, spec.value_of(w[j]));
      if (spec.element_length(f, v) != j - i + 1) return false;
    }
    i = j;
  }
  return true;
}

FPReduction weakly_cyclically_reduce(const FreeProductSpec& spec, const NormalForm& g) {
  FPReduction r;
  if (g.empty()) {
    r.identity = true;
    return r;
  }
  std::size_t lo = 0, hi = g.size();
  while (hi - lo >= 2) {
    const auto& a = g[hi - 1];
    const auto& b = g[lo];
    if (a.factor != b.factor || !spec.is_identity(a.factor, spec.mul(a.factor, a.value, b.value))) break;
    ++lo;
    --hi;
  }
  r.core = slice(g, lo, hi);
  r.conjugator = slice(g, 0, lo);
  return r;
}

FPReduction weakly_cyclically_reduce(const FreeProductSpec& spec, const Word& w) {
  return weakly_cyclically_reduce(spec, normal_form(spec, w));
}

FPReduction cyclically_reduce(const FreeProductSpec& spec, const NormalForm& g) {
  FPReduction r = weakly_cyclically_reduce(spec, g);
  if (r.identity || is_cyclically_reduced(r.core)) return r;
  // core = g_1 (g_2 ... g_{l-1} (g_l g_1)) g_1^-1
  const Syllable first = r.core[0];
  const Syllable last = r.core.syllables.back();
  NormalForm core = slice(r.core, 1, r.core.size() - 1);
  core.syllables.push_back({first.factor, spec.mul(first.factor, last.value, first.value)});
  r.conjugator = multiply(spec, r.conjugator, NormalForm{{first}});
  r.core = std::move(core);
  return r;
}

StarSymmetrized symmetrize(const FreeProductSpec& spec, const std::vector<NormalForm>& relators) {
  StarSymmetrized out;
  std::vector<std::pair<NormalForm, StarSymmetrized::Origin>> all;
  for (std::size_t ri = 0; ri < relators.size(); ++ri) {
    auto cr = cyclically_reduce(spec, relators[ri]);
    if (cr.identity) throw std::invalid_argument("relator " + std::to_string(ri) + " is trivial in F");
    out.roots.push_back(cr.core);
    for (bool inverted : {false, true}) {
      const NormalForm base = inverted ? inverse(spec, cr.core) : cr.core;
      const std::size_t l = base.size();
      for (std::size_t j = 0; j < l; ++j) {
        NormalForm rot;
        rot.syllables.reserve(l + 1);
        for (std::size_t i = 0; i < l; ++i) rot.syllables.push_back(base[(j + i) % l]);
        const Syllable g1 = rot[0];
        all.emplace_back(rot, StarSymmetrized::Origin{ri, inverted, j, spec.identity(g1.factor), false});
        std::vector<std::int64_t> parts;
        if (spec.factors[static_cast<std::size_t>(g1.factor)].infinite) {
          const std::int64_t sg = g1.value < 0 ? -1 : 1;
          for (std::int64_t a = sg; a != g1.value; a += sg) parts.push_back(a);
        } else {
          for (std::int64_t a : spec.nontrivial_elements(g1.factor))
            if (a != g1.value) parts.push_back(a);
        }
        for (std::int64_t a : parts) {
          const std::int64_t b = spec.mul(g1.factor, spec.inv(g1.factor, a), g1.value);
          NormalForm s;
          if (l == 1) {
            s.syllables.push_back({g1.factor, spec.mul(g1.factor, b, a)});
          } else {
            s.syllables.reserve(l + 1);
            s.syllables.push_back({g1.factor, b});
            s.syllables.insert(s.syllables.end(), rot.syllables.begin() + 1, rot.syllables.end());
            s.syllables.push_back({g1.factor, a});
          }
          all.emplace_back(std::move(s), StarSymmetrized::Origin{ri, inverted, j, a, true});
        }
      }
    }
  }
  out.generated = all.size();
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [nf, o] : all) {
    if (!out.elements.empty() && out.elements.back() == nf) continue;
    out.elements.push_back(std::move(nf));
    out.origin.push_back(o);
  }
  return out;
}

StarSymmetrized symmetrize(const FreeProductSpec& spec, const std::vector<Word>& relators) {
  std::vector<NormalForm> nfs;
  nfs.reserve(relators.size());
  for (const auto& r : relators) nfs.push_back(normal_form(spec, r));
  return symmetrize(spec, nfs);
}

std::size_t star_piece_length(const NormalForm& r1, const NormalForm& r2) {
  const std::size_t n = std::min(r1.size(), r2.size());
  std::size_t m = 0;
  while (m < n && r1[m] == r2[m]) ++m;
  if (m == n) return m;
  return m + (r1[m].factor == r2[m].factor ? 1 : 0);
}

StarPower star_max_power(const NormalForm& r) {
  StarPower best;
  const std::size_t l = r.size();
  for (std::size_t d = 2; d <= l; ++d) {
    if (r[d - 1].factor == r[0].factor) continue;  // w must be cyclically reduced
    std::size_t J = d;
    while (J < l && r[J] == r[J - d]) ++J;
    for (std::size_t k = l / d; k >= 1; --k) {
      const std::size_t last = k * d - 1;
      if (last < J || (last == J && r[J].factor == r[d - 1].factor)) {
        if (k > best.exponent) best = {0, d, k};
        break;
      }
    }
  }
  return best;
}

namespace {

std::string ratio_name(Ratio l, std::optional<std::size_t> p) {
  return p ? "C'_*(" + l.str() + "," + std::to_string(*p) + ")" : "C'_*(" + l.str() + ")";
}

// Least period of a cyclic syllable sequence dividing its length.
std::size_t cyclic_period(const NormalForm& r) {
  const std::size_t l = r.size();
  for (std::size_t d = 1; d < l; ++d) {
    if (l % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < l && ok; ++i) ok = r[i] == r[i - d];
    if (ok) return d;
  }
  return l;
}

// Cyclic sequences of every r and r^-1, each written twice, over one text.
struct CyclicText {
  struct Seq {
    std::size_t relator;
    bool inverted;
    std::int32_t base;
    std::int32_t len;
  };
  std::vector<Seq> seqs;
  std::vector<std::int32_t> text;
  std::vector<Syllable> symbol;  // symbol id - 1 -> syllable
  std::vector<std::int32_t> seq_of;  // text position -> sequence
};

CyclicText cyclic_text(const FreeProductSpec& spec, const std::vector<NormalForm>& roots) {
  CyclicText ct;
  std::vector<NormalForm> forms;
  for (std::size_t ri = 0; ri < roots.size(); ++ri)
    for (bool inv : {false, true}) {
      forms.push_back(inv ? inverse(spec, roots[ri]) : roots[ri]);
      ct.seqs.push_back({ri, inv, 0, static_cast<std::int32_t>(roots[ri].size())});
    }
  for (const auto& f : forms) ct.symbol.insert(ct.symbol.end(), f.syllables.begin(), f.syllables.end());
  std::sort(ct.symbol.begin(), ct.symbol.end());
  ct.symbol.erase(std::unique(ct.symbol.begin(), ct.symbol.end()), ct.symbol.end());
  std::int32_t sep = -1;
  for (std::size_t k = 0; k < forms.size(); ++k) {
    ct.seqs[k].base = static_cast<std::int32_t>(ct.text.size());
    for (int rep = 0; rep < 2; ++rep)
      for (const auto& s : forms[k].syllables) {
        auto it = std::lower_bound(ct.symbol.begin(), ct.symbol.end(), s);
        ct.text.push_back(static_cast<std::int32_t>(it - ct.symbol.begin()) + 1);
        ct.seq_of.push_back(static_cast<std::int32_t>(k));
      }
    ct.text.push_back(sep--);
    ct.seq_of.push_back(static_cast<std::int32_t>(k));
  }
  return ct;
}

}  // namespace

StarReport check_classical_star(const FreeProductSpec& spec, const std::vector<Word>& relators, Ratio lambda,
                                const StarOptions& opt) {
  StarReport rep;
  std::vector<NormalForm> given;
  for (std::size_t ri = 0; ri < relators.size(); ++ri) {
    given.push_back(normal_form(spec, relators[ri]));
    auto cr = cyclically_reduce(spec, given.back());
    if (cr.identity) throw std::invalid_argument("relator " + std::to_string(ri) + " is trivial in F");
    rep.roots.push_back(cr.core);
  }
  if (!opt.symmetrize) {
    std::sort(given.begin(), given.end());
    given.erase(std::unique(given.begin(), given.end()), given.end());
    if (given != symmetrize(spec, rep.roots).elements) throw std::invalid_argument("relator set is not symmetrized");
  }
  SCReport& sc = rep.sc;
  sc.lambda = lambda;
  sc.p = opt.p;
  sc.condition = ratio_name(lambda, opt.p);
  sc.reduced.reason = "free product normal forms";
  sc.stats.cycles = rep.roots.size();
  for (std::size_t ri = 0; ri < rep.roots.size(); ++ri) {
    const std::size_t L = rep.roots[ri].size();
    sc.cycle_lengths.push_back(L);
    if (!lambda.below(1, L)) rep.short_relators.push_back(ri);
  }
  sc.cycle_max_piece.assign(rep.roots.size(), 0);
  if (!sc.cycle_lengths.empty()) {
    sc.stats.min_cycle = *std::min_element(sc.cycle_lengths.begin(), sc.cycle_lengths.end());
    sc.stats.max_cycle = *std::max_element(sc.cycle_lengths.begin(), sc.cycle_lengths.end());
  }

  const CyclicText ct = cyclic_text(spec, rep.roots);
  const SuffixArray sa(ct.text);
  auto syl = [&](std::int32_t pos) { return ct.symbol[static_cast<std::size_t>(ct.text[static_cast<std::size_t>(pos)] - 1)]; };
  auto where = [&](std::int32_t pos) {
    const auto& s = ct.seqs[static_cast<std::size_t>(ct.seq_of[static_cast<std::size_t>(pos)])];
    return StarPosition{s.relator, s.inverted, static_cast<std::size_t>(pos - s.base)};
  };
  auto len_at = [&](std::int32_t pos) { return ct.seqs[static_cast<std::size_t>(ct.seq_of[static_cast<std::size_t>(pos)])].len; };
  // Splits of t^e keep the sign of e, so Z syllables of opposite signs never
  // share a first syllable.
  auto key = [&](std::int32_t pos) {
    const Syllable s = syl(pos);
    const bool inf = spec.factors[static_cast<std::size_t>(s.factor)].infinite;
    return std::pair<int, int>{s.factor, inf ? (s.value < 0 ? -1 : 1) : 0};
  };

  std::vector<std::int32_t> pos;
  for (const auto& s : ct.seqs)
    for (std::int32_t i = 0; i < s.len; ++i) pos.push_back(s.base + i);
  rep.positions = pos.size();
  const auto& rank = sa.rank();
  std::sort(pos.begin(), pos.end(), [&](std::int32_t a, std::int32_t b) {
    auto ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    return rank[static_cast<std::size_t>(a + 1)] < rank[static_cast<std::size_t>(b + 1)];
  });

  // Piece for the elements starting at a and b, the lengths of the two
  // elements realising it, and whether a and b start identical elements.
  struct Cmp {
    std::int32_t len = 0;
    std::size_t la = 0, lb = 0;
    bool same = false;
  };
  auto compare = [&](std::int32_t a, std::int32_t b) {
    Cmp c;
    const auto ka = key(a), kb = key(b);
    const std::int32_t la = len_at(a), lb = len_at(b);
    c.la = static_cast<std::size_t>(la);
    c.lb = static_cast<std::size_t>(lb);
    if (ka.first != kb.first) return c;
    // A Z syllable t^e with |e| > |f| only reaches the first syllable t^f
    // through a split, one syllable longer than the rotation.
    const Syllable sa_ = syl(a), sb = syl(b);
    if (spec.factors[static_cast<std::size_t>(sa_.factor)].infinite) {
      if (std::abs(sa_.value) > std::abs(sb.value)) ++c.la;
      if (std::abs(sb.value) > std::abs(sa_.value)) ++c.lb;
    }
    c.len = 1;
    if (ka != kb) return c;
    const std::int32_t cap = std::min(la, lb) - 1;
    const std::int32_t m = std::min(sa.lce(a + 1, b + 1), cap);
    if (m == cap && la == lb && sa_ == sb) {
      c.same = true;
      c.len = 0;
      return c;
    }
    c.len = 1 + m;
    if (m < cap) {
      if (syl(a + 1 + m).factor == syl(b + 1 + m).factor) ++c.len;
      return c;
    }
    // The shorter element, split, ends in a syllable of its first factor
    // which meets the other element's next syllable. At equal lengths both
    // must be splits with a common first syllable.
    const bool a_short = la <= lb;
    const std::int32_t x = a_short ? a : b, y = a_short ? b : a;
    if (len_at(x) == 1 || syl(y + 1 + m).factor != syl(x).factor) return c;
    const Factor& F = spec.factors[static_cast<std::size_t>(sa_.factor)];
    bool ok;
    if (la != lb)
      ok = F.infinite ? std::abs(syl(x).value) >= 2 : F.order() >= 3;
    else
      ok = F.infinite ? std::min(std::abs(sa_.value), std::abs(sb.value)) >= 2 : F.order() >= 4;
    if (!ok) return c;
    ++c.len;
    (a_short ? c.la : c.lb) = static_cast<std::size_t>(len_at(x)) + 1;
    if (la == lb) (a_short ? c.lb : c.la) = static_cast<std::size_t>(len_at(y)) + 1;
    return c;
  };

  std::vector<std::int32_t> best(pos.size(), 0), partner(pos.size(), -1);
  std::vector<std::size_t> elen(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) elen[k] = static_cast<std::size_t>(len_at(pos[k]));
  // Caps differ between pairs, so a neighbour in sorted order is not always
  // the best partner; scan outwards while the common extension allows more.
  for (std::size_t k = 0; k < pos.size(); ++k)
    for (int dir : {1, -1})
      for (std::size_t t = k + static_cast<std::size_t>(dir); t < pos.size(); t += static_cast<std::size_t>(dir)) {
        const Cmp c = compare(pos[k], pos[t]);
        if (!c.same) {
          if (c.len > best[k]) best[k] = c.len, partner[k] = pos[t], elen[k] = c.la;
          if (c.len > best[t]) best[t] = c.len, partner[t] = pos[k], elen[t] = c.lb;
        }
        const std::int32_t bound = key(pos[k]) == key(pos[t]) ? 2 + sa.lce(pos[k] + 1, pos[t] + 1)
                                   : key(pos[k]).first == key(pos[t]).first ? 1 : 0;
        if (bound <= best[k]) break;
      }
  for (std::size_t k = 0; k < pos.size(); ++k) {
    const StarPosition at = where(pos[k]);
    const std::size_t piece = static_cast<std::size_t>(best[k]);
    sc.cycle_max_piece[at.relator] = std::max(sc.cycle_max_piece[at.relator], piece);
    if (piece > rep.max_piece) rep.max_piece = piece, rep.max_piece_at = at;
    const std::size_t L = elen[k];
    sc.stats.max_ratio = std::max(sc.stats.max_ratio, static_cast<double>(piece) / static_cast<double>(L));
    if (lambda.below(piece, L)) continue;
    if (sc.violations.size() >= opt.max_violations) {
      sc.violations_truncated = true;
      continue;
    }
    const StarPosition other = where(partner[k]);
    const NormalForm& r = rep.roots[at.relator];
    NormalForm seq = at.inverted ? inverse(spec, r) : r;
    NormalForm u;
    for (std::size_t i = 0; i < piece && i < seq.size(); ++i) u.syllables.push_back(seq[(at.offset + i) % seq.size()]);
    PieceViolation v;
    v.cycle = static_cast<int>(at.relator);
    v.cycle_length = L;
    v.offset = at.offset;
    v.piece = spell(spec, u);
    v.evidence = "syllables " + std::to_string(piece) + "/" + std::to_string(L) + (at.inverted ? " in the inverse" : "") +
                 "; shared with relator " + std::to_string(other.relator) + (other.inverted ? " inverted" : "") +
                 " at syllable " + std::to_string(other.offset) + (piece > u.size() ? "" : "; first syllable via splitting");
    sc.violations.push_back(std::move(v));
  }
  sc.stats.max_piece = rep.max_piece;

  for (std::size_t ri = 0; ri < rep.roots.size(); ++ri) {
    const auto& r = rep.roots[ri];
    if (r.size() < 2) continue;
    std::size_t d = cyclic_period(r);
    if (d == r.size()) continue;
    rep.proper_powers.push_back(ri);
    PowerViolation v;
    v.root = spell(spec, NormalForm{std::vector<Syllable>(r.syllables.begin(), r.syllables.begin() + static_cast<std::ptrdiff_t>(d))});
    v.exponent = r.size() / d;
    v.reason = "relator " + std::to_string(ri) + " is a proper power in F";
    sc.power_violations.push_back(std::move(v));
  }

  // Prefix powers. An exponent k >= 3 needs a run of period d through at
  // least 2d syllables; the element starts inside the run, or one syllable
  // before it when that syllable splits to the run's first syllable.
  auto exponent = [&](std::size_t l, std::size_t d, std::size_t J, const Syllable& at_J, const Syllable& at_d1) {
    std::size_t k = std::min(l, J + 1) / d;
    for (; k >= 1; --k) {
      const std::size_t last = k * d - 1;
      if (last < J || (last == J && at_J.factor == at_d1.factor)) return k;
    }
    return std::size_t{0};
  };
  for (const auto& s : ct.seqs) {
    const std::size_t l = static_cast<std::size_t>(s.len);
    auto g = [&](std::size_t j) { return syl(s.base + static_cast<std::int32_t>(j % l)); };
    // Three copies, so every cyclic run shorter than l appears whole.
    std::vector<std::int32_t> tri;
    for (int rep3 = 0; rep3 < 3; ++rep3) tri.insert(tri.end(), ct.text.begin() + s.base, ct.text.begin() + s.base + s.len);
    auto consider = [&](std::size_t i, std::size_t d, std::size_t J, std::size_t el) {
      const std::size_t k = exponent(el, d, std::min(J, el), g(i + J), g(i + d - 1));
      if (k <= rep.max_power && !(opt.p && k > *opt.p)) return;
      const StarPosition at{s.relator, s.inverted, i % l};
      if (k > rep.max_power) rep.max_power = k, rep.max_power_period = d, rep.max_power_at = at;
      if (opt.p && k > *opt.p && sc.power_violations.size() < opt.max_violations) {
        PowerViolation v;
        NormalForm w;
        for (std::size_t t = 0; t < d; ++t) w.syllables.push_back(t == 0 && el > l ? g(i + d) : g(i + t));
        v.root = spell(spec, w);
        v.exponent = k;
        v.reason = "relator " + std::to_string(s.relator) + (s.inverted ? " inverted" : "") + " at syllable " +
                   std::to_string(i % l) + " begins with a " + std::to_string(k) + "-th power";
        sc.power_violations.push_back(std::move(v));
      }
    };
    for (const Run& run : find_runs(tri, 2)) {
      const std::size_t d = run.period;
      if (d < 2 || d >= l) continue;
      const std::size_t end = run.start + run.length;
      for (std::size_t i = run.start; i < run.start + d; ++i) consider(i, d, end - i, l);
      // The element one syllable earlier, when that syllable splits off the
      // run's first syllable.
      if (run.start == 0) continue;
      const std::size_t i = run.start - 1;
      const Syllable gi = g(i), b = g(i + d);
      const Factor& F = spec.factors[static_cast<std::size_t>(gi.factor)];
      const bool splits = gi.factor == b.factor && gi.value != b.value &&
                          (!F.infinite || ((gi.value < 0) == (b.value < 0) && std::abs(b.value) < std::abs(gi.value)));
      if (splits) consider(i, d, end - i, l + 1);
    }
  }
  sc.stats.max_open_power = rep.max_power;

  if (!rep.short_relators.empty())
    sc.notes.push_back(std::to_string(rep.short_relators.size()) + " relators with |r|_* <= 1/lambda");
  const bool ok = sc.violations.empty() && sc.power_violations.empty() && rep.short_relators.empty();
  sc.verdict = ok ? Verdict::pass : Verdict::fail;
  return rep;
}

json to_json(const StarReport& r, const FreeProductSpec& spec) {
  json j = to_json(r.sc, spec.alphabet);
  j["positions"] = r.positions;
  j["short_relators"] = r.short_relators;
  j["proper_powers"] = r.proper_powers;
  j["max_piece_syllables"] = r.max_piece;
  j["max_piece_at"] = {{"relator", r.max_piece_at.relator}, {"inverted", r.max_piece_at.inverted}, {"offset", r.max_piece_at.offset}};
  j["max_power"] = {{"exponent", r.max_power}, {"period", r.max_power_period}, {"relator", r.max_power_at.relator},
                    {"inverted", r.max_power_at.inverted}, {"offset", r.max_power_at.offset}};
  json roots = json::array();
  for (const auto& nf : r.roots) roots.push_back(format(spec, nf));
  j["roots"] = roots;
  return j;
}

ToyInstance toy_test_group(std::size_t blocks, int n, std::size_t first_block) {
  if (blocks < 1) throw std::invalid_argument("toy_test_group: need at least one block");
  if (n < 2) throw std::invalid_argument("toy_test_group: n must be at least 2");
  ToyInstance out;
  out.spec = FreeProductSpec::cyclic({{"h", 0}, {"p", 3}, {"q", 3}, {"t", n}, {"x", n}, {"z", n}});
  const Alphabet& A = out.spec.alphabet;
  auto L = [&](const char* s) { return letter(A.index(s)); };
  const Letter h = L("h"), t = L("t"), x = L("x"), z = L("z");
  const Word g1{h, x, -h, -x}, g2{h, z, -h, -z};
  const std::vector<Letter> targets{h, L("q"), t, x, z};
  std::size_t k = first_block;
  for (Letter s : targets) {
    Word r{-s};
    std::vector<std::size_t> used;
    for (std::size_t j = 0; j < blocks; ++j, ++k) {
      for (Letter c : tm_block(k, 1, 2)) {
        const Word& g = c == 1 ? g1 : g2;
        r.insert(r.end(), g.begin(), g.end());
      }
      r.push_back(j % 2 == 0 ? t : -t);
      used.push_back(k);
    }
    out.relators.push_back(std::move(r));
    out.block_lengths.push_back(std::move(used));
  }
  return out;
}

}  // namespace sct
