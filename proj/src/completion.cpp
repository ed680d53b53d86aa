#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "sct/freeprod.hpp"
#include "sct/graph_io.hpp"

namespace sct {

using nlohmann::json;

namespace {

// Union-find whose roots are the least members.
struct MinUnionFind {
  std::vector<int> parent;
  explicit MinUnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

// Dart labels rewritten over the spec alphabet, matched by generator name.
std::vector<Letter> spec_labels(const FreeProductSpec& spec, const LabelledGraph& g) {
  std::vector<int> gen(g.alphabet().size());
  for (std::size_t i = 0; i < gen.size(); ++i) {
    gen[i] = spec.alphabet.index(g.alphabet().name(static_cast<int>(i)));
    if (gen[i] < 0) throw std::invalid_argument("generator '" + g.alphabet().name(static_cast<int>(i)) + "' is in no factor");
  }
  std::vector<Letter> out(static_cast<std::size_t>(g.num_darts()));
  for (int e = 0; e < g.num_darts(); ++e) {
    Letter x = g.label(e);
    out[static_cast<std::size_t>(e)] = letter(gen[static_cast<std::size_t>(generator_of(x))], x < 0);
  }
  return out;
}

FPReductionResult reduce_impl(const FreeProductSpec& spec, const LabelledGraph& g,
                              const std::vector<std::pair<int, int>>& glue) {
  const int V = g.num_vertices(), D = g.num_darts();
  const auto lab = spec_labels(spec, g);
  FPReductionResult res;
  MinUnionFind uf(V);
  for (auto [a, b] : glue)
    if (uf.unite(a, b)) res.trace.push_back({a, b, "attach"});

  for (;;) {
    ++res.rounds;
    for (bool again = true; again;) {
      again = false;
      std::map<std::pair<int, Letter>, int> next;
      for (int e = 0; e < D; ++e) {
        const int o = uf.find(g.origin(e)), t = uf.find(g.terminus(e));
        auto [it, fresh] = next.try_emplace({o, lab[static_cast<std::size_t>(e)]}, t);
        if (fresh) continue;
        const int u = uf.find(it->second);
        if (u != t && uf.unite(u, t)) {
          res.trace.push_back({u, t, "fold"});
          again = true;
        }
      }
    }

    // Classes of vertices joined by a path whose label is trivial in F.
    MinUnionFind T(V);
    for (bool merged = true; merged;) {
      merged = false;
      for (int f = 0; f < static_cast<int>(spec.factors.size()); ++f) {
        const bool infinite = spec.factors[static_cast<std::size_t>(f)].infinite;
        const std::int64_t order = static_cast<std::int64_t>(spec.factors[static_cast<std::size_t>(f)].order());
        std::vector<std::vector<std::pair<int, std::int64_t>>> adj(static_cast<std::size_t>(V));
        bool any = false;
        for (int e = 0; e < D; ++e) {
          const Letter x = lab[static_cast<std::size_t>(e)];
          if (spec.factor_of(x) != f) continue;
          const int a = T.find(uf.find(g.origin(e))), b = T.find(uf.find(g.terminus(e)));
          adj[static_cast<std::size_t>(a)].emplace_back(b, spec.value_of(x));
          any = true;
        }
        if (!any) continue;
        const std::int64_t bound = V + 1;
        std::vector<std::pair<int, int>> pending;
        for (int s = 0; s < V; ++s) {
          if (adj[static_cast<std::size_t>(s)].empty() || T.find(s) != s) continue;
          std::unordered_set<std::int64_t> seen;
          auto key = [&](int c, std::int64_t v) { return static_cast<std::int64_t>(c) * (infinite ? 2 * bound + 1 : order) + (infinite ? v + bound : v); };
          std::deque<std::pair<int, std::int64_t>> q{{s, spec.identity(f)}};
          seen.insert(key(s, spec.identity(f)));
          while (!q.empty()) {
            auto [c, v] = q.front();
            q.pop_front();
            if (c != s && spec.is_identity(f, v)) pending.emplace_back(s, c);
            for (auto [d, x] : adj[static_cast<std::size_t>(c)]) {
              const std::int64_t w = spec.mul(f, v, x);
              if (infinite && (w > bound || w < -bound)) continue;
              if (seen.insert(key(d, w)).second) q.emplace_back(d, w);
            }
          }
        }
        for (auto [a, b] : pending) merged |= T.unite(a, b);
      }
    }

    bool changed = false;
    std::map<std::pair<int, Letter>, int> first;
    for (int e = 0; e < D; ++e) {
      const int o = uf.find(g.origin(e));
      auto [it, fresh] = first.try_emplace({T.find(o), lab[static_cast<std::size_t>(e)]}, o);
      if (fresh) continue;
      const int u = uf.find(it->second);
      if (u != o && uf.unite(u, o)) {
        res.trace.push_back({u, o, "trivial path"});
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<int> id(static_cast<std::size_t>(V), -1);
  int count = 0;
  for (int v = 0; v < V; ++v)
    if (uf.find(v) == v) id[static_cast<std::size_t>(v)] = count++;
  res.graph = LabelledGraph(spec.alphabet);
  res.graph.add_vertices(count);
  res.vertex_map.resize(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) res.vertex_map[static_cast<std::size_t>(v)] = id[static_cast<std::size_t>(uf.find(v))];
  res.dart_map.assign(static_cast<std::size_t>(D), -1);
  LabelledGraph& out = res.graph;
  for (int e = 0; e < D; ++e) {
    if (res.dart_map[static_cast<std::size_t>(e)] >= 0) continue;
    const int o = res.vertex_map[static_cast<std::size_t>(g.origin(e))];
    const int t = res.vertex_map[static_cast<std::size_t>(g.terminus(e))];
    const Letter x = lab[static_cast<std::size_t>(e)];
    int d = out.follow(o, x);
    if (d < 0) {
      if (g.inv(e) == e) d = out.add_self_inverse_dart(o, x);
      else d = x > 0 ? out.add_edge(o, t, x) : out.inv(out.add_edge(t, o, -x));
    }
    res.dart_map[static_cast<std::size_t>(e)] = d;
    res.dart_map[static_cast<std::size_t>(g.inv(e))] = out.inv(d);
  }
  for (const auto& [name, v] : g.marks) out.marks[name] = res.vertex_map[static_cast<std::size_t>(v)];
  return res;
}

// Adds a copy of Cay(G_f, S_f), or a line of 2r+1 edges for an infinite
// factor; returns the vertex of element 1 (line: position 0 is at base + r).
int add_factor_copy(const FreeProductSpec& spec, LabelledGraph& H, int f, std::size_t r, bool standalone) {
  const Factor& F = spec.factors[static_cast<std::size_t>(f)];
  if (F.infinite) {
    const int len = static_cast<int>(2 * r + (standalone ? 0 : 1));
    const int base = H.add_vertices(len + 1);
    for (int i = 0; i < len; ++i) H.add_edge(base + i, base + i + 1, letter(F.letters[0]));
    return base + static_cast<int>(r);
  }
  const int n = F.group.order();
  const int base = H.add_vertices(n);
  for (int a = 0; a < n; ++a)
    for (std::size_t j = 0; j < F.gens.size(); ++j)
      H.add_edge(base + a, base + F.group(a, F.gens[j]), letter(F.letters[j]));
  return base;
}

std::vector<std::vector<int>> copy_index(const FreeProductSpec& spec, const std::vector<AttachedCopy>& copies, int V) {
  std::vector<std::vector<int>> idx(spec.factors.size(), std::vector<int>(static_cast<std::size_t>(V), -1));
  for (std::size_t k = 0; k < copies.size(); ++k)
    for (int v : copies[k].vertices)
      if (v >= 0) idx[static_cast<std::size_t>(copies[k].factor)][static_cast<std::size_t>(v)] = static_cast<int>(k);
  return idx;
}

std::string star_name(Ratio l, std::optional<std::size_t> p, std::optional<std::size_t> n) {
  if (p && n) return "C'_*n(" + l.str() + "," + std::to_string(*p) + ") n=" + std::to_string(*n);
  if (p) return "C'_*(" + l.str() + "," + std::to_string(*p) + ")";
  return "C'_*(" + l.str() + ")";
}

}  // namespace

FPReductionResult reduce_over_F(const FreeProductSpec& spec, const LabelledGraph& g) { return reduce_impl(spec, g, {}); }

bool AttachedCopy::contains(int v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }

std::vector<AttachedCopy> attached_copies(const FreeProductSpec& spec, const LabelledGraph& g) {
  const auto lab = spec_labels(spec, g);
  const int V = g.num_vertices();
  const auto comps = components(g);
  std::vector<AttachedCopy> out;
  for (int f = 0; f < static_cast<int>(spec.factors.size()); ++f) {
    const Factor& F = spec.factors[static_cast<std::size_t>(f)];
    std::vector<char> seen(static_cast<std::size_t>(V), 0);
    for (int v0 = 0; v0 < V; ++v0) {
      if (seen[static_cast<std::size_t>(v0)]) continue;
      bool touches = false;
      for (int e : g.out(v0)) touches |= spec.factor_of(lab[static_cast<std::size_t>(e)]) == f;
      if (!touches) continue;
      AttachedCopy c;
      c.factor = f;
      c.component = comps.of[static_cast<std::size_t>(v0)];
      // Element (finite) or position (line) of each vertex, relative to v0.
      std::map<int, std::int64_t> elem{{v0, spec.identity(f)}};
      std::deque<int> q{v0};
      seen[static_cast<std::size_t>(v0)] = 1;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int e : g.out(u)) {
          const Letter x = lab[static_cast<std::size_t>(e)];
          if (spec.factor_of(x) != f) continue;
          const int w = g.terminus(e);
          const std::int64_t val = spec.mul(f, elem[u], spec.value_of(x));
          auto [it, fresh] = elem.try_emplace(w, val);
          if (!fresh && it->second != val && c.problem.empty()) {
            c.embedded = false;
            c.problem = "vertex " + std::to_string(w) + " is reached as " + spec.element_name(f, it->second) + " and as " +
                        spec.element_name(f, val);
          }
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            q.push_back(w);
          }
        }
      }
      if (F.infinite) {
        std::vector<std::pair<std::int64_t, int>> line;
        for (auto [v, p] : elem) line.emplace_back(p, v);
        std::sort(line.begin(), line.end());
        for (std::size_t i = 1; i < line.size() && c.embedded; ++i)
          if (line[i].first == line[i - 1].first) {
            c.embedded = false;
            c.problem = "two vertices at one position of the line";
          }
        for (auto [p, v] : line) c.vertices.push_back(v);
      } else {
        c.vertices.assign(static_cast<std::size_t>(F.group.order()), -1);
        for (auto [v, a] : elem) {
          auto& slot = c.vertices[static_cast<std::size_t>(a)];
          if (slot >= 0 && c.embedded) {
            c.embedded = false;
            c.problem = "element " + spec.element_name(f, a) + " at vertices " + std::to_string(slot) + " and " + std::to_string(v);
          }
          if (slot < 0) slot = v;
        }
        for (int a = 0; a < F.group.order() && c.embedded; ++a)
          if (c.vertices[static_cast<std::size_t>(a)] < 0) {
            c.embedded = false;
            c.problem = "element " + spec.element_name(f, a) + " is missing";
          }
        for (int a = 0; a < F.group.order() && c.embedded; ++a)
          for (std::size_t j = 0; j < F.gens.size() && c.embedded; ++j) {
            const int u = c.vertices[static_cast<std::size_t>(a)];
            const int want = c.vertices[static_cast<std::size_t>(F.group(a, F.gens[j]))];
            bool found = false;
            for (int e : g.out(u))
              found |= lab[static_cast<std::size_t>(e)] == letter(F.letters[j]) && g.terminus(e) == want;
            if (!found) {
              c.embedded = false;
              c.problem = "vertex " + std::to_string(u) + " lacks the edge " + spec.alphabet.name(F.letters[j]);
            }
          }
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

CompletionCertificate complete(const FreeProductSpec& spec, const LabelledGraph& g, std::optional<std::size_t> truncation) {
  if (!spec.finite() && !truncation)
    throw std::invalid_argument("completion over an infinite cyclic factor needs a truncation radius");
  const auto lab = spec_labels(spec, g);
  const int V = g.num_vertices();
  CompletionCertificate cert;
  cert.original = g;
  cert.truncation = spec.finite() ? std::nullopt : truncation;
  cert.certifiable = spec.finite();
  const std::size_t r = truncation.value_or(0);

  LabelledGraph H(spec.alphabet);
  H.add_vertices(V);
  for (int e = 0; e < g.num_darts(); ++e) {
    if (g.inv(e) == e) H.add_self_inverse_dart(g.origin(e), lab[static_cast<std::size_t>(e)]);
    else if (e < g.inv(e)) H.add_edge(g.origin(e), g.terminus(e), lab[static_cast<std::size_t>(e)]);
  }
  std::vector<std::pair<int, int>> glue;
  std::vector<bool> used(spec.factors.size(), false);
  for (int e = 0; e < g.num_darts(); ++e) {
    if (e > g.inv(e)) continue;
    int x = g.origin(e), y = g.terminus(e);
    Letter s = lab[static_cast<std::size_t>(e)];
    if (s < 0) std::swap(x, y), s = -s;
    const int f = spec.factor_of(s);
    used[static_cast<std::size_t>(f)] = true;
    const int one = add_factor_copy(spec, H, f, r, false);
    const bool inf = spec.factors[static_cast<std::size_t>(f)].infinite;
    glue.emplace_back(one, x);
    glue.emplace_back(inf ? one + 1 : one - static_cast<int>(spec.identity(f)) + static_cast<int>(spec.value_of(s)), y);
  }
  for (int f = 0; f < static_cast<int>(spec.factors.size()); ++f)
    if (!used[static_cast<std::size_t>(f)]) {
      add_factor_copy(spec, H, f, r, true);
      cert.added_factors.push_back(f);
    }
  for (auto& [a, b] : glue) std::swap(a, b);  // original vertices first in the trace
  cert.reduction = reduce_impl(spec, H, glue);
  cert.completed = cert.reduction.graph;
  cert.vertex_map.assign(cert.reduction.vertex_map.begin(), cert.reduction.vertex_map.begin() + V);
  cert.copies = attached_copies(spec, cert.completed);
  const auto idx = copy_index(spec, cert.copies, cert.completed.num_vertices());
  cert.edge_copy.resize(static_cast<std::size_t>(g.num_darts()));
  for (int e = 0; e < g.num_darts(); ++e)
    cert.edge_copy[static_cast<std::size_t>(e)] =
        idx[static_cast<std::size_t>(spec.factor_of(lab[static_cast<std::size_t>(e)]))]
           [static_cast<std::size_t>(cert.vertex_map[static_cast<std::size_t>(g.origin(e))])];
  return cert;
}

json to_json(const CompletionCertificate& c) {
  json j;
  j["original"] = graph_to_json(c.original);
  j["completed"] = graph_to_json(c.completed);
  json copies = json::array();
  for (const auto& a : c.copies)
    copies.push_back({{"factor", a.factor}, {"component", a.component}, {"vertices", a.vertices},
                      {"embedded", a.embedded}, {"problem", a.problem}});
  j["attached"] = copies;
  j["edge_attachment"] = c.edge_copy;
  j["vertex_map"] = c.vertex_map;
  j["added_factors"] = c.added_factors;
  json trace = json::array();
  for (const auto& m : c.reduction.trace) trace.push_back({{"a", m.a}, {"b", m.b}, {"reason", m.reason}});
  j["reduction_trace"] = trace;
  j["truncation"] = c.truncation ? json(*c.truncation) : json(nullptr);
  j["certifiable"] = c.certifiable;
  return j;
}

bool same_graph(const LabelledGraph& a, const LabelledGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_darts() != b.num_darts()) return false;
  auto edges = [](const LabelledGraph& g) {
    std::vector<std::tuple<int, std::string, int>> out;
    for (int e = 0; e < g.num_darts(); ++e) out.emplace_back(g.origin(e), g.alphabet().format_letter(g.label(e)), g.terminus(e));
    std::sort(out.begin(), out.end());
    return out;
  };
  return edges(a) == edges(b);
}

bool is_completed(const FreeProductSpec& spec, const LabelledGraph& g) {
  if (!spec.finite()) return false;
  return same_graph(complete(spec, g).completed, g);
}

CylinderResult cylinder_free(const FreeProductSpec& spec, const LabelledGraph& g, std::size_t max_automorphisms) {
  CylinderResult res;
  auto red = is_reduced(g);
  if (!red.holds) throw std::invalid_argument("cylinder_free: graph is not folded: " + red.reason);
  res.copies = attached_copies(spec, g);
  for (const auto& c : res.copies) {
    if (!c.embedded) throw std::invalid_argument("cylinder_free: attached copy is not embedded: " + c.problem);
    if (spec.factors[static_cast<std::size_t>(c.factor)].infinite) res.certified = false;
  }
  if (spec.finite() && !is_completed(spec, g)) throw std::invalid_argument("cylinder_free: graph is not completed");
  const auto comps = components(g);
  for (int ci = 0; ci < static_cast<int>(comps.count()); ++ci) {
    std::vector<int> here;
    for (std::size_t k = 0; k < res.copies.size(); ++k)
      if (res.copies[k].component == ci) here.push_back(static_cast<int>(k));
    if (here.size() < 2) continue;
    auto group = automorphisms(g, ci, max_automorphisms);
    res.exhaustive &= group.complete;
    std::vector<std::vector<int>> sorted(res.copies.size());
    for (int k : here) {
      sorted[static_cast<std::size_t>(k)] = res.copies[static_cast<std::size_t>(k)].vertices;
      std::sort(sorted[static_cast<std::size_t>(k)].begin(), sorted[static_cast<std::size_t>(k)].end());
    }
    for (const auto& phi : group.elements) {
      if (phi.is_identity()) continue;
      ++res.automorphisms_checked;
      std::vector<int> kept;
      for (int k : here) {
        const int v = sorted[static_cast<std::size_t>(k)].front();
        if (std::binary_search(sorted[static_cast<std::size_t>(k)].begin(), sorted[static_cast<std::size_t>(k)].end(),
                               phi.vertex[static_cast<std::size_t>(v)]))
          kept.push_back(k);
      }
      for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j) {
          const auto& A = sorted[static_cast<std::size_t>(kept[i])];
          const auto& B = sorted[static_cast<std::size_t>(kept[j])];
          std::vector<int> common;
          std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(common));
          if (!common.empty()) continue;
          res.cylinder_free = false;
          res.component = ci;
          res.witness = phi;
          res.copy1 = kept[i];
          res.copy2 = kept[j];
          return res;
        }
    }
  }
  return res;
}

StarGraphReport check_star_graphical(const FreeProductSpec& spec, const LabelledGraph& g, Ratio lambda,
                                     const StarGraphOptions& opt) {
  auto diag = validate(g);
  if (!diag.ok()) throw std::invalid_argument("invalid graph: " + diag.problems.front());
  StarGraphReport rep;
  SCReport& sc = rep.sc;
  sc.lambda = lambda;
  sc.p = opt.p;
  sc.n = opt.p ? opt.n : std::nullopt;
  sc.condition = star_name(lambda, sc.p, sc.n);
  const auto lab = spec_labels(spec, g);
  bool conclusive = true;

  sc.reduced = is_reduced(g);
  if (!sc.reduced.holds) {
    sc.verdict = Verdict::fail;
    rep.completed = false;
    sc.notes.push_back("graph is not folded, so it is not its own completion");
    return rep;
  }
  rep.copies = attached_copies(spec, g);
  for (const auto& c : rep.copies)
    if (!c.embedded) {
      rep.embedding_witness = c;
      rep.completed = false;
      sc.verdict = Verdict::fail;
      sc.notes.push_back("attached Cayley graph of factor " + spec.factors[static_cast<std::size_t>(c.factor)].name +
                         " is not embedded: " + c.problem);
      return rep;
    }
  if (spec.finite()) {
    rep.completed = is_completed(spec, g);
    if (!rep.completed) {
      sc.verdict = Verdict::fail;
      sc.notes.push_back("graph differs from its completion");
      return rep;
    }
  } else {
    if (!opt.allow_truncated) throw std::invalid_argument("infinite cyclic factors: completion can only be truncated");
    conclusive = false;
    sc.notes.push_back("infinite cyclic copies are truncated lines; the verdict is not certified");
  }

  auto all = simple_cycles(g, opt.cycle_length_cap, opt.cycle_count_cap);
  sc.cycles_exhaustive = all.exhaustive;
  sc.cycle_length_cap = all.length_cap;
  conclusive &= all.exhaustive;
  CycleEnumeration cycles;
  cycles.exhaustive = all.exhaustive;
  cycles.length_cap = all.length_cap;
  std::vector<Word> labels;
  for (auto& c : all.cycles) {
    Word w;
    for (int e : c) w.push_back(lab[static_cast<std::size_t>(e)]);
    if (normal_form(spec, w).empty()) {
      ++rep.trivial_cycles;
      continue;
    }
    cycles.max_length = std::max(cycles.max_length, c.size());
    cycles.cycles.push_back(c);
    labels.push_back(std::move(w));
  }
  auto orbits = vertex_orbits(g);
  sc.readings_disagree = orbits.identical_components;
  PieceProfile prof;
  if (!cycles.cycles.empty()) {
    try {
      prof = piece_profile(g, cycles, orbits, opt.pieces);
    } catch (const std::runtime_error& e) {
      sc.verdict = Verdict::inconclusive;
      sc.notes.push_back(e.what());
      return rep;
    }
  }
  sc.piece_cap = prof.cap;
  sc.pieces_exact = prof.exact;
  sc.stats.cycles = cycles.cycles.size();
  for (std::size_t ci = 0; ci < cycles.cycles.size(); ++ci) {
    const Word& w = labels[ci];
    const std::size_t L = w.size();
    std::vector<std::size_t> piece(L);
    for (std::size_t i = 0; i < L; ++i) {
      // Longest locally geodesic subword from offset i.
      std::size_t m = 0;
      int f = -1;
      std::int64_t val = 0;
      std::size_t run = 0;
      while (m < L) {
        const Letter x = w[(i + m) % L];
        const int fx = spec.factor_of(x);
        if (fx != f) f = fx, val = spec.identity(f), run = 0;
        val = spec.mul(f, val, spec.value_of(x));
        if (spec.element_length(f, val) != ++run) break;
        ++m;
      }
      piece[i] = std::min<std::size_t>(static_cast<std::size_t>(prof.longest[ci][i]), m);
    }
    const std::size_t mx = *std::max_element(piece.begin(), piece.end());
    sc.cycle_lengths.push_back(L);
    sc.cycle_max_piece.push_back(mx);
    sc.stats.max_piece = std::max(sc.stats.max_piece, mx);
    sc.stats.min_cycle = ci == 0 ? L : std::min(sc.stats.min_cycle, L);
    sc.stats.max_cycle = std::max(sc.stats.max_cycle, L);
    sc.stats.max_ratio = std::max(sc.stats.max_ratio, static_cast<double>(mx) / static_cast<double>(L));
    if (lambda.below(prof.cap, L) && static_cast<std::size_t>(*std::max_element(prof.longest[ci].begin(), prof.longest[ci].end())) >= prof.cap)
      conclusive = false;
    if (lambda.below(mx, L)) continue;
    for (std::size_t i = 0; i < L; ++i) {
      if (lambda.below(piece[i], L)) continue;
      if (L > 1 && piece[(i + L - 1) % L] >= piece[i] + 1) continue;
      if (sc.violations.size() >= opt.max_violations) {
        sc.violations_truncated = true;
        break;
      }
      PieceViolation v;
      v.cycle = static_cast<int>(ci);
      v.cycle_length = L;
      v.offset = i;
      for (std::size_t t = 0; t < piece[i]; ++t) {
        v.path1.push_back(cycles.cycles[ci][(i + t) % L]);
        v.piece.push_back(g.label(cycles.cycles[ci][(i + t) % L]));
      }
      const int partner = prof.partner[ci][i];
      if (partner >= 0) v.path2 = read_path(g, partner, v.piece);
      v.evidence = "locally geodesic piece of length " + std::to_string(piece[i]) + " on a cycle of length " + std::to_string(L);
      sc.violations.push_back(std::move(v));
    }
  }

  if (sc.p) {
    std::size_t cap = opt.power_search_cap ? opt.power_search_cap : std::max<std::size_t>(16, 2 * all.max_length);
    auto an = analyse_powers(g, cap, 2000000);
    sc.powers_exhaustive = an.exhaustive;
    if (!an.exhaustive) {
      conclusive = false;
      sc.notes.push_back("power search bounded by walk length " + std::to_string(an.walk_cap));
    }
    sc.power_violations = power_violations(an, *sc.p, sc.n, &sc.stats);
    try {
      rep.cylinder = cylinder_free(spec, g);
      if (!rep.cylinder->exhaustive) conclusive = false;
      if (!rep.cylinder->cylinder_free) sc.notes.push_back("graph is not cylinder-free");
    } catch (const std::invalid_argument& e) {
      conclusive = false;
      sc.notes.push_back(e.what());
    }
  }

  const bool cyl_fail = rep.cylinder && !rep.cylinder->cylinder_free;
  if (!sc.violations.empty() || !sc.power_violations.empty() || cyl_fail)
    sc.verdict = Verdict::fail;
  else
    sc.verdict = conclusive ? Verdict::pass : Verdict::inconclusive;
  return rep;
}

json to_json(const StarGraphReport& r, const Alphabet& a) {
  json j = to_json(r.sc, a);
  j["completed"] = r.completed;
  j["attached_copies"] = r.copies.size();
  j["trivial_cycles_skipped"] = r.trivial_cycles;
  if (r.embedding_witness)
    j["embedding_witness"] = {{"factor", r.embedding_witness->factor},
                              {"vertices", r.embedding_witness->vertices},
                              {"problem", r.embedding_witness->problem}};
  if (r.cylinder) {
    json c = {{"cylinder_free", r.cylinder->cylinder_free},
              {"automorphisms_checked", r.cylinder->automorphisms_checked},
              {"exhaustive", r.cylinder->exhaustive},
              {"certified", r.cylinder->certified}};
    if (!r.cylinder->cylinder_free)
      c["witness"] = {{"component", r.cylinder->component},
                      {"vertex_map", r.cylinder->witness.vertex},
                      {"copy1", r.cylinder->copy1},
                      {"copy2", r.cylinder->copy2}};
    j["cylinder"] = c;
  }
  return j;
}

}  // namespace sct
