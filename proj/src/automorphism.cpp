#include "sct/automorphism.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sct {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

bool component_is_reduced(const LabelledGraph& g, const std::vector<int>& verts) {
  for (int v : verts) {
    const auto& out = g.out(v);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j)
        if (g.label(out[i]) == g.label(out[j])) return false;
  }
  return true;
}

// Colour refinement on the given vertices; colours are comparable across
// every vertex handled by the same call.
std::vector<int> refine_colours(const LabelledGraph& g, const std::vector<int>& verts, int max_rounds = 12) {
  std::vector<int> colour(g.num_vertices(), -1);
  {
    std::map<std::vector<int>, int> ids;
    for (int v : verts) {
      std::vector<int> sig;
      for (int e : g.out(v)) sig.push_back(g.label(e) * 2 + (g.inv(e) == e ? 1 : 0));
      std::sort(sig.begin(), sig.end());
      auto it = ids.emplace(sig, static_cast<int>(ids.size())).first;
      colour[v] = it->second;
    }
  }
  std::size_t classes = 0;
  for (int round = 0; round < max_rounds; ++round) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(colour);
    for (int v : verts) {
      std::vector<int> sig{colour[v]};
      std::vector<std::pair<int, int>> nb;
      for (int e : g.out(v)) nb.emplace_back(g.label(e), colour[g.terminus(e)]);
      std::sort(nb.begin(), nb.end());
      for (auto& [l, c] : nb) {
        sig.push_back(l);
        sig.push_back(c);
      }
      next[v] = ids.emplace(sig, static_cast<int>(ids.size())).first->second;
    }
    colour.swap(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return colour;
}

// Extension of a -> b along labels; buffers are reused between calls.
class Extender {
 public:
  explicit Extender(const LabelledGraph& g) : g_(g), vmap_(g.num_vertices(), -1), vused_(g.num_vertices(), 0) {}

  // Deterministic extension for reduced components.
  bool extend_reduced(int a, int b, std::size_t comp_size, Automorphism* out) {
    clear();
    std::vector<int> queue{a};
    set(a, b);
    std::vector<std::pair<int, int>> dart_pairs;
    bool ok = true;
    for (std::size_t qi = 0; qi < queue.size() && ok; ++qi) {
      int x = queue[qi], y = vmap_[x];
      if (g_.degree(x) != g_.degree(y)) {
        ok = false;
        break;
      }
      for (int e : g_.out(x)) {
        int f = g_.follow(y, g_.label(e));
        if (f < 0 || ((g_.inv(e) == e) != (g_.inv(f) == f))) {
          ok = false;
          break;
        }
        int t = g_.terminus(e), u = g_.terminus(f);
        if (vmap_[t] < 0) {
          if (vused_[u]) {
            ok = false;
            break;
          }
          set(t, u);
          queue.push_back(t);
        } else if (vmap_[t] != u) {
          ok = false;
          break;
        }
        dart_pairs.emplace_back(e, f);
      }
    }
    if (ok && queue.size() != comp_size) ok = false;
    if (ok && out) {
      out->vertex.assign(g_.num_vertices(), -1);
      out->dart.assign(g_.num_darts(), -1);
      for (int x : queue) out->vertex[x] = vmap_[x];
      for (auto& [e, f] : dart_pairs) out->dart[e] = f;
    }
    return ok;
  }

  // Backtracking extension for components with repeated labels at a vertex.
  void extend_general(int a, int b, const std::vector<int>& comp_a, std::size_t limit,
                      const std::function<bool(const Automorphism&)>& emit) {
    std::vector<int> order;
    {
      std::vector<char> seen(g_.num_vertices(), 0);
      std::vector<int> q{a};
      seen[a] = 1;
      for (std::size_t i = 0; i < q.size(); ++i)
        for (int e : g_.out(q[i])) {
          order.push_back(e);
          int t = g_.terminus(e);
          if (!seen[t]) {
            seen[t] = 1;
            q.push_back(t);
          }
        }
    }
    std::vector<int> dmap(g_.num_darts(), -1);
    std::vector<char> dused(g_.num_darts(), 0);
    std::vector<int> vmap(g_.num_vertices(), -1);
    std::vector<char> vused(g_.num_vertices(), 0);
    vmap[a] = b;
    vused[b] = 1;
    std::size_t found = 0;
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (stop) return;
      if (k == order.size()) {
        for (int x : comp_a)
          if (vmap[x] < 0 || g_.degree(x) != g_.degree(vmap[x])) return;
        Automorphism phi;
        phi.vertex.assign(g_.num_vertices(), -1);
        phi.dart = dmap;
        for (int x : comp_a) phi.vertex[x] = vmap[x];
        ++found;
        if (!emit(phi) || found >= limit) stop = true;
        return;
      }
      int e = order[k];
      if (dmap[e] >= 0) {
        rec(k + 1);
        return;
      }
      int x = g_.origin(e), y = vmap[x];
      for (int f : g_.out(y)) {
        if (dused[f] || g_.label(f) != g_.label(e) || ((g_.inv(e) == e) != (g_.inv(f) == f))) continue;
        int t = g_.terminus(e), u = g_.terminus(f);
        bool new_vertex = false;
        if (vmap[t] < 0) {
          if (vused[u]) continue;
          vmap[t] = u;
          vused[u] = 1;
          new_vertex = true;
        } else if (vmap[t] != u) {
          continue;
        }
        int ei = g_.inv(e), fi = g_.inv(f);
        bool inv_set = false;
        if (ei != e) {
          if (dmap[ei] >= 0 || dused[fi]) {
            if (new_vertex) {
              vmap[t] = -1;
              vused[u] = 0;
            }
            continue;
          }
          dmap[ei] = fi;
          dused[fi] = 1;
          inv_set = true;
        }
        dmap[e] = f;
        dused[f] = 1;
        rec(k + 1);
        dmap[e] = -1;
        dused[f] = 0;
        if (inv_set) {
          dmap[ei] = -1;
          dused[fi] = 0;
        }
        if (new_vertex) {
          vmap[t] = -1;
          vused[u] = 0;
        }
        if (stop) return;
      }
    };
    rec(0);
  }

 private:
  const LabelledGraph& g_;
  std::vector<int> vmap_;
  std::vector<char> vused_;
  std::vector<int> touched_;
  void set(int x, int y) {
    vmap_[x] = y;
    vused_[y] = 1;
    touched_.push_back(x);
    touched_.push_back(-1 - y);
  }
  void clear() {
    for (int t : touched_) {
      if (t >= 0)
        vmap_[t] = -1;
      else
        vused_[-1 - t] = 0;
    }
    touched_.clear();
  }
};

constexpr std::size_t kBacktrackLimit = 64;

int rarest_vertex(const std::vector<int>& verts, const std::vector<int>& colour) {
  std::map<int, int> count;
  for (int v : verts) ++count[colour[v]];
  int best = verts.front();
  for (int v : verts)
    if (count[colour[v]] < count[colour[best]]) best = v;
  return best;
}

// Calls visit(phi) for each automorphism of the component (identity first).
void for_each_automorphism(const LabelledGraph& g, const std::vector<int>& verts, std::size_t limit,
                           const std::function<bool(const Automorphism&)>& visit) {
  if (verts.empty()) return;
  auto colour = refine_colours(g, verts);
  int a = rarest_vertex(verts, colour);
  std::vector<int> cands{a};
  for (int v : verts)
    if (v != a && colour[v] == colour[a]) cands.push_back(v);
  Extender ext(g);
  const bool reduced = component_is_reduced(g, verts);
  if (!reduced && verts.size() > kBacktrackLimit)
    throw std::runtime_error("automorphism search: non-reduced component too large for backtracking");
  std::size_t count = 0;
  for (int b : cands) {
    if (count >= limit) return;
    if (reduced) {
      Automorphism phi;
      if (ext.extend_reduced(a, b, verts.size(), &phi)) {
        ++count;
        if (!visit(phi)) return;
      }
    } else {
      bool go = true;
      ext.extend_general(a, b, verts, limit - count, [&](const Automorphism& phi) {
        ++count;
        go = visit(phi);
        return go;
      });
      if (!go) return;
    }
  }
}

}  // namespace

bool Automorphism::is_identity() const {
  for (std::size_t v = 0; v < vertex.size(); ++v)
    if (vertex[v] >= 0 && vertex[v] != static_cast<int>(v)) return false;
  for (std::size_t e = 0; e < dart.size(); ++e)
    if (dart[e] >= 0 && dart[e] != static_cast<int>(e)) return false;
  return true;
}

std::optional<CycleComponent> as_cycle(const LabelledGraph& g, const std::vector<int>& verts) {
  if (verts.empty()) return std::nullopt;
  for (int v : verts) {
    if (g.degree(v) != 2) return std::nullopt;
    for (int e : g.out(v))
      if (g.inv(e) == e) return std::nullopt;
  }
  CycleComponent c;
  int v0 = verts.front();
  int d0 = g.out(v0)[0];
  if (g.label(d0) < 0 && g.label(g.out(v0)[1]) > 0) d0 = g.out(v0)[1];
  int v = v0, d = d0;
  do {
    c.vertices.push_back(v);
    c.darts.push_back(d);
    c.label.push_back(g.label(d));
    v = g.terminus(d);
    const auto& out = g.out(v);
    d = (out[0] == g.inv(d)) ? out[1] : out[0];
    if (c.vertices.size() > verts.size()) return std::nullopt;
  } while (!(v == v0 && d == d0));
  if (c.vertices.size() != verts.size()) return std::nullopt;
  return c;
}

AutomorphismGroup automorphisms(const LabelledGraph& g, int component, std::size_t max_elements) {
  auto comps = components(g);
  if (component < 0 || component >= static_cast<int>(comps.count()))
    throw std::out_of_range("automorphisms: no such component");
  AutomorphismGroup grp;
  grp.component = component;
  grp.vertices = comps.vertices[component];
  grp.order = 0;
  bool stopped = false;
  for_each_automorphism(g, grp.vertices, std::numeric_limits<std::size_t>::max(), [&](const Automorphism& phi) {
    ++grp.order;
    if (grp.elements.size() < max_elements)
      grp.elements.push_back(phi);
    else
      stopped = true;
    return true;
  });
  grp.complete = !stopped;
  // Keep the identity in front.
  for (std::size_t i = 0; i < grp.elements.size(); ++i)
    if (grp.elements[i].is_identity()) {
      std::swap(grp.elements[0], grp.elements[i]);
      break;
    }
  // Greedy generating set: add elements not yet in the generated subgroup.
  if (grp.complete && grp.elements.size() <= 512) {
    std::vector<Automorphism> closure{grp.elements.front()};
    auto key = [&](const Automorphism& a) { return a.vertex; };
    std::map<std::vector<int>, int> in_closure{{key(closure[0]), 0}};
    for (std::size_t i = 1; i < grp.elements.size(); ++i) {
      if (in_closure.count(key(grp.elements[i]))) continue;
      grp.generators.push_back(grp.elements[i]);
      for (std::size_t k = 0; k < closure.size(); ++k) {
        for (auto& s : grp.generators) {
          Automorphism c = compose(s, closure[k]);
          if (in_closure.emplace(key(c), static_cast<int>(closure.size())).second) closure.push_back(c);
        }
      }
    }
  }
  return grp;
}

namespace {

std::optional<Automorphism> isomorphism_between(const LabelledGraph& g, const std::vector<int>& A,
                                                const std::vector<int>& B) {
  if (A.size() != B.size() || A.empty()) return std::nullopt;
  std::vector<int> both(A);
  both.insert(both.end(), B.begin(), B.end());
  auto colour = refine_colours(g, both);
  int a = rarest_vertex(A, colour);
  const bool reduced = component_is_reduced(g, A) && component_is_reduced(g, B);
  if (!reduced && A.size() > kBacktrackLimit)
    throw std::runtime_error("isomorphism search: non-reduced component too large for backtracking");
  Extender ext(g);
  for (int b : B) {
    if (colour[b] != colour[a]) continue;
    if (reduced) {
      Automorphism phi;
      if (ext.extend_reduced(a, b, A.size(), &phi)) return phi;
    } else {
      std::optional<Automorphism> res;
      ext.extend_general(a, b, A, 1, [&](const Automorphism& phi) {
        res = phi;
        return false;
      });
      if (res) return res;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Automorphism> component_isomorphism(const LabelledGraph& g, int ca, int cb) {
  auto comps = components(g);
  return isomorphism_between(g, comps.vertices.at(ca), comps.vertices.at(cb));
}

bool is_label_preserving_automorphism(const LabelledGraph& g, const Automorphism& phi) {
  if (static_cast<int>(phi.vertex.size()) != g.num_vertices() || static_cast<int>(phi.dart.size()) != g.num_darts())
    return false;
  std::vector<char> vhit(g.num_vertices(), 0), dhit(g.num_darts(), 0);
  for (int e = 0; e < g.num_darts(); ++e) {
    int f = phi.dart[e];
    if (f < 0) {
      if (phi.vertex[g.origin(e)] >= 0) return false;
      continue;
    }
    if (dhit[f]++) return false;
    if (g.label(f) != g.label(e)) return false;
    if (phi.vertex[g.origin(e)] != g.origin(f) || phi.vertex[g.terminus(e)] != g.terminus(f)) return false;
    if (phi.dart[g.inv(e)] != g.inv(f)) return false;
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    int w = phi.vertex[v];
    if (w < 0) continue;
    if (vhit[w]++) return false;
    if (g.degree(w) != g.degree(v)) return false;
  }
  return true;
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
  Automorphism r;
  r.vertex.assign(g.vertex.size(), -1);
  r.dart.assign(g.dart.size(), -1);
  for (std::size_t v = 0; v < g.vertex.size(); ++v)
    if (g.vertex[v] >= 0) r.vertex[v] = f.vertex[g.vertex[v]];
  for (std::size_t e = 0; e < g.dart.size(); ++e)
    if (g.dart[e] >= 0) r.dart[e] = f.dart[g.dart[e]];
  return r;
}

OrbitPartition vertex_orbits(const LabelledGraph& g) {
  OrbitPartition op;
  auto comps = components(g);
  const int nc = static_cast<int>(comps.count());
  op.cls.assign(g.num_vertices(), -1);
  op.iso_class.assign(nc, -1);
  int next_cls = 0, next_iso = 0;

  std::vector<std::optional<CycleComponent>> cyc(nc);
  std::map<Word, std::vector<int>> cycle_groups;
  std::vector<int> general;
  for (int c = 0; c < nc; ++c) {
    cyc[c] = as_cycle(g, comps.vertices[c]);
    if (cyc[c]) {
      Word f = canonical_necklace(cyc[c]->label);
      Word b = canonical_necklace(inverse(cyc[c]->label));
      cycle_groups[std::min(f, b)].push_back(c);
    } else {
      general.push_back(c);
    }
  }

  for (auto& [key, group] : cycle_groups) {
    const auto& R = *cyc[group.front()];
    const std::size_t L = R.label.size();
    const std::size_t d = primitive_root(R.label).root.size();
    UnionFind uf(static_cast<int>(d));
    // A reflection v_i -> v_{j-i} exists iff the reversed label is a rotation.
    Word rev = inverse(R.label);
    if (canonical_necklace(rev) == canonical_necklace(R.label)) {
      // rotate(rev, s) == label  <=>  j = L - s.
      std::size_t lr_rev = least_rotation(rev), lr_lab = least_rotation(R.label);
      std::size_t s = (lr_rev + L - lr_lab) % L;
      std::size_t j = (L - s) % L;
      for (std::size_t i = 0; i < d; ++i) uf.unite(static_cast<int>(i), static_cast<int>(((j + L - i) % L) % d));
    }
    std::vector<int> local(d);
    std::map<int, int> root_id;
    for (std::size_t i = 0; i < d; ++i) {
      int r = uf.find(static_cast<int>(i));
      auto it = root_id.emplace(r, next_cls + static_cast<int>(root_id.size())).first;
      local[i] = it->second;
    }
    next_cls += static_cast<int>(root_id.size());
    const std::size_t lr_R = least_rotation(R.label);
    const Word necklace_R = canonical_necklace(R.label);
    for (int c : group) {
      const auto& C = *cyc[c];
      op.iso_class[c] = next_iso;
      if (canonical_necklace(C.label) == necklace_R) {
        // rotate(C, lr_C) = rotate(R, lr_R): R position i <-> C position i - lr_R + lr_C.
        std::size_t lr_C = least_rotation(C.label);
        for (std::size_t i = 0; i < L; ++i)
          op.cls[C.vertices[(i + L - lr_R + lr_C) % L]] = local[i % d];
      } else {
        // Traverse C backwards: vertex v'_k = v_{-k}, label inverse(C).
        Word back = inverse(C.label);
        std::size_t lr_C = least_rotation(back);
        for (std::size_t i = 0; i < L; ++i) {
          std::size_t k = (i + L - lr_R + lr_C) % L;
          op.cls[C.vertices[(L - k) % L]] = local[i % d];
        }
      }
    }
    if (group.size() > 1) op.identical_components = true;
    ++next_iso;
  }

  // General components: joint refinement gives comparable invariants.
  std::vector<int> all;
  for (int c : general) all.insert(all.end(), comps.vertices[c].begin(), comps.vertices[c].end());
  auto colour = refine_colours(g, all);
  std::map<std::vector<int>, std::vector<int>> by_invariant;
  for (int c : general) {
    std::vector<int> inv;
    for (int v : comps.vertices[c]) inv.push_back(colour[v]);
    std::sort(inv.begin(), inv.end());
    by_invariant[inv].push_back(c);
  }
  for (auto& [inv, group] : by_invariant) {
    std::vector<int> pending(group);
    while (!pending.empty()) {
      int rep = pending.front();
      const auto& verts = comps.vertices[rep];
      UnionFind uf(g.num_vertices());
      for_each_automorphism(g, verts, std::numeric_limits<std::size_t>::max(), [&](const Automorphism& phi) {
        for (int v : verts) uf.unite(v, phi.vertex[v]);
        return true;
      });
      std::map<int, int> root_id;
      for (int v : verts) {
        auto it = root_id.emplace(uf.find(v), next_cls + static_cast<int>(root_id.size())).first;
        op.cls[v] = it->second;
      }
      next_cls += static_cast<int>(root_id.size());
      op.iso_class[rep] = next_iso;
      std::vector<int> rest;
      for (std::size_t i = 1; i < pending.size(); ++i) {
        int c = pending[i];
        auto iso = isomorphism_between(g, verts, comps.vertices[c]);
        if (!iso) {
          rest.push_back(c);
          continue;
        }
        op.identical_components = true;
        op.iso_class[c] = next_iso;
        for (int v : verts) op.cls[iso->vertex[v]] = op.cls[v];
      }
      ++next_iso;
      pending.swap(rest);
    }
  }
  op.count = static_cast<std::size_t>(next_cls);
  return op;
}

}  // namespace sct
