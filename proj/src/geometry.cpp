#include "sct/geometry.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace sct {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

using Perm = std::vector<int>;

Perm perm_inverse(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return r;
}

bool perm_identity(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

// Tracks the image of every point under the word, letter by letter.
Perm word_image(const std::vector<Perm>& gens, const std::vector<Perm>& invs, const Word& w) {
  const std::size_t k = gens.empty() ? 0 : gens[0].size();
  Perm cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  for (Letter x : w) {
    const Perm& g = x > 0 ? gens[static_cast<std::size_t>(generator_of(x))] : invs[static_cast<std::size_t>(generator_of(x))];
    for (auto& c : cur) c = g[static_cast<std::size_t>(c)];
  }
  return cur;
}

// Random homomorphisms to small symmetric groups with non-abelian image.
std::vector<std::vector<Perm>> find_quotients(const Presentation& pres, std::uint64_t seed, std::size_t want) {
  std::vector<std::vector<Perm>> out;
  const std::size_t n = pres.alphabet.size();
  if (n == 0) return out;
  std::mt19937_64 rng(seed);
  std::size_t total = 0;
  for (const auto& r : pres.relators) total += r.size();
  const std::size_t budget_letters = 30000000;
  for (int k : {3, 4, 5, 6, 7, 8}) {
    if (out.size() >= want) break;
    std::size_t tries = std::max<std::size_t>(1000, budget_letters / (4 * (total + 1) * static_cast<std::size_t>(k)));
    std::set<std::vector<Perm>> seen;
    for (std::size_t t = 0; t < tries && out.size() < want; ++t) {
      std::vector<Perm> gens(n), invs(n);
      for (std::size_t g = 0; g < n; ++g) {
        gens[g].resize(static_cast<std::size_t>(k));
        std::iota(gens[g].begin(), gens[g].end(), 0);
        std::shuffle(gens[g].begin(), gens[g].end(), rng);
        invs[g] = perm_inverse(gens[g]);
      }
      bool ok = true;
      for (const auto& r : pres.relators)
        if (!perm_identity(word_image(gens, invs, r))) {
          ok = false;
          break;
        }
      if (!ok) continue;
      // Abelian images add nothing to the abelianization.
      bool abelian = true;
      for (std::size_t g = 0; g < n && abelian; ++g)
        for (std::size_t h = g + 1; h < n && abelian; ++h)
          for (int i = 0; i < k && abelian; ++i)
            abelian = gens[g][static_cast<std::size_t>(gens[h][static_cast<std::size_t>(i)])] ==
                      gens[h][static_cast<std::size_t>(gens[g][static_cast<std::size_t>(i)])];
      if (abelian || !seen.insert(gens).second) continue;
      out.push_back(gens);
    }
  }
  return out;
}

}  // namespace

BallContext::BallContext(const Presentation& pres, std::size_t radius, std::size_t vertex_cap, std::uint64_t seed)
    : solver_(pres), ab_(pres), quotients_(find_quotients(pres, seed, 4)) {
  const std::size_t n = pres.alphabet.size();
  for (const auto& q : quotients_) {
    std::vector<int> inv;
    for (const auto& g : q) {
      auto gi = perm_inverse(g);
      inv.insert(inv.end(), gi.begin(), gi.end());
    }
    inverse_perms_.push_back(std::move(inv));
    points_ += q.empty() ? 0 : q[0].size();
  }
  std::vector<Invariant> step_inv;
  for (std::size_t s = 0; s < 2 * n; ++s) step_inv.push_back(invariant({letter(static_cast<int>(s / 2), s % 2 == 1)}));

  ball_.radius = radius;
  ball_.generators = n;
  auto add = [&](Word w, int d, Invariant inv, std::uint64_t k) {
    int id = static_cast<int>(ball_.rep.size());
    index_[k].push_back(id);
    ball_.rep.push_back(std::move(w));
    ball_.dist.push_back(d);
    ball_.adj.emplace_back(2 * n, -1);
    vinv_.push_back(std::move(inv));
    return id;
  };
  {
    Invariant e = invariant({});
    std::uint64_t k = key(e);
    add({}, 0, std::move(e), k);
  }
  std::size_t layer_begin = 0;
  for (std::size_t d = 0; d <= radius; ++d) {
    const std::size_t layer_end = ball_.rep.size();
    for (std::size_t v = layer_begin; v < layer_end; ++v) {
      for (std::size_t s = 0; s < 2 * n; ++s) {
        if (ball_.adj[v][s] != -1) continue;
        Letter x = letter(static_cast<int>(s / 2), s % 2 == 1);
        Word u = ball_.rep[v];
        u.push_back(x);
        Invariant inv = multiply(vinv_[v], step_inv[s]);
        std::uint64_t k = key(inv);
        int c = locate_keyed(k, u, std::max(static_cast<int>(d) - 1, 0), static_cast<int>(d) + 1);
        if (c == -1) {
          if (d == radius) continue;
          if (ball_.rep.size() >= vertex_cap) {
            ball_.complete = false;
            continue;
          }
          c = add(std::move(u), static_cast<int>(d) + 1, std::move(inv), k);
        }
        const std::size_t back = s ^ 1u;
        if (ball_.adj[static_cast<std::size_t>(c)][back] != -1 && ball_.adj[static_cast<std::size_t>(c)][back] != static_cast<int>(v))
          throw std::logic_error("cayley_ball: inconsistent adjacency");
        ball_.adj[v][s] = c;
        ball_.adj[static_cast<std::size_t>(c)][back] = static_cast<int>(v);
      }
    }
    layer_begin = layer_end;
  }
}

BallContext::Invariant BallContext::invariant(const Word& w) const {
  Invariant r;
  r.ab = ab_.image(w);
  std::size_t off = 0;
  for (std::size_t qi = 0; qi < quotients_.size(); ++qi) {
    const auto& q = quotients_[qi];
    const std::size_t k = q[0].size();
    std::vector<int> pts(k);
    std::iota(pts.begin(), pts.end(), 0);
    for (Letter x : w) {
      const std::size_t g = static_cast<std::size_t>(generator_of(x));
      for (auto& p : pts)
        p = x > 0 ? q[g][static_cast<std::size_t>(p)] : inverse_perms_[qi][g * k + static_cast<std::size_t>(p)];
    }
    for (int p : pts) r.perm.push_back(p + static_cast<int>(off));
    off += k;
  }
  return r;
}

BallContext::Invariant BallContext::multiply(const Invariant& x, const Invariant& y) const {
  Invariant r;
  r.ab.resize(x.ab.size());
  for (std::size_t i = 0; i < x.ab.size(); ++i) r.ab[i] = x.ab[i] + y.ab[i];
  r.perm.resize(x.perm.size());
  for (std::size_t i = 0; i < x.perm.size(); ++i) r.perm[i] = y.perm[static_cast<std::size_t>(x.perm[i])];
  return r;
}

BallContext::Invariant BallContext::invert(const Invariant& x) const {
  Invariant r;
  r.ab.resize(x.ab.size());
  for (std::size_t i = 0; i < x.ab.size(); ++i) r.ab[i] = -x.ab[i];
  r.perm.resize(x.perm.size());
  for (std::size_t i = 0; i < x.perm.size(); ++i) r.perm[static_cast<std::size_t>(x.perm[i])] = static_cast<int>(i);
  return r;
}

std::uint64_t BallContext::key(const Invariant& x) const {
  std::uint64_t h = 0x51ed270b27a1c0d3ull;
  for (auto v : ab_.reduce(x.ab)) h = mix(h, static_cast<std::uint64_t>(v));
  for (int p : x.perm) h = mix(h, static_cast<std::uint64_t>(p));
  return h;
}

int BallContext::locate_keyed(std::uint64_t k, const Word& w, int lo, int hi) const {
  auto it = index_.find(k);
  if (it == index_.end()) return -1;
  for (int c : it->second) {
    int d = ball_.dist[static_cast<std::size_t>(c)];
    if (d < lo || (hi >= 0 && d > hi)) continue;
    if (solver_.is_trivial(concat(w, inverse(ball_.rep[static_cast<std::size_t>(c)])))) return c;
  }
  return -1;
}

int BallContext::locate(const Word& w, int lo, int hi) const { return locate_keyed(key(w), w, lo, hi); }

CayleyBall cayley_ball(const Presentation& pres, std::size_t radius, std::size_t vertex_cap) {
  return BallContext(pres, radius, vertex_cap).ball();
}

std::vector<int> RelatorCopy::inside() const {
  std::vector<int> out;
  for (int v : vertices)
    if (v >= 0) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RelatorEmbedding embed_relators(const BallContext& ctx) {
  const CayleyBall& B = ctx.ball();
  const auto& rels = ctx.presentation().relators;
  if (!B.complete) throw std::invalid_argument("embed_relators: ball is incomplete");
  RelatorEmbedding out;
  const int V = static_cast<int>(B.size());

  // Maximal run of a copy inside the ball, starting at base_vertex in position pos.
  struct Arc {
    int base_vertex = -1;
    std::size_t pos = 0;
    std::vector<int> verts;
  };

  for (std::size_t ri = 0; ri < rels.size(); ++ri) {
    const Word& r = rels[ri];
    const std::size_t L = r.size();
    out.max_diameter = std::max(out.max_diameter, L / 2);
    const Word rho = primitive_root(r).root;
    const std::size_t per = rho.size(), k = L / per;

    // Copies inside the ball: read r from every vertex.
    for (int x = 0; x < V; ++x) {
      std::vector<int> vs(L + 1);
      vs[0] = x;
      bool inside = true;
      for (std::size_t i = 0; i < L && inside; ++i) {
        vs[i + 1] = B.step(vs[i], r[i]);
        inside = vs[i + 1] != -1;
      }
      if (!inside) continue;
      if (vs[L] != x) throw std::logic_error("embed_relators: relator does not close in the ball");
      int m = x;
      for (std::size_t t = 0; t < k; ++t) m = std::min(m, vs[t * per]);
      if (m != x) continue;
      vs.pop_back();
      std::vector<int> sorted = vs;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        out.notes.push_back("relator " + std::to_string(ri + 1) + " copy at vertex " + std::to_string(x) +
                            " is not injective on vertices");
      out.copies.push_back({static_cast<int>(ri), std::move(vs), true});
    }

    // Maximal arcs of copies that leave the ball.
    std::vector<Arc> arcs;
    for (int x = 0; x < V; ++x) {
      for (std::size_t j = 0; j < L; ++j) {
        if (B.step(x, inverse(r[(j + L - 1) % L])) != -1) continue;
        Arc a;
        a.pos = j;
        a.verts.push_back(x);
        for (std::size_t i = 0; i + 1 < L; ++i) {
          int nx = B.step(a.verts.back(), r[(j + i) % L]);
          if (nx == -1) break;
          a.verts.push_back(nx);
        }
        a.base_vertex = x;
        arcs.push_back(std::move(a));
      }
    }
    // Link each arc to the next arc of its copy. Subwords of length <= |r|/2
    // are geodesic, so a gap between two arcs in the ball has length <= 2R,
    // except for at most one gap per copy, which needs no link.
    std::unordered_map<std::uint64_t, std::size_t> arc_at;  // (vertex, pos) -> arc
    auto ap = [&](int v, std::size_t pos) { return static_cast<std::uint64_t>(v) * L + pos; };
    for (std::size_t a = 0; a < arcs.size(); ++a) arc_at[ap(arcs[a].base_vertex, arcs[a].pos)] = a;
    std::vector<BallContext::Invariant> letter_inv;
    for (Letter x : r) letter_inv.push_back(ctx.invariant({x}));
    std::vector<std::size_t> parent(arcs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    const std::size_t max_gap = std::min(L - 1, 2 * B.radius);
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const int e = arcs[a].verts.back();
      const std::size_t pe = (arcs[a].pos + arcs[a].verts.size() - 1) % L;
      if (arcs[a].verts.size() == L) continue;
      Word w = B.rep[static_cast<std::size_t>(e)];
      auto inv = ctx.vertex_invariant(e);
      const int de = B.dist[static_cast<std::size_t>(e)];
      for (std::size_t g = 1; g <= max_gap; ++g) {
        const std::size_t q = (pe + g - 1) % L;
        w.push_back(r[q]);
        inv = ctx.multiply(inv, letter_inv[q]);
        if (g == 1) continue;
        int c = ctx.locate_keyed(ctx.key(inv), w, std::max(0, de - static_cast<int>(g)), de + static_cast<int>(g));
        if (c < 0) continue;
        auto it = arc_at.find(ap(c, (pe + g) % L));
        if (it == arc_at.end()) throw std::logic_error("embed_relators: re-entry is not an arc start");
        parent[find(a)] = find(it->second);
        break;
      }
    }
    std::map<std::size_t, std::size_t> copy_of;
    std::vector<RelatorCopy> found;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      auto [it, fresh] = copy_of.try_emplace(find(a), found.size());
      if (fresh) found.push_back({static_cast<int>(ri), std::vector<int>(L, -1), false});
      auto& vs = found[it->second].vertices;
      for (std::size_t i = 0; i < arcs[a].verts.size(); ++i) {
        std::size_t p = (arcs[a].pos + i) % L;
        if (vs[p] != -1 && vs[p] != arcs[a].verts[i])
          out.notes.push_back("relator " + std::to_string(ri + 1) + ": conflicting arcs in one copy");
        vs[p] = arcs[a].verts[i];
      }
    }
    // A proper power is found once per shift by its root.
    std::set<std::vector<int>> distinct;
    for (auto& c : found) {
      std::vector<int> best = c.vertices;
      for (std::size_t t = 1; t < k; ++t) {
        std::vector<int> rot(c.vertices.begin() + static_cast<std::ptrdiff_t>(t * per), c.vertices.end());
        rot.insert(rot.end(), c.vertices.begin(), c.vertices.begin() + static_cast<std::ptrdiff_t>(t * per));
        best = std::min(best, rot);
      }
      if (distinct.insert(best).second) out.partial.push_back(std::move(c));
    }
  }
  return out;
}

ConeOffBall coneoff_ball(const BallContext& ctx, const RelatorEmbedding& rel) {
  const CayleyBall& B = ctx.ball();
  ConeOffBall c;
  c.ctx = &ctx;
  c.relators = &rel;
  c.D = std::max<std::size_t>(1, rel.max_diameter);
  c.adj.assign(B.size(), {});
  for (std::size_t v = 0; v < B.size(); ++v)
    for (int u : B.adj[v])
      if (u >= 0) c.adj[v].push_back(u);
  std::size_t cayley = 0;
  for (const auto& a : c.adj) cayley += a.size();
  auto clique = [&](const RelatorCopy& cp) {
    auto in = cp.inside();
    for (int a : in)
      for (int b : in)
        if (a != b) c.adj[static_cast<std::size_t>(a)].push_back(b);
  };
  for (const auto& cp : rel.copies) clique(cp);
  for (const auto& cp : rel.partial) clique(cp);
  std::size_t total = 0;
  for (auto& a : c.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    total += a.size();
  }
  std::size_t base = 0;
  for (std::size_t v = 0; v < B.size(); ++v) {
    std::vector<int> cay;
    for (int u : B.adj[v])
      if (u >= 0) cay.push_back(u);
    std::sort(cay.begin(), cay.end());
    cay.erase(std::unique(cay.begin(), cay.end()), cay.end());
    base += cay.size();
  }
  (void)cayley;
  c.clique_edges = (total - base) / 2;

  // Edges leave the ball from vertices missing a Cayley neighbour and from
  // vertices on copies that leave the ball.
  std::vector<int> edge;
  std::vector<bool> on(B.size(), false);
  for (std::size_t v = 0; v < B.size(); ++v)
    for (int u : B.adj[v])
      if (u < 0) on[v] = true;
  for (const auto& cp : rel.partial)
    for (int v : cp.vertices)
      if (v >= 0) on[static_cast<std::size_t>(v)] = true;
  for (std::size_t v = 0; v < B.size(); ++v)
    if (on[v]) edge.push_back(static_cast<int>(v));
  c.exit.assign(B.size(), -1);
  std::deque<int> q;
  for (int v : edge) {
    c.exit[static_cast<std::size_t>(v)] = 1;
    q.push_back(v);
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int u : c.adj[static_cast<std::size_t>(v)])
      if (c.exit[static_cast<std::size_t>(u)] == -1) {
        c.exit[static_cast<std::size_t>(u)] = c.exit[static_cast<std::size_t>(v)] + 1;
        q.push_back(u);
      }
  }
  // A ball with nothing outside (finite group) is never left.
  for (auto& e : c.exit)
    if (e == -1) e = 1 << 28;
  return c;
}

std::size_t ConeOffBall::exit_bound(int x, int y) const {
  return static_cast<std::size_t>(exit[static_cast<std::size_t>(x)] + exit[static_cast<std::size_t>(y)]);
}

std::vector<int> ConeOffBall::bfs(int src, int max_depth) const {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> q{src};
  dist[static_cast<std::size_t>(src)] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (max_depth >= 0 && dist[static_cast<std::size_t>(v)] >= max_depth) continue;
    for (int u : adj[static_cast<std::size_t>(v)])
      if (dist[static_cast<std::size_t>(u)] == -1) {
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push_back(u);
      }
  }
  return dist;
}

std::vector<int> ConeOffBall::geodesic(int x, int y) const {
  auto d = bfs(y);
  if (d[static_cast<std::size_t>(x)] < 0) return {};
  std::vector<int> path{x};
  int cur = x;
  while (cur != y) {
    for (int u : adj[static_cast<std::size_t>(cur)])
      if (d[static_cast<std::size_t>(u)] == d[static_cast<std::size_t>(cur)] - 1) {
        cur = u;
        break;
      }
    path.push_back(cur);
  }
  return path;
}

namespace {

// Multi-source BFS distances, stopping at max_depth.
std::vector<int> bfs_from(const ConeOffBall& c, const std::vector<int>& srcs, int max_depth) {
  std::vector<int> dist(c.adj.size(), -1);
  std::deque<int> q;
  for (int s : srcs)
    if (dist[static_cast<std::size_t>(s)] == -1) {
      dist[static_cast<std::size_t>(s)] = 0;
      q.push_back(s);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (dist[static_cast<std::size_t>(v)] >= max_depth) continue;
    for (int u : c.adj[static_cast<std::size_t>(v)])
      if (dist[static_cast<std::size_t>(u)] == -1) {
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push_back(u);
      }
  }
  return dist;
}

}  // namespace

int triangle_slimness(const ConeOffBall& cball, const std::vector<int>& a, const std::vector<int>& b,
                      const std::vector<int>& c) {
  int worst = 0;
  const std::vector<int>* sides[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    const auto& s = *sides[i];
    std::vector<int> others = *sides[(i + 1) % 3];
    others.insert(others.end(), sides[(i + 2) % 3]->begin(), sides[(i + 2) % 3]->end());
    int depth = static_cast<int>(s.size());
    auto d = bfs_from(cball, others, depth);
    for (int p : s) {
      int x = d[static_cast<std::size_t>(p)];
      worst = std::max(worst, x < 0 ? depth + 1 : x);
    }
  }
  return worst;
}

namespace {

// Walk from x to the source of d along decreasing distance, least index first.
std::vector<int> descend(const ConeOffBall& c, const std::vector<int>& d, int x) {
  std::vector<int> path{x};
  int cur = x;
  while (d[static_cast<std::size_t>(cur)] > 0) {
    for (int u : c.adj[static_cast<std::size_t>(cur)])
      if (d[static_cast<std::size_t>(u)] == d[static_cast<std::size_t>(cur)] - 1) {
        cur = u;
        break;
      }
    path.push_back(cur);
  }
  return path;
}

}  // namespace

SlimnessReport sample_slimness(const ConeOffBall& cball, std::size_t samples, std::uint64_t seed,
                               std::size_t max_attempts) {
  const auto& B = cball.ctx->ball();
  if (!B.complete) throw std::invalid_argument("sample_slimness: ball is incomplete");
  SlimnessReport rep;
  rep.samples_requested = samples;
  if (max_attempts == 0) max_attempts = 200 * samples + 1000;
  int top = *std::max_element(cball.exit.begin(), cball.exit.end());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, B.size() - 1);
  auto ex = [&](int v) { return cball.exit[static_cast<std::size_t>(v)]; };
  std::set<std::array<int, 3>> seen;
  // x is uniform; y and z are uniform among the vertices whose distance to x
  // is within the exit bound.
  while (rep.trusted < samples && rep.attempts < max_attempts) {
    ++rep.attempts;
    int x = static_cast<int>(pick(rng));
    auto dx = bfs_from(cball, {x}, ex(x) + top);
    std::vector<int> near;
    for (std::size_t v = 0; v < B.size(); ++v)
      if (dx[v] >= 0 && static_cast<std::size_t>(dx[v]) <= cball.exit_bound(x, static_cast<int>(v)))
        near.push_back(static_cast<int>(v));
    std::uniform_int_distribution<std::size_t> pn(0, near.size() - 1);
    int y = near[pn(rng)], z = near[pn(rng)];
    auto dy = bfs_from(cball, {y}, ex(y) + top);
    int dyz = dy[static_cast<std::size_t>(z)];
    if (dyz < 0 || static_cast<std::size_t>(dyz) > cball.exit_bound(y, z)) continue;
    std::array<int, 3> tri{x, y, z};
    std::sort(tri.begin(), tri.end());
    seen.insert(tri);
    ++rep.trusted;
    TriangleWitness t;
    t.x = x;
    t.y = y;
    t.z = z;
    t.side_xy = descend(cball, dy, x);
    t.side_yz = descend(cball, dy, z);
    std::reverse(t.side_yz.begin(), t.side_yz.end());
    t.side_zx = descend(cball, dx, z);
    t.slimness = triangle_slimness(cball, t.side_xy, t.side_yz, t.side_zx);
    if (rep.histogram.size() <= static_cast<std::size_t>(t.slimness))
      rep.histogram.resize(static_cast<std::size_t>(t.slimness) + 1, 0);
    ++rep.histogram[static_cast<std::size_t>(t.slimness)];
    if (t.slimness > rep.max_slimness) {
      rep.max_slimness = t.slimness;
      rep.worst.clear();
    }
    if (t.slimness == rep.max_slimness && rep.worst.size() < 5) rep.worst.push_back(std::move(t));
  }
  rep.distinct = seen.size();
  return rep;
}

std::vector<std::vector<int>> intersection_graph(const RelatorEmbedding& rel) {
  std::map<int, std::vector<int>> on;
  for (std::size_t i = 0; i < rel.copies.size(); ++i)
    for (int v : rel.copies[i].inside()) on[v].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> g(rel.copies.size());
  for (auto& [v, list] : on)
    for (int a : list)
      for (int b : list)
        if (a != b) g[static_cast<std::size_t>(a)].push_back(b);
  for (auto& a : g) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return g;
}

GeodesicSequences geodesic_sequences(const ConeOffBall& cball, int a, int b, std::size_t cap) {
  const auto& rel = *cball.relators;
  const auto& B = cball.ctx->ball();
  const int C = static_cast<int>(rel.copies.size());
  if (a < 0 || b < 0 || a >= C || b >= C) throw std::out_of_range("geodesic_sequences: copy index");
  auto g = intersection_graph(rel);
  std::vector<int> d(static_cast<std::size_t>(C), -1);
  std::deque<int> q{a};
  d[static_cast<std::size_t>(a)] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int u : g[static_cast<std::size_t>(v)])
      if (d[static_cast<std::size_t>(u)] == -1) {
        d[static_cast<std::size_t>(u)] = d[static_cast<std::size_t>(v)] + 1;
        q.push_back(u);
      }
  }
  GeodesicSequences out;
  if (d[static_cast<std::size_t>(b)] < 0) return out;
  out.length = static_cast<std::size_t>(d[static_cast<std::size_t>(b)]) + 1;
  // Walk back from b along decreasing BFS layers.
  std::vector<int> chain{b};
  auto rec = [&](auto&& self, int v) -> void {
    if (out.chains.size() >= cap) {
      out.truncated = true;
      return;
    }
    if (v == a) {
      out.chains.emplace_back(chain.rbegin(), chain.rend());
      return;
    }
    for (int u : g[static_cast<std::size_t>(v)])
      if (d[static_cast<std::size_t>(u)] == d[static_cast<std::size_t>(v)] - 1) {
        chain.push_back(u);
        self(self, u);
        chain.pop_back();
      }
  };
  rec(rec, b);
  int far = 0;
  for (int v : rel.copies[static_cast<std::size_t>(a)].vertices) far = std::max(far, B.dist[static_cast<std::size_t>(v)]);
  out.trusted = static_cast<std::size_t>(far) + (out.length - 1) * cball.D <= B.radius;
  return out;
}

PropertyReport check_chords(const ConeOffBall& cball, std::size_t trusted_radius) {
  const auto& rel = *cball.relators;
  const auto& B = cball.ctx->ball();
  PropertyReport rep;
  const std::size_t C = rel.copies.size();
  std::vector<std::vector<int>> sets(C);
  std::vector<bool> use(C, false);
  for (std::size_t i = 0; i < C; ++i) {
    sets[i] = rel.copies[i].inside();
    for (int v : sets[i]) use[i] = use[i] || static_cast<std::size_t>(B.dist[static_cast<std::size_t>(v)]) <= trusted_radius;
  }
  auto g = intersection_graph(rel);
  std::vector<std::set<int>> nb(C);
  for (std::size_t i = 0; i < C; ++i)
    for (int j : g[i])
      if (use[static_cast<std::size_t>(j)]) nb[i].insert(j);
  auto meets = [&](int i, int j) { return nb[static_cast<std::size_t>(i)].count(j) > 0; };
  auto report = [&](const std::string& s) {
    ++rep.counterexamples;
    if (rep.details.size() < 10) rep.details.push_back(s);
  };
  for (std::size_t i = 0; i < C; ++i) {
    if (!use[i]) continue;
    for (int j : nb[i]) {
      if (j <= static_cast<int>(i)) continue;
      for (int k : nb[static_cast<std::size_t>(j)]) {
        if (k <= j || !meets(static_cast<int>(i), k)) continue;
        ++rep.checked;
        std::vector<int> ij, ijk;
        std::set_intersection(sets[i].begin(), sets[i].end(), sets[static_cast<std::size_t>(j)].begin(),
                              sets[static_cast<std::size_t>(j)].end(), std::back_inserter(ij));
        std::set_intersection(ij.begin(), ij.end(), sets[static_cast<std::size_t>(k)].begin(),
                              sets[static_cast<std::size_t>(k)].end(), std::back_inserter(ijk));
        if (ijk.empty())
          report("triple " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                 " pairwise intersect with empty common intersection");
      }
    }
  }
  // 4-cycles 1-2-3-4 with 1,3 and 2,4 disjoint; i < k and j < l fix the label.
  for (std::size_t i = 0; i < C; ++i) {
    if (!use[i]) continue;
    std::set<int> two;
    for (int j : nb[i])
      for (int k : nb[static_cast<std::size_t>(j)])
        if (k > static_cast<int>(i) && !meets(static_cast<int>(i), k)) two.insert(k);
    for (int k : two) {
      std::vector<int> common;
      std::set_intersection(nb[i].begin(), nb[i].end(), nb[static_cast<std::size_t>(k)].begin(),
                            nb[static_cast<std::size_t>(k)].end(), std::back_inserter(common));
      for (std::size_t x = 0; x < common.size(); ++x)
        for (std::size_t y = x + 1; y < common.size(); ++y) {
          ++rep.checked;
          if (!meets(common[x], common[y]))
            report("4-cycle " + std::to_string(i) + "," + std::to_string(common[x]) + "," + std::to_string(k) + "," +
                   std::to_string(common[y]) + " has both diagonals disjoint");
        }
    }
  }
  return rep;
}

PropertyReport check_convexity(const ConeOffBall& cball, const std::vector<int>& chain) {
  const auto& rel = *cball.relators;
  const auto& B = cball.ctx->ball();
  PropertyReport rep;
  if (chain.empty()) return rep;
  std::set<int> U;
  std::set<std::pair<int, int>> E;
  for (int ci : chain) {
    const auto& cp = rel.copies.at(static_cast<std::size_t>(ci));
    const auto& vs = cp.vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      int a = vs[i], b = vs[(i + 1) % vs.size()];
      U.insert(a);
      E.insert({std::min(a, b), std::max(a, b)});
    }
  }
  // Plain Cayley BFS from every vertex of the union.
  auto cayley_bfs = [&](int src) {
    std::vector<int> d(B.size(), -1);
    std::deque<int> q{src};
    d[static_cast<std::size_t>(src)] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int u : B.adj[static_cast<std::size_t>(v)])
        if (u >= 0 && d[static_cast<std::size_t>(u)] == -1) {
          d[static_cast<std::size_t>(u)] = d[static_cast<std::size_t>(v)] + 1;
          q.push_back(u);
        }
    }
    return d;
  };
  std::map<int, std::vector<int>> D;
  for (int u : U) D[u] = cayley_bfs(u);
  auto report = [&](const std::string& s) {
    ++rep.counterexamples;
    if (rep.details.size() < 10) rep.details.push_back(s);
  };
  for (auto ix = U.begin(); ix != U.end(); ++ix)
    for (auto iy = std::next(ix); iy != U.end(); ++iy) {
      int x = *ix, y = *iy;
      const auto& dx0 = D[x];
      int d = dx0[static_cast<std::size_t>(y)];
      if (d < 0) continue;
      // Anchor at an end whose d-neighbourhood lies inside the ball.
      int a = x, b = y;
      if (static_cast<std::size_t>(B.dist[static_cast<std::size_t>(x)] + d) > B.radius) std::swap(a, b);
      if (static_cast<std::size_t>(B.dist[static_cast<std::size_t>(a)] + d) > B.radius) continue;
      ++rep.checked;
      const auto& da = D[a];
      const auto& db = D[b];
      for (std::size_t z = 0; z < B.size(); ++z) {
        if (da[z] < 0 || db[z] < 0 || da[z] + db[z] != d) continue;
        if (!U.count(static_cast<int>(z))) {
          report("geodesic between " + std::to_string(x) + " and " + std::to_string(y) + " leaves the union at " +
                 std::to_string(z));
          break;
        }
        bool bad = false;
        for (int u : B.adj[z])
          if (u >= 0 && db[static_cast<std::size_t>(u)] == db[z] - 1 &&
              !E.count({std::min<int>(static_cast<int>(z), u), std::max<int>(static_cast<int>(z), u)})) {
            report("geodesic between " + std::to_string(x) + " and " + std::to_string(y) + " uses edge " +
                   std::to_string(z) + "-" + std::to_string(u) + " outside the union");
            bad = true;
            break;
          }
        if (bad) break;
      }
    }
  return rep;
}

namespace {

std::vector<Word> words_up_to(std::size_t gens, std::size_t len) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (std::size_t l = 0; l < len; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (std::size_t s = 0; s < 2 * gens; ++s) {
        Letter x = letter(static_cast<int>(s / 2), s % 2 == 1);
        if (!w.empty() && w.back() == -x) continue;
        Word u = w;
        u.push_back(x);
        next.push_back(std::move(u));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Vertex on a cycle of v -> read(v, c), or -1.
std::pair<int, std::size_t> closed_orbit(const LabelledGraph& g, const Word& c) {
  const int V = g.num_vertices();
  std::vector<int> f(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) f[static_cast<std::size_t>(v)] = g.read(v, c);
  std::vector<int> state(static_cast<std::size_t>(V), 0);  // 0 new, 1 on stack, 2 done
  for (int s = 0; s < V; ++s) {
    if (state[static_cast<std::size_t>(s)]) continue;
    std::vector<int> path;
    int v = s;
    while (v >= 0 && state[static_cast<std::size_t>(v)] == 0) {
      state[static_cast<std::size_t>(v)] = 1;
      path.push_back(v);
      v = f[static_cast<std::size_t>(v)];
    }
    if (v >= 0 && state[static_cast<std::size_t>(v)] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      return {v, static_cast<std::size_t>(path.end() - it)};
    }
    for (int u : path) state[static_cast<std::size_t>(u)] = 2;
  }
  return {-1, 0};
}

}  // namespace

Classification classify_element(const LabelledGraph& g, const Presentation& pres, const Word& w, std::size_t power_cap,
                                const ConeOffBall* cball, std::size_t conj_len) {
  Classification out;
  Word w0 = free_reduce(w);
  if (w0.empty()) {
    out.kind = "elliptic";
    out.note = "identity";
    return out;
  }
  DehnSolver solver(pres);
  for (const Word& c : words_up_to(pres.alphabet.size(), conj_len)) {
    for (std::size_t k = 1; k <= power_cap; ++k) {
      Word u = concat(concat(c, power(w0, k)), inverse(c));
      Word red = solver.reduce(u).result;
      auto cr = cyclic_reduce(red);
      if (cr.core.empty()) {
        out.kind = "elliptic";
        out.power = k;
        out.conjugator = free_reduce(inverse(c));
        out.note = "w^" + std::to_string(k) + " is trivial";
        return out;
      }
      for (std::size_t rot = 0; rot < cr.core.size(); ++rot) {
        Word core = rotate(cr.core, rot);
        auto [v, period] = closed_orbit(g, core);
        if (v < 0) continue;
        out.kind = "elliptic";
        out.witness = core;
        out.power = k;
        out.vertex = v;
        out.period = period;
        // w^k = c^-1 t s core s^-1 t^-1 c with s = core prefix moved by the rotation.
        Word s(cr.core.begin(), cr.core.begin() + static_cast<std::ptrdiff_t>(rot));
        out.conjugator = free_reduce(concat(concat(inverse(c), cr.conjugator), s));
        out.note = "all powers of the witness label paths in the graph";
        return out;
      }
    }
  }
  if (cball) {
    const auto& ctx = *cball->ctx;
    auto d0 = cball->bfs(0);
    for (std::size_t k = 1; k <= power_cap; ++k) {
      int v = ctx.locate(power(w0, k));
      if (v < 0) break;
      out.power_lengths.push_back(d0[static_cast<std::size_t>(v)]);
    }
  }
  bool grows = out.power_lengths.size() >= 3;
  for (std::size_t i = 1; i < out.power_lengths.size(); ++i) grows = grows && out.power_lengths[i] > out.power_lengths[i - 1];
  out.kind = grows ? "hyperbolic-indication" : "inconclusive";
  out.note = "no witness up to the caps; growth is a measurement, not a certificate";
  return out;
}

TorsionWitness torsion_from_automorphism(const LabelledGraph& g, const std::vector<int>& phi, int v) {
  const int V = g.num_vertices();
  if (static_cast<int>(phi.size()) != V) throw std::invalid_argument("torsion_from_automorphism: map size");
  auto comp = components(g);
  const int cv = comp.of.at(static_cast<std::size_t>(v));
  const auto& verts = comp.vertices[static_cast<std::size_t>(cv)];
  std::set<int> image;
  for (int u : verts) {
    int pu = phi[static_cast<std::size_t>(u)];
    if (pu < 0 || pu >= V || comp.of[static_cast<std::size_t>(pu)] != cv)
      throw std::invalid_argument("torsion_from_automorphism: map leaves the component");
    image.insert(pu);
    for (int e : g.out(u)) {
      int want = phi[static_cast<std::size_t>(g.terminus(e))];
      bool ok = false;
      for (int f : g.out(pu)) ok = ok || (g.label(f) == g.label(e) && g.terminus(f) == want);
      if (!ok) throw std::invalid_argument("torsion_from_automorphism: map is not label-preserving");
    }
  }
  if (image.size() != verts.size()) throw std::invalid_argument("torsion_from_automorphism: map is not bijective");

  TorsionWitness out;
  // Order: lcm of the cycle lengths on the component.
  std::set<int> seen;
  std::size_t order = 1;
  for (int u : verts) {
    if (seen.count(u)) continue;
    std::size_t len = 0;
    for (int x = u; !seen.count(x); x = phi[static_cast<std::size_t>(x)]) {
      seen.insert(x);
      ++len;
    }
    order = std::lcm(order, len);
  }
  out.order = order;

  // Lexicographically least label among shortest paths v -> phi(v).
  const int target = phi[static_cast<std::size_t>(v)];
  std::vector<int> dt(static_cast<std::size_t>(V), -1);
  std::deque<int> q{target};
  dt[static_cast<std::size_t>(target)] = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int e : g.out(x)) {
      int y = g.terminus(e);
      if (dt[static_cast<std::size_t>(y)] == -1) {
        dt[static_cast<std::size_t>(y)] = dt[static_cast<std::size_t>(x)] + 1;
        q.push_back(y);
      }
    }
  }
  auto lkey = [](Letter x) { return std::pair{generator_of(x), x < 0}; };
  std::vector<std::map<int, int>> back;  // per step: vertex -> dart reaching it
  std::set<int> front{v};
  while (!front.count(target)) {
    std::optional<Letter> best;
    for (int x : front)
      for (int e : g.out(x))
        if (dt[static_cast<std::size_t>(g.terminus(e))] == dt[static_cast<std::size_t>(x)] - 1 &&
            (!best || lkey(g.label(e)) < lkey(*best)))
          best = g.label(e);
    std::map<int, int> step;
    std::set<int> next;
    for (int x : front)
      for (int e : g.out(x))
        if (g.label(e) == *best && dt[static_cast<std::size_t>(g.terminus(e))] == dt[static_cast<std::size_t>(x)] - 1) {
          auto [it, fresh] = step.try_emplace(g.terminus(e), e);
          if (!fresh) it->second = std::min(it->second, e);
          next.insert(g.terminus(e));
        }
    back.push_back(std::move(step));
    out.word.push_back(*best);
    front = std::move(next);
  }
  int cur = target;
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    int e = it->at(cur);
    out.path.push_back(e);
    cur = g.origin(e);
  }
  std::reverse(out.path.begin(), out.path.end());

  // word^order read from v by label, all branches.
  std::set<int> reach{v};
  Word full = power(out.word, order);
  for (Letter x : full) {
    std::set<int> next;
    for (int u : reach)
      for (int e : g.out(u))
        if (g.label(e) == x) next.insert(g.terminus(e));
    reach = std::move(next);
  }
  out.closes = reach.count(v) > 0;
  return out;
}

}  // namespace sct
