#include <algorithm>
#include <functional>

#include "sct/pieces.hpp"

namespace sct {

namespace {

struct Block {
  std::vector<int> edges;  // representative darts
};

// Edge-biconnected blocks (Tarjan), iterative. Loops form their own blocks.
std::vector<Block> blocks(const LabelledGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<Block> out;
  std::vector<int> estack;
  auto rep = [&](int e) { return std::min(e, g.inv(e)); };
  int timer = 0;
  struct Frame {
    int v, parent_edge;
    std::size_t it;
  };
  for (int r = 0; r < n; ++r) {
    if (disc[r] >= 0) continue;
    std::vector<Frame> st{{r, -1, 0}};
    disc[r] = low[r] = timer++;
    while (!st.empty()) {
      Frame& f = st.back();
      int v = f.v;
      if (f.it < g.out(v).size()) {
        int e = g.out(v)[f.it++];
        int t = g.terminus(e);
        int id = rep(e);
        if (t == v) {
          if (e == id) out.push_back({{e}});
          continue;
        }
        if (id == f.parent_edge) continue;
        if (disc[t] < 0) {
          estack.push_back(e);
          disc[t] = low[t] = timer++;
          st.push_back({t, id, 0});
        } else if (disc[t] < disc[v]) {
          estack.push_back(e);
          low[v] = std::min(low[v], disc[t]);
        }
      } else {
        int pe = f.parent_edge;
        st.pop_back();
        if (st.empty()) break;
        int u = st.back().v;
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= disc[u]) {
          Block b;
          while (!estack.empty()) {
            int e = estack.back();
            estack.pop_back();
            b.edges.push_back(e);
            if (rep(e) == pe) break;
          }
          out.push_back(std::move(b));
        }
      }
    }
  }
  return out;
}

}  // namespace

CycleEnumeration simple_cycles(const LabelledGraph& g, std::size_t length_cap, std::size_t count_cap) {
  CycleEnumeration res;
  auto bl = blocks(g);
  std::vector<const Block*> general;
  std::size_t longest_simple_block = 0;
  std::vector<char> in_block(g.num_darts(), 0);
  for (auto& b : bl) {
    std::vector<int> verts;
    for (int e : b.edges) {
      verts.push_back(g.origin(e));
      verts.push_back(g.terminus(e));
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (b.edges.size() == 1 && g.origin(b.edges[0]) != g.terminus(b.edges[0])) continue;  // bridge
    if (b.edges.size() == verts.size()) {
      // The block is a single cycle; walk it from its least vertex.
      for (int e : b.edges) in_block[e] = in_block[g.inv(e)] = 1;
      int s = verts.front();
      int d = -1;
      for (int e : g.out(s))
        if (in_block[e]) {
          d = e;
          break;
        }
      std::vector<int> cyc;
      int v = s, prev = -1;
      do {
        cyc.push_back(d);
        prev = d;
        v = g.terminus(d);
        d = -1;
        for (int e : g.out(v))
          if (in_block[e] && e != g.inv(prev)) {
            d = e;
            break;
          }
      } while (v != s && d >= 0);
      for (int e : b.edges) in_block[e] = in_block[g.inv(e)] = 0;
      longest_simple_block = std::max(longest_simple_block, cyc.size());
      res.cycles.push_back(std::move(cyc));
    } else {
      general.push_back(&b);
    }
  }
  if (length_cap == 0) {
    length_cap = longest_simple_block > 0 ? 3 * longest_simple_block : static_cast<std::size_t>(g.num_darts() / 2 + 1);
    if (!general.empty()) length_cap = std::max(length_cap, static_cast<std::size_t>(g.num_darts() / 2 + 1));
  }
  res.length_cap = length_cap;

  for (const Block* b : general) {
    for (int e : b->edges) in_block[e] = in_block[g.inv(e)] = 1;
    std::vector<int> verts;
    for (int e : b->edges) {
      verts.push_back(g.origin(e));
      verts.push_back(g.terminus(e));
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::vector<char> on_path(g.num_vertices(), 0);
    std::vector<int> path;
    for (int s : verts) {
      std::function<void(int)> dfs = [&](int v) {
        if (res.cycles.size() >= count_cap) {
          res.exhaustive = false;
          return;
        }
        for (int e : g.out(v)) {
          if (!in_block[e]) continue;
          if (!path.empty() && e == g.inv(path.back())) continue;
          int t = g.terminus(e);
          if (t == s) {
            path.push_back(e);
            int first = std::min(path.front(), g.inv(path.front()));
            int last = std::min(path.back(), g.inv(path.back()));
            if (path.size() > 1 && first < last) res.cycles.push_back(path);
            path.pop_back();
            continue;
          }
          if (t < s || on_path[t]) continue;
          if (path.size() + 1 >= length_cap) {
            res.exhaustive = false;
            continue;
          }
          on_path[t] = 1;
          path.push_back(e);
          dfs(t);
          path.pop_back();
          on_path[t] = 0;
        }
      };
      on_path[s] = 1;
      dfs(s);
      on_path[s] = 0;
    }
    for (int e : b->edges) in_block[e] = in_block[g.inv(e)] = 0;
  }
  for (auto& c : res.cycles) res.max_length = std::max(res.max_length, c.size());
  return res;
}

}  // namespace sct
