#include <algorithm>
#include <map>

#include "sct/automorphism.hpp"
#include "sct/sc.hpp"
#include "walks.hpp"

namespace sct {

bool PowerClass::closes_for(std::size_t n) const {
  for (std::size_t d : closing_periods)
    if (n % d == 0) return true;
  return false;
}

namespace {

Word class_key(const Word& root) { return std::min(canonical_necklace(root), canonical_necklace(inverse(root))); }

class Collector {
 public:
  PowerClass& get(const Word& root) {
    Word key = class_key(root);
    auto it = index_.find(key);
    if (it != index_.end()) return classes_[it->second];
    index_.emplace(std::move(key), classes_.size());
    classes_.push_back({});
    classes_.back().root = root;
    return classes_.back();
  }
  template <class PathFn>
  void run(const Word& root, std::size_t length, PathFn&& path) {
    PowerClass& c = get(root);
    std::size_t k = length / root.size();
    if (k > c.max_exponent) {
      c.max_exponent = k;
      c.run_length = length;
      c.root = root;
      c.path = path();
    }
  }
  void closing(const Word& root, std::size_t d, const std::vector<int>& path) {
    PowerClass& c = get(root);
    if (std::find(c.closing_periods.begin(), c.closing_periods.end(), d) == c.closing_periods.end())
      c.closing_periods.push_back(d);
    if (c.path.empty()) c.path = path;
  }
  std::vector<PowerClass>& classes() { return classes_; }

 private:
  std::map<Word, std::size_t> index_;
  std::vector<PowerClass> classes_;
};

// Cycle lengths of v -> read(v, root) on the given vertices.
std::vector<std::size_t> functional_periods(const LabelledGraph& g, const std::vector<int>& verts, const Word& root) {
  std::map<int, int> local;
  for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
  const int m = static_cast<int>(verts.size());
  std::vector<int> next(m, -1);
  for (int i = 0; i < m; ++i) {
    int t = g.read(verts[i], root);
    next[i] = t < 0 ? -1 : local[t];
  }
  std::vector<int> state(m, 0), pos(m, -1);
  std::vector<std::size_t> out;
  for (int s = 0; s < m; ++s) {
    if (state[s]) continue;
    std::vector<int> stack;
    int v = s;
    while (v >= 0 && state[v] == 0) {
      state[v] = 1;
      pos[v] = static_cast<int>(stack.size());
      stack.push_back(v);
      v = next[v];
    }
    if (v >= 0 && state[v] == 1) {
      std::size_t d = stack.size() - static_cast<std::size_t>(pos[v]);
      if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    for (int u : stack) state[u] = 2;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PowerAnalysis analyse_powers(const LabelledGraph& g, std::size_t search_cap, std::size_t budget) {
  PowerAnalysis res;
  Collector col;
  auto comps = components(g);
  std::vector<const std::vector<int>*> branchy;
  for (std::size_t ci = 0; ci < comps.count(); ++ci) {
    const auto& verts = comps.vertices[ci];
    auto cyc = as_cycle(g, verts);
    if (!cyc) {
      branchy.push_back(&verts);
      continue;
    }
    const Word& c = cyc->label;
    const std::size_t L = c.size();
    auto pr = primitive_root(c);
    col.closing(pr.root, pr.exponent, cyc->darts);
    if (L < 2) continue;
    // Open runs have period below L and length below period + L, so each one
    // appears in c^4 starting inside the second copy.
    Word window = power(c, 4);
    for (const Run& r : find_runs(window, 2, L - 1)) {
      if (r.start < L || r.start >= 2 * L) continue;
      Word root(window.begin() + static_cast<std::ptrdiff_t>(r.start),
                window.begin() + static_cast<std::ptrdiff_t>(r.start + r.period));
      col.run(root, r.length, [&] {
        std::vector<int> p;
        for (std::size_t t = 0; t < r.length; ++t) p.push_back(cyc->darts[(r.start + t) % L]);
        return p;
      });
    }
  }
  for (const auto* vp : branchy) {
    const auto& verts = *vp;
    std::size_t darts = 0;
    bool self_inverse = false;
    for (int v : verts) {
      darts += g.out(v).size();
      for (int e : g.out(v)) self_inverse |= g.inv(e) == e;
    }
    const bool tree = !self_inverse && darts / 2 + 1 == verts.size();
    std::size_t W = search_cap > 0 ? search_cap : 256;
    if (tree) W = std::max(W, verts.size());
    else res.exhaustive = false;
    res.walk_cap = std::max(res.walk_cap, W);
    bool ok = detail::for_each_segment_walk(g, verts, W, budget, [&](const std::vector<int>& walk, std::size_t) {
      Word lab = g.path_label(walk);
      for (const Run& r : find_runs(lab, 2, W / 2)) {
        Word root(lab.begin() + static_cast<std::ptrdiff_t>(r.start),
                  lab.begin() + static_cast<std::ptrdiff_t>(r.start + r.period));
        col.run(root, r.length, [&] {
          return std::vector<int>(walk.begin() + static_cast<std::ptrdiff_t>(r.start),
                                  walk.begin() + static_cast<std::ptrdiff_t>(r.start + r.length));
        });
      }
    });
    if (!ok) res.exhaustive = false;
  }
  // Closed powers inside components that are not single cycles.
  auto& classes = col.classes();
  for (const auto* vp : branchy)
    for (auto& c : classes)
      for (std::size_t d : functional_periods(g, *vp, c.root))
        if (std::find(c.closing_periods.begin(), c.closing_periods.end(), d) == c.closing_periods.end())
          c.closing_periods.push_back(d);
  for (auto& c : classes) std::sort(c.closing_periods.begin(), c.closing_periods.end());
  res.classes = std::move(classes);
  return res;
}

MaxPower max_power_in_paths(const LabelledGraph& g, std::size_t search_cap, std::optional<std::size_t> n) {
  auto an = analyse_powers(g, search_cap);
  MaxPower out;
  out.exhaustive = an.exhaustive;
  for (auto& c : an.classes) {
    if (c.closed()) {
      out.closed_families.push_back(c);
      continue;
    }
    if (c.max_exponent > out.exponent) {
      out.exponent = c.max_exponent;
      out.root = c.root;
      out.path = c.path;
    }
  }
  if (n && !out.root.empty()) {
    for (auto& c : an.classes)
      if (class_key(c.root) == class_key(out.root)) out.is_closed_extension = c.closes_for(*n);
  }
  return out;
}

}  // namespace sct
