#include "sct/pieces.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "sct/suffix_array.hpp"
#include "walks.hpp"

namespace sct {

std::vector<int> read_path(const LabelledGraph& g, int v, const Word& w) {
  std::vector<int> darts;
  for (Letter x : w) {
    int e = g.follow(v, x);
    if (e < 0) return {};
    darts.push_back(e);
    v = g.terminus(e);
  }
  return darts;
}

bool verify_piece(const LabelledGraph& g, const OrbitPartition& orbits, int v1, int v2, const Word& w) {
  if (v1 < 0 || v2 < 0 || v1 >= g.num_vertices() || v2 >= g.num_vertices()) return false;
  if (g.read(v1, w) < 0 || g.read(v2, w) < 0) return false;
  return orbits.cls[v1] != orbits.cls[v2];
}

namespace {

std::size_t longest_cycle(const CycleEnumeration& cycles) {
  std::size_t m = 0;
  for (auto& c : cycles.cycles) m = std::max(m, c.size());
  return m;
}

void pair_scan(const LabelledGraph& g, const CycleEnumeration& cycles, const OrbitPartition& orbits, std::size_t cap,
               PieceProfile& prof) {
  const int n = g.num_vertices();
  std::vector<std::int32_t> cur(n), nxt(n);
  for (std::size_t ci = 0; ci < cycles.cycles.size(); ++ci) {
    const auto& cyc = cycles.cycles[ci];
    const std::size_t L = cyc.size();
    const std::int32_t lim = static_cast<std::int32_t>(std::min(L, cap));
    auto& best = prof.longest[ci];
    auto& part = prof.partner[ci];
    best.assign(L, 0);
    part.assign(L, -1);
    std::fill(nxt.begin(), nxt.end(), 0);
    for (std::size_t ii = 2 * L; ii-- > 0;) {
      Letter s = g.label(cyc[ii % L]);
      for (int y = 0; y < n; ++y) {
        int e = g.follow(y, s);
        cur[y] = e < 0 ? 0 : 1 + nxt[g.terminus(e)];
      }
      if (ii < L) {
        int x = g.origin(cyc[ii]);
        for (int y = 0; y < n; ++y) {
          if (orbits.cls[y] == orbits.cls[x]) continue;
          std::int32_t v = std::min(cur[y], lim);
          if (v > best[ii]) {
            best[ii] = v;
            part[ii] = y;
          }
        }
      }
      cur.swap(nxt);
    }
  }
}

// Builds a text holding every labelled walk of length >= W from every vertex
// (as suffixes) plus the cycle queries, then reads longest pieces from one
// suffix-array pass in each direction.
class TextIndex {
 public:
  TextIndex(const LabelledGraph& g, const CycleEnumeration& cycles, const OrbitPartition& orbits, std::size_t W,
            std::size_t budget)
      : g_(g), cycles_(cycles), orbits_(orbits), W_(W), budget_(budget) {}

  bool build() {
    auto comps = components(g_);
    dart_loc_.assign(g_.num_darts(), DartLoc{});
    for (std::size_t c = 0; c < comps.count(); ++c) {
      auto cyc = as_cycle(g_, comps.vertices[c]);
      if (cyc) {
        if (!add_cycle_component(*cyc)) return false;
      } else if (!add_branchy_component(comps.vertices[c])) {
        return false;
      }
    }
    for (std::size_t ci = 0; ci < cycles_.cycles.size(); ++ci)
      if (!add_query(ci)) return false;
    return true;
  }

  std::size_t size() const { return text_.size(); }

  void solve(PieceProfile& prof) {
    SuffixArray sa(text_, false);
    const auto& SA = sa.sa();
    const auto& LCP = sa.lcp();
    const std::int32_t N = static_cast<std::int32_t>(text_.size());
    constexpr std::int32_t INF = std::numeric_limits<std::int32_t>::max();
    auto consider = [&](std::int32_t p, std::int32_t lcp, std::int32_t partner_pos) {
      auto& q = queries_[qidx_[p]];
      std::int32_t v = std::min(lcp, q.lim);
      auto& best = prof.longest[q.cycle][q.offset];
      auto& part = prof.partner[q.cycle][q.offset];
      int y = ref_vertex_[partner_pos];
      if (v > best || (v == best && v > 0 && y < part)) {
        best = v;
        part = y;
      }
    };
    for (int dir = 0; dir < 2; ++dir) {
      std::int32_t i1 = -1, i2 = -1, c1 = -1;
      std::int32_t m1 = INF, m2 = INF;
      for (std::int32_t k = 0; k < N; ++k) {
        std::int32_t r = dir == 0 ? k : N - 1 - k;
        // LCP between the current suffix and the previous one in scan order.
        std::int32_t link = dir == 0 ? LCP[r] : (r + 1 < N ? LCP[r + 1] : 0);
        m1 = std::min(m1, link);
        m2 = std::min(m2, link);
        std::int32_t p = SA[r];
        if (qidx_[p] >= 0) {
          std::int32_t qc = queries_[qidx_[p]].cls;
          if (i1 >= 0 && c1 != qc)
            consider(p, m1, i1);
          else if (i2 >= 0)
            consider(p, m2, i2);
        }
        std::int32_t c = ref_cls_[p];
        if (c >= 0) {
          if (c != c1) {
            i2 = i1;
            m2 = m1;
          }
          i1 = p;
          c1 = c;
          m1 = INF;
        }
      }
    }
  }

 private:
  struct Query {
    std::int32_t cycle, offset, cls, lim;
  };
  const LabelledGraph& g_;
  const CycleEnumeration& cycles_;
  const OrbitPartition& orbits_;
  std::size_t W_, budget_;
  std::vector<std::int32_t> text_, ref_cls_, ref_vertex_, qidx_;
  std::vector<Query> queries_;
  struct DartLoc {
    std::int64_t start = -1;  // first reference position of a cycle string
    std::size_t off = 0, len = 0;
  };
  std::vector<DartLoc> dart_loc_;
  std::int32_t next_sentinel_ = 1 << 24;

  bool push(std::int32_t sym, std::int32_t cls = -1, std::int32_t vertex = -1) {
    if (text_.size() >= budget_) return false;
    text_.push_back(sym);
    ref_cls_.push_back(cls);
    ref_vertex_.push_back(vertex);
    qidx_.push_back(-1);
    return true;
  }
  bool end_string() { return push(next_sentinel_++); }

  bool add_cycle_component(const CycleComponent& c) {
    const std::size_t L = c.label.size();
    // Forward reading.
    std::size_t base = text_.size();
    for (std::size_t k = 0; k < L + W_; ++k) {
      int v = k < L ? c.vertices[k] : -1;
      if (!push(c.label[k % L], k < L ? orbits_.cls[v] : -1, v)) return false;
    }
    for (std::size_t k = 0; k < L; ++k) dart_loc_[c.darts[k]] = {static_cast<std::int64_t>(base), k, L};
    if (!end_string()) return false;
    // Backward reading: suffix m starts at v_{-m} with dart inv(d_{-m-1}).
    base = text_.size();
    for (std::size_t m = 0; m < L + W_; ++m) {
      std::size_t idx = (L - 1 - (m % L));
      int v = m < L ? c.vertices[(L - m) % L] : -1;
      if (!push(-c.label[idx], m < L ? orbits_.cls[v] : -1, v)) return false;
    }
    for (std::size_t m = 0; m < L; ++m)
      dart_loc_[g_.inv(c.darts[(2 * L - m - 1) % L])] = {static_cast<std::int64_t>(base), m, L};
    return end_string();
  }

  bool add_branchy_component(const std::vector<int>& verts) {
    bool ok = true;
    bool done = detail::for_each_segment_walk(
        g_, verts, W_, budget_, [&](const std::vector<int>& darts, std::size_t refs) {
          if (!ok) return;
          for (std::size_t i = 0; i < darts.size() && ok; ++i) {
            int v = g_.origin(darts[i]);
            ok = i < refs ? push(g_.label(darts[i]), orbits_.cls[v], v) : push(g_.label(darts[i]));
          }
          if (ok) ok = end_string();
        });
    return ok && done;
  }

  bool add_query(std::size_t ci) {
    const auto& cyc = cycles_.cycles[ci];
    const std::size_t L = cyc.size();
    const std::int32_t lim = static_cast<std::int32_t>(std::min(L, W_));
    const DartLoc loc = dart_loc_[cyc[0]];
    if (loc.start >= 0 && loc.len == L) {
      // The cycle is a whole cycle component: reuse its reference suffixes.
      for (std::size_t i = 0; i < L; ++i) {
        std::size_t p = static_cast<std::size_t>(loc.start) + (loc.off + i) % L;
        qidx_[p] = static_cast<std::int32_t>(queries_.size());
        queries_.push_back({static_cast<std::int32_t>(ci), static_cast<std::int32_t>(i),
                            orbits_.cls[g_.origin(cyc[i])], lim});
      }
      return true;
    }
    for (std::size_t k = 0; k < L + static_cast<std::size_t>(lim); ++k) {
      if (!push(g_.label(cyc[k % L]))) return false;
      if (k < L) {
        qidx_.back() = static_cast<std::int32_t>(queries_.size());
        queries_.push_back({static_cast<std::int32_t>(ci), static_cast<std::int32_t>(k), orbits_.cls[g_.origin(cyc[k])],
                            lim});
      }
    }
    return end_string();
  }

};

}  // namespace

PieceProfile piece_profile(const LabelledGraph& g, const CycleEnumeration& cycles, const OrbitPartition& orbits,
                           const PieceOptions& opt) {
  auto red = is_reduced(g);
  if (!red.holds) throw std::invalid_argument("piece analysis needs a reduced graph: " + red.reason);
  PieceProfile prof;
  const std::size_t longest = longest_cycle(cycles);
  std::size_t cap = opt.cap == 0 ? longest : std::min(opt.cap, longest);
  prof.longest.resize(cycles.cycles.size());
  prof.partner.resize(cycles.cycles.size());
  for (std::size_t i = 0; i < cycles.cycles.size(); ++i) {
    prof.longest[i].assign(cycles.cycles[i].size(), 0);
    prof.partner[i].assign(cycles.cycles[i].size(), -1);
  }
  PieceEngine engine = opt.engine;
  if (engine == PieceEngine::automatic) {
    double work = 0;
    for (auto& c : cycles.cycles) work += 2.0 * static_cast<double>(c.size()) * g.num_vertices();
    engine = work <= 2e7 ? PieceEngine::pair_scan : PieceEngine::text_index;
  }
  prof.engine_used = engine;
  if (engine == PieceEngine::pair_scan) {
    prof.cap = cap;
    prof.exact = cap >= longest;
    pair_scan(g, cycles, orbits, cap, prof);
    return prof;
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    TextIndex idx(g, cycles, orbits, cap, opt.text_budget);
    if (idx.build()) {
      prof.cap = cap;
      prof.exact = cap >= longest;
      prof.text_size = idx.size();
      idx.solve(prof);
      return prof;
    }
    if (opt.fallback_cap == 0 || opt.fallback_cap >= cap) break;
    cap = opt.fallback_cap;
  }
  throw std::runtime_error("piece analysis: text index budget exceeded");
}

PieceWitness piece_witness(const LabelledGraph& g, const CycleEnumeration& cycles, const OrbitPartition& orbits,
                           const Components& comps, const PieceProfile& prof, std::size_t ci, std::size_t i) {
  const auto& cyc = cycles.cycles[ci];
  const std::size_t L = cyc.size();
  PieceWitness w;
  w.cycle = static_cast<int>(ci);
  w.offset = i;
  for (std::int32_t k = 0; k < prof.longest[ci][i]; ++k) w.path1.push_back(cyc[(i + k) % L]);
  w.word = g.path_label(w.path1);
  int y = prof.partner[ci][i];
  if (y >= 0) w.path2 = read_path(g, y, w.word);
  int x = g.origin(cyc[i]);
  if (y >= 0 && comps.of[x] != comps.of[y] && orbits.iso_class[comps.of[x]] != orbits.iso_class[comps.of[y]])
    w.separating_evidence = "different components";
  else
    w.separating_evidence = "no automorphism maps path1 to path2";
  return w;
}

PieceEnumeration enumerate_pieces(const LabelledGraph& g, std::optional<std::size_t> max_len, const PieceOptions& opt) {
  PieceEnumeration out;
  auto cycles = simple_cycles(g);
  auto orbits = vertex_orbits(g);
  PieceOptions o = opt;
  if (max_len) o.cap = *max_len;
  auto prof = piece_profile(g, cycles, orbits, o);
  out.cap = prof.cap;
  out.exact = prof.exact && cycles.exhaustive;
  out.readings_disagree = orbits.identical_components;
  auto comps = components(g);
  for (std::size_t ci = 0; ci < cycles.cycles.size(); ++ci) {
    const auto& cyc = cycles.cycles[ci];
    const std::size_t L = cyc.size();
    const auto& P = prof.longest[ci];
    for (std::size_t i = 0; i < L; ++i) {
      if (P[i] == 0) continue;
      out.max_length = std::max<std::size_t>(out.max_length, P[i]);
      std::size_t prev = (i + L - 1) % L;
      if (L > 1 && P[prev] >= P[i] + 1) continue;
      PieceWitness w = piece_witness(g, cycles, orbits, comps, prof, ci, i);
      out.maximal.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace sct
