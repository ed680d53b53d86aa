#include "walks.hpp"

#include <algorithm>

namespace sct::detail {

bool is_branch_vertex(const LabelledGraph& g, int v) {
  if (g.degree(v) != 2) return true;
  for (int e : g.out(v))
    if (g.inv(e) == e) return true;
  return false;
}

bool for_each_segment_walk(const LabelledGraph& g, const std::vector<int>& verts, std::size_t W, std::size_t budget,
                           const std::function<void(const std::vector<int>&, std::size_t)>& emit) {
  std::vector<std::vector<int>> segs;
  std::vector<int> seg_of(g.num_darts(), -1);
  for (int a : verts) {
    if (!is_branch_vertex(g, a)) continue;
    for (int e : g.out(a)) {
      std::vector<int> s{e};
      int v = g.terminus(e);
      while (!is_branch_vertex(g, v)) {
        const auto& out = g.out(v);
        int d = out[0] == g.inv(s.back()) ? out[1] : out[0];
        s.push_back(d);
        v = g.terminus(d);
      }
      seg_of[e] = static_cast<int>(segs.size());
      segs.push_back(std::move(s));
    }
  }
  std::size_t emitted = 0;
  std::vector<int> buf;
  for (const auto& s : segs) {
    std::size_t count = 0;
    bool over = false;
    std::vector<int> part;
    auto finish = [&]() {
      std::size_t from = 0;
      if (count > 0 && s.size() + 1 > W) from = s.size() + 1 - W;
      if (from == 0) {
        emit(buf, s.size());
      } else {
        part.assign(buf.begin() + static_cast<std::ptrdiff_t>(from), buf.end());
        emit(part, s.size() - from);
      }
      emitted += buf.size() - from;
      ++count;
    };
    // buf holds the reference part followed by the continuation built so far.
    std::function<void(int, std::size_t)> walk = [&](int arrival, std::size_t rem) {
      if (over) return;
      int b = g.terminus(arrival);
      bool any = false;
      for (int f : g.out(b)) {
        if (f == g.inv(arrival)) continue;
        any = true;
        const auto& t = segs[seg_of[f]];
        std::size_t take = std::min(rem, t.size());
        buf.insert(buf.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(take));
        if (take == rem)
          finish();
        else
          walk(t.back(), rem - take);
        buf.resize(buf.size() - take);
        if (emitted > budget) {
          over = true;
          return;
        }
      }
      if (!any) finish();
    };
    buf.assign(s.begin(), s.end());
    if (W > 0)
      walk(s.back(), W);
    else
      finish();
    if (over || emitted > budget) return false;
  }
  return true;
}

}  // namespace sct::detail
