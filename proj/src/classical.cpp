#include <algorithm>
#include <map>
#include <stdexcept>

#include "sct/sc.hpp"
#include "sct/suffix_array.hpp"

namespace sct {

SCReport check_classical(const Presentation& pres, Ratio lambda, std::size_t max_violations) {
  SCReport rep;
  rep.lambda = lambda;
  rep.condition = "C'(" + lambda.str() + ") classical";
  const std::size_t R = pres.relators.size();
  for (std::size_t i = 0; i < R; ++i)
    if (pres.relators[i].empty() || !is_cyclically_reduced(pres.relators[i]))
      throw std::invalid_argument("relator " + std::to_string(i + 1) + " is not cyclically reduced");

  // Word 2i is relator i, word 2i+1 its inverse; each enters as u u #.
  std::vector<Word> words;
  for (const auto& r : pres.relators) {
    words.push_back(r);
    words.push_back(inverse(r));
  }
  std::map<Word, std::int32_t> necklace_id;
  std::vector<std::int32_t> text, cls, len, word_of, off_of;
  std::vector<std::size_t> start(words.size());
  std::int32_t sentinel = 1 << 24;
  for (std::size_t k = 0; k < words.size(); ++k) {
    const Word& u = words[k];
    const std::size_t L = u.size();
    auto lr = least_rotation(u);
    Word neck = rotate(u, lr);
    necklace_id.emplace(neck, static_cast<std::int32_t>(necklace_id.size()));
    std::size_t per = primitive_root(u).root.size();
    start[k] = text.size();
    for (std::size_t t = 0; t < 2 * L; ++t) {
      text.push_back(u[t % L]);
      bool ref = t < L;
      cls.push_back(ref ? static_cast<std::int32_t>(((t + L - lr % L) % L) % per) : -1);
      len.push_back(ref ? static_cast<std::int32_t>(L) : 0);
      word_of.push_back(static_cast<std::int32_t>(k));
      off_of.push_back(static_cast<std::int32_t>(t));
    }
    text.push_back(sentinel++);
    cls.push_back(-1);
    len.push_back(0);
    word_of.push_back(-1);
    off_of.push_back(-1);
  }
  // Class of a rotation: (necklace, rotation residue); equal words share it.
  std::vector<std::int64_t> klass(text.size(), -1);
  for (std::size_t k = 0; k < words.size(); ++k) {
    const Word& u = words[k];
    std::int64_t nid = necklace_id[rotate(u, least_rotation(u))];
    for (std::size_t t = 0; t < u.size(); ++t) klass[start[k] + t] = nid * (1LL << 32) + cls[start[k] + t];
  }

  SuffixArray sa(text, false);
  const auto& SA = sa.sa();
  const auto& rank = sa.rank();
  const auto& LCP = sa.lcp();
  const std::int32_t N = static_cast<std::int32_t>(text.size());

  rep.stats.cycles = R;
  for (std::size_t i = 0; i < R; ++i) {
    const Word& r = pres.relators[i];
    const std::size_t L = r.size();
    std::vector<std::int32_t> P(L, 0), pw(L, -1), po(L, -1);
    for (std::size_t t = 0; t < L; ++t) {
      std::int32_t p = static_cast<std::int32_t>(start[2 * i] + t);
      std::int32_t rk = rank[p];
      std::int64_t qc = klass[p];
      std::int32_t& best = P[t];
      for (int dir = -1; dir <= 1; dir += 2) {
        std::int32_t m = static_cast<std::int32_t>(L);
        for (std::int32_t s = rk + dir; s >= 0 && s < N; s += dir) {
          m = std::min(m, dir < 0 ? LCP[s + 1] : LCP[s]);
          if (m <= best) break;
          std::int32_t q = SA[s];
          if (klass[q] < 0 || klass[q] == qc) continue;
          std::int32_t v = std::min(m, len[q]);
          if (v > best) {
            best = v;
            pw[t] = word_of[q];
            po[t] = off_of[q];
          }
        }
      }
    }
    std::size_t mx = static_cast<std::size_t>(*std::max_element(P.begin(), P.end()));
    rep.cycle_lengths.push_back(L);
    rep.cycle_max_piece.push_back(mx);
    rep.stats.max_piece = std::max(rep.stats.max_piece, mx);
    rep.stats.min_cycle = i == 0 ? L : std::min(rep.stats.min_cycle, L);
    rep.stats.max_cycle = std::max(rep.stats.max_cycle, L);
    rep.stats.max_ratio = std::max(rep.stats.max_ratio, static_cast<double>(mx) / static_cast<double>(L));
    for (std::size_t t = 0; t < L; ++t) {
      if (lambda.below(static_cast<std::size_t>(P[t]), L)) continue;
      std::size_t prev = (t + L - 1) % L;
      if (L > 1 && P[prev] >= P[t] + 1) continue;
      if (rep.violations.size() >= max_violations) {
        rep.violations_truncated = true;
        break;
      }
      PieceViolation v;
      v.cycle = static_cast<int>(i);
      v.cycle_length = L;
      v.offset = t;
      v.piece = cyclic_subword(r, t, static_cast<std::size_t>(P[t]));
      v.evidence = "also a prefix of rotation " + std::to_string(po[t]) + " of " +
                   (pw[t] % 2 ? "the inverse of relator " : "relator ") + std::to_string(pw[t] / 2 + 1);
      rep.violations.push_back(std::move(v));
    }
  }
  rep.verdict = rep.violations.empty() ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace sct
