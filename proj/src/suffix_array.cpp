#include "sct/suffix_array.hpp"

#include <algorithm>
#include <numeric>

namespace sct {

SuffixArray::SuffixArray(const std::vector<std::int32_t>& text, bool with_rmq) {
  const std::int32_t n = static_cast<std::int32_t>(text.size());
  sa_.resize(n);
  rank_.resize(n);
  lcp_.assign(n, 0);
  if (n == 0) return;

  // Prefix doubling with radix passes.
  std::vector<std::int32_t> vals(text);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  std::vector<std::int32_t> rk(n), tmp(n), y(n);
  for (std::int32_t i = 0; i < n; ++i)
    rk[i] = static_cast<std::int32_t>(std::lower_bound(vals.begin(), vals.end(), text[i]) - vals.begin());
  std::int32_t m = static_cast<std::int32_t>(vals.size());
  std::vector<std::int32_t> cnt(std::max<std::int32_t>(m, n) + 1);

  auto counting_sort = [&]() {
    std::fill(cnt.begin(), cnt.begin() + m + 1, 0);
    for (std::int32_t i = 0; i < n; ++i) ++cnt[rk[i]];
    for (std::int32_t i = 1; i <= m; ++i) cnt[i] += cnt[i - 1];
    for (std::int32_t i = n - 1; i >= 0; --i) sa_[--cnt[rk[y[i]]]] = y[i];
  };
  std::iota(y.begin(), y.end(), 0);
  counting_sort();

  for (std::int32_t k = 1;; k <<= 1) {
    std::int32_t p = 0;
    for (std::int32_t i = n - k; i < n; ++i)
      if (i >= 0) y[p++] = i;
    for (std::int32_t j = 0; j < n; ++j)
      if (sa_[j] >= k) y[p++] = sa_[j] - k;
    counting_sort();
    tmp[sa_[0]] = 0;
    for (std::int32_t j = 1; j < n; ++j) {
      std::int32_t a = sa_[j - 1], b = sa_[j];
      std::int32_t a2 = a + k < n ? rk[a + k] : -1;
      std::int32_t b2 = b + k < n ? rk[b + k] : -1;
      tmp[b] = tmp[a] + ((rk[a] != rk[b] || a2 != b2) ? 1 : 0);
    }
    rk.swap(tmp);
    m = rk[sa_[n - 1]] + 1;
    if (m == n || k >= n) break;
  }
  for (std::int32_t j = 0; j < n; ++j) rank_[sa_[j]] = j;

  // Kasai.
  std::int32_t h = 0;
  for (std::int32_t i = 0; i < n; ++i) {
    if (rank_[i] == 0) {
      h = 0;
      continue;
    }
    std::int32_t j = sa_[rank_[i] - 1];
    while (i + h < n && j + h < n && text[i + h] == text[j + h]) ++h;
    lcp_[rank_[i]] = h;
    if (h > 0) --h;
  }

  if (!with_rmq) return;
  sparse_.push_back(lcp_);
  for (std::int32_t len = 2; len <= n; len <<= 1) {
    const auto& prev = sparse_.back();
    std::vector<std::int32_t> cur(n - len + 1);
    for (std::int32_t i = 0; i + len <= n; ++i) cur[i] = std::min(prev[i], prev[i + len / 2]);
    sparse_.push_back(std::move(cur));
  }
}

std::int32_t SuffixArray::range_min(std::int32_t lo, std::int32_t hi) const {
  std::int32_t len = hi - lo + 1;
  int lvl = 31 - __builtin_clz(static_cast<unsigned>(len));
  return std::min(sparse_[lvl][lo], sparse_[lvl][hi - (1 << lvl) + 1]);
}

std::int32_t SuffixArray::lce(std::int32_t i, std::int32_t j) const {
  const std::int32_t n = static_cast<std::int32_t>(sa_.size());
  if (i >= n || j >= n) return 0;
  if (i == j) return n - i;
  std::int32_t a = rank_[i], b = rank_[j];
  if (a > b) std::swap(a, b);
  return range_min(a + 1, b);
}

}  // namespace sct
