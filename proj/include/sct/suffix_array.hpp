#pragma once

#include <cstdint>
#include <vector>

namespace sct {

// Suffix array with LCP and range-minimum for longest-common-extension
// queries. Symbols are arbitrary int32 values; callers keep separators unique.
class SuffixArray {
 public:
  SuffixArray() = default;
  explicit SuffixArray(const std::vector<std::int32_t>& text, bool with_rmq = true);

  std::size_t size() const { return sa_.size(); }
  const std::vector<std::int32_t>& sa() const { return sa_; }
  const std::vector<std::int32_t>& rank() const { return rank_; }
  // lcp()[r] = lcp of suffixes sa[r-1] and sa[r]; lcp()[0] = 0.
  const std::vector<std::int32_t>& lcp() const { return lcp_; }

  // Length of the common prefix of the suffixes at i and j.
  std::int32_t lce(std::int32_t i, std::int32_t j) const;

 private:
  std::vector<std::int32_t> sa_, rank_, lcp_;
  std::vector<std::vector<std::int32_t>> sparse_;
  std::int32_t range_min(std::int32_t lo, std::int32_t hi) const;  // [lo, hi]
};

}  // namespace sct
