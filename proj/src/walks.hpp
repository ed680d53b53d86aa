#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "sct/graph.hpp"

namespace sct::detail {

// Vertices where walks may branch: degree other than 2, or carrying a
// self-inverse dart.
bool is_branch_vertex(const LabelledGraph& g, int v);

// Covers every non-backtracking walk of length W in a component that is not a
// single cycle. For each segment (maximal path between branch vertices) and
// each continuation of length W from its end, emit(darts, refs) is called:
// darts[0, refs) are the starting darts of reference positions, the rest is
// continuation. Returns false once more than `budget` darts were emitted.
bool for_each_segment_walk(const LabelledGraph& g, const std::vector<int>& verts, std::size_t W, std::size_t budget,
                           const std::function<void(const std::vector<int>&, std::size_t)>& emit);

}  // namespace sct::detail
