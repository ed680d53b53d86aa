#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sct/automorphism.hpp"
#include "sct/graph.hpp"

namespace sct {

// Simple closed paths, one orientation each, given as dart sequences.
struct CycleEnumeration {
  std::vector<std::vector<int>> cycles;
  bool exhaustive = true;
  std::size_t length_cap = 0;
  std::size_t max_length = 0;
};
// length_cap == 0 selects the default: three times the longest cycle that
// forms a block on its own (or the edge count when there is none).
CycleEnumeration simple_cycles(const LabelledGraph& g, std::size_t length_cap = 0, std::size_t count_cap = 1000000);

struct PieceWitness {
  Word word;
  std::vector<int> path1, path2;
  int cycle = -1;       // index into the cycle list
  std::size_t offset = 0;  // start of path1 on that cycle
  std::string separating_evidence;
};

enum class PieceEngine { automatic, pair_scan, text_index };

struct PieceOptions {
  PieceEngine engine = PieceEngine::automatic;
  // Lengths are computed exactly up to cap; 0 means the longest cycle.
  std::size_t cap = 0;
  // Text index budget (symbols) before the engine lowers the cap.
  std::size_t text_budget = 40000000;
  // Cap used when the budget forces a fallback (0 = abort instead).
  std::size_t fallback_cap = 0;
};

// For each simple cycle and each offset i, the length of the longest piece
// starting at offset i (bounded by the cycle length and by cap).
struct PieceProfile {
  std::vector<std::vector<std::int32_t>> longest;   // [cycle][offset]
  std::vector<std::vector<std::int32_t>> partner;   // start vertex of a second path, -1 if none
  std::size_t cap = 0;
  bool exact = true;  // every value below cap is exact
  PieceEngine engine_used = PieceEngine::automatic;
  std::size_t text_size = 0;
};

PieceProfile piece_profile(const LabelledGraph& g, const CycleEnumeration& cycles, const OrbitPartition& orbits,
                           const PieceOptions& opt = {});

struct PieceEnumeration {
  std::vector<PieceWitness> maximal;
  std::size_t max_length = 0;
  bool exact = true;
  std::size_t cap = 0;
  bool readings_disagree = false;  // isomorphic components present
};
// Maximal pieces on simple cycles together with witnesses.
PieceEnumeration enumerate_pieces(const LabelledGraph& g, std::optional<std::size_t> max_len = std::nullopt,
                                  const PieceOptions& opt = {});

// Witness for the longest piece at (cycle, offset) of a profile.
PieceWitness piece_witness(const LabelledGraph& g, const CycleEnumeration& cycles, const OrbitPartition& orbits,
                           const Components& comps, const PieceProfile& prof, std::size_t cycle, std::size_t offset);

// Re-checks a claimed piece: both start vertices read w, lie in different
// Aut(G)-orbits, and the first path is the cited subpath.
bool verify_piece(const LabelledGraph& g, const OrbitPartition& orbits, int v1, int v2, const Word& w);

// Dart sequence read from v along w (first matching darts).
std::vector<int> read_path(const LabelledGraph& g, int v, const Word& w);

}  // namespace sct
