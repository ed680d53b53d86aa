#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sct/finite_group.hpp"
#include "sct/graph.hpp"
#include "sct/sc.hpp"

namespace sct {

// Thue-Morse window of length k starting at k^2 mod 1024.
Word tm_block(std::size_t k, Letter a, Letter b);

// Disjoint cycles over {a,b,t}: cycle i is r_i if i is in I, else r_i^n, where
// r_i = t u_{block*i+1} t u_{block*i+2} ... t u_{block*i+block}.
LabelledGraph gamma_I(const std::set<std::size_t>& I, std::size_t i_max, std::size_t n, std::size_t block = 100);
Word gamma_relator(std::size_t i, std::size_t block, Letter a, Letter b, Letter t);

struct RipsResult {
  LabelledGraph graph;
  std::size_t conjugation_cycles = 0;
  std::vector<std::vector<std::size_t>> block_lengths;  // padding lengths per cycle
  std::size_t blocks_per_cycle = 0;
  int attempts = 0;
  SCReport certificate;
};
// Cycles a^e u a^-e t u_k1 t u_k2 ... for each generator a, e = +-1 and
// u in {x,y,t}, plus one cycle g1 u_k1 g2 u_k2 ... per relator, where g is the
// letter sequence of the relator conjugated by a power of the first generator.
// Padding lengths are distinct across the graph; the number of blocks per
// cycle grows until the checker certifies C'_n(lambda,3).
RipsResult rips_graph(const Presentation& Q, Ratio lambda, std::size_t n, std::size_t min_len = 10000,
                      int max_attempts = 6);

// u_k from the Thue-Morse word: length in (3(k-1), 3k], starting and ending
// with b (a, b = generators 0, 1).
Word sq_block(std::size_t k);
// Cycles Lambda_1..Lambda_imax labelled r_i = a^3 u_{iN+1} ... a^3 u_{iN+N},
// v_i joined to w_{i+1} by a path labelled b a^-1 b. Marks "v<i>" and "w<i>".
LabelledGraph sq_graph(std::size_t N, std::size_t i_max);
Word sq_relator(std::size_t i, std::size_t N);

// Based cover of a connected graph for a map from the free basis of pi_1 to a
// finite group. The basis: positive darts outside a BFS spanning tree from
// vertex 0, in dart order. Vertex (x, v) has index x * |V| + v.
std::vector<int> cover_basis(const LabelledGraph& g0);
struct Cover {
  LabelledGraph graph;
  std::vector<int> vertex_projection, dart_projection;
};
Cover finite_cover(const LabelledGraph& g0, const FiniteGroup& A, const std::vector<int>& images);

// r_m = a^-1 b^{p1 m} a^{p2 m} ... b^{p_k m}, s_m = b^-1 a^{q1 m} b^{q2 m} ... a^{q_l m}.
struct PrideSchedule {
  std::vector<std::int64_t> p, q;
  std::size_t cap = 3;  // m = 1..cap
  static PrideSchedule standard();
};
Word pride_r(const std::vector<std::int64_t>& p, std::int64_t m);
Word pride_s(const std::vector<std::int64_t>& q, std::int64_t m);
Presentation pride_presentation(const PrideSchedule& s);

struct PrideCertificate {
  SCReport pieces;  // classical C'(1/6)
  // Roots with a third power on some relator; each must be a generator whose
  // exponents grow without bound along the infinite family.
  std::vector<Word> cube_roots;
  bool powers_unbounded_in_family = false;
  bool passed = false;
};
PrideCertificate certify_pride(const PrideSchedule& s, Ratio lambda = {1, 6}, std::size_t p = 3);

struct CollapseReport {
  std::vector<bool> trivial;  // per generator
  bool all_trivial = false;
  std::string verdict;  // "trivial group" or "unknown"
  std::vector<std::string> steps;
  std::vector<Word> final_relators;
};
CollapseReport burnside_collapse(const Presentation& pres, std::int64_t n);

struct SL2Stats {
  std::size_t order = 0;
  bool regular = false;
  int degree = 0;
  int girth = 0;
  int diameter = 0;
};
struct SL2Cayley {
  LabelledGraph graph;
  std::vector<std::array<int, 4>> matrices;  // a b c d, row major
  SL2Stats stats;
};
SL2Cayley sl2_cayley(int p);

// Girth and diameter of a connected vertex-transitive graph by BFS from vertex 0.
int girth_from_root(const LabelledGraph& g);
int eccentricity(const LabelledGraph& g, int v);

// Product labelling; g1 and g2 share origins, termini and inverses dart for
// dart. Generators are pairs (s, y) with s in S1 and y in S2 or S2^-1, named
// "(s,y)" and "(s,y-)".
LabelledGraph product_labelling(const LabelledGraph& g1, const LabelledGraph& g2);

struct NonrepetitiveResult {
  bool success = false;
  std::optional<LabelledGraph> graph;
  int tries = 0;
  std::size_t path_cap = 0;
};
// Random labels over alphabet_size letters until every simple path of length
// at most path_cap reads a square-free word.
NonrepetitiveResult nonrepetitive_labelling(const LabelledGraph& g, int alphabet_size, std::uint64_t seed,
                                            int max_tries, std::size_t path_cap = 12);
// First simple path (length <= cap) whose label contains a square, if any.
std::optional<std::vector<int>> square_on_simple_path(const LabelledGraph& g, std::size_t cap);

}  // namespace sct
