#pragma once

// Brute-force reference implementations used by the unit and acceptance tests.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sct/graph.hpp"
#include "sct/pieces.hpp"
#include "sct/words.hpp"

namespace oracle {

using sct::Word;

// Leftmost k-th power, shortest base; O(n^3).
std::optional<sct::PowerWitness> kth_power(const Word& w, std::size_t k);

// Maximal runs with primitive period and exponent >= 2.
std::vector<sct::Run> runs(const Word& w, std::size_t min_exponent);

// Divisor-length candidate roots.
sct::PrimitiveRoot primitive_root(const Word& w);

// All label-preserving automorphisms of the whole graph, as vertex maps.
// Assumes a reduced graph. Stops after `cap` maps.
std::vector<std::vector<int>> automorphisms(const sct::LabelledGraph& g, std::size_t cap = 100000);

// Longest piece starting at each offset of each cycle, from all path pairs and
// all automorphisms.
std::vector<std::vector<std::int32_t>> piece_profile(const sct::LabelledGraph& g,
                                                     const std::vector<std::vector<int>>& cycles);

// Number of simple cycles (edge sets of connected 2-regular subgraphs).
std::size_t count_simple_cycles(const sct::LabelledGraph& g);

// Longest common prefix of two distinct cyclic conjugates, per relator.
std::vector<std::size_t> classical_max_piece(const std::vector<Word>& relators);

// Random reduced graph with at most max_edges edges over `gens` generators.
sct::LabelledGraph random_reduced_graph(std::mt19937_64& rng, int max_vertices, int max_edges, int gens);

Word random_word(std::mt19937_64& rng, std::size_t len, int gens, bool reduced);

}  // namespace oracle

namespace oracle {

// Some subword is more than half of a cyclic conjugate of a relator or its
// inverse; compares every subword against every conjugate.
bool has_dehn_subword(const Word& w, const std::vector<Word>& relators);

// Product of k conjugates c r^{+-1} c^-1 with random reduced c of length <= conj_len.
Word random_conjugate_product(std::mt19937_64& rng, const sct::Presentation& p, std::size_t k, std::size_t conj_len);

// Homomorphisms to the symmetric group on `points` points, by random search
// over generator images; images are stored as arrays image[g][i].
std::vector<std::vector<std::vector<int>>> symmetric_quotients(const sct::Presentation& p, int points,
                                                               std::size_t want, std::size_t tries,
                                                               std::uint64_t seed);
// True iff w acts non-trivially in the quotient.
bool acts_nontrivially(const std::vector<std::vector<int>>& q, const Word& w);

}  // namespace oracle

namespace oracle {

// Free products of cyclic groups, one generator per factor; orders[g] = 0
// for Z. Syllables are (generator, exponent) with exponents in [1, n) for
// Z/n and non-zero for Z.
using Syllables = std::vector<std::pair<int, std::int64_t>>;
Syllables cyclic_reduce_word(const std::vector<int>& orders, const Word& w);

// Every a^-1 R a with R a rotation of r or r^-1 and a a left part of its
// first syllable, as a sorted distinct list.
std::vector<Syllables> star_conjugates(const std::vector<int>& orders, const std::vector<Word>& relators);

struct StarBrute {
  std::size_t max_piece = 0;
  bool piece_violation = false;
  std::size_t max_power = 0;  // over every element, exponent of the longest prefix power
};
StarBrute star_brute(const std::vector<int>& orders, const std::vector<Word>& relators, std::int64_t num,
                     std::int64_t den);

}  // namespace oracle
