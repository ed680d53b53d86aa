#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sct/automorphism.hpp"
#include "sct/finite_group.hpp"
#include "sct/graph.hpp"
#include "sct/pieces.hpp"
#include "sct/sc.hpp"

namespace sct {

// One free factor: a finite group given by its table with a generating set,
// or the infinite cyclic group on one generator. Factor elements are table
// indices, or exponents for the infinite cyclic factor.
struct Factor {
  std::string name;
  bool infinite = false;
  FiniteGroup group;
  std::vector<int> gens;     // element of each local generator (finite factors)
  std::vector<int> letters;  // global generator index of each local generator
  std::size_t order() const { return infinite ? 0 : static_cast<std::size_t>(group.order()); }
};

class FreeProductSpec {
 public:
  Alphabet alphabet;  // disjoint union of the factor generating sets
  std::vector<Factor> factors;

  // {factors:[{type:"table", elements, mul, gens} | {type:"Z", gen} | {type:"cyclic", order, gen}]}.
  // gens name table elements; the generator takes the element's name unless
  // given as {name, element}. Throws std::invalid_argument.
  static FreeProductSpec from_json(const nlohmann::json& j);
  // One generator per factor; order 0 is the infinite cyclic group.
  static FreeProductSpec cyclic(const std::vector<std::pair<std::string, int>>& factors);
  void add_table_factor(const std::string& name, const FiniteGroup& g, const std::vector<std::pair<std::string, int>>& gens);
  void add_infinite_cyclic(const std::string& gen);
  nlohmann::json to_json() const;

  int factor_of(Letter x) const { return factor_of_gen_.at(static_cast<std::size_t>(generator_of(x))); }
  std::int64_t value_of(Letter x) const;
  std::int64_t identity(int f) const;
  std::int64_t mul(int f, std::int64_t a, std::int64_t b) const;
  std::int64_t inv(int f, std::int64_t a) const;
  bool is_identity(int f, std::int64_t a) const { return a == identity(f); }
  bool finite() const;

  // Word length of a factor element over S_i and a geodesic spelling (least
  // in BFS order over generators, positive letters first).
  std::size_t element_length(int f, std::int64_t a) const;
  Word spelling(int f, std::int64_t a) const;
  std::string element_name(int f, std::int64_t a) const;
  // All non-identity elements of a finite factor.
  std::vector<std::int64_t> nontrivial_elements(int f) const;

 private:
  void index_factor(std::size_t f);
  std::vector<int> factor_of_gen_, local_of_gen_;
  std::vector<std::vector<Word>> geodesic_;  // finite factors: spelling per element
};

struct Syllable {
  int factor = 0;
  std::int64_t value = 0;
  auto operator<=>(const Syllable&) const = default;
};

struct NormalForm {
  std::vector<Syllable> syllables;
  std::size_t size() const { return syllables.size(); }
  bool empty() const { return syllables.empty(); }
  const Syllable& operator[](std::size_t i) const { return syllables[i]; }
  auto operator<=>(const NormalForm&) const = default;
};

NormalForm normal_form(const FreeProductSpec& spec, const Word& w);
inline std::size_t syllable_length(const NormalForm& g) { return g.size(); }
NormalForm multiply(const FreeProductSpec& spec, const NormalForm& a, const NormalForm& b);
NormalForm inverse(const FreeProductSpec& spec, const NormalForm& a);
// Concatenation of the geodesic spellings of the syllables.
Word spell(const FreeProductSpec& spec, const NormalForm& g);
std::string format(const FreeProductSpec& spec, const NormalForm& g);
bool is_weakly_cyclically_reduced(const FreeProductSpec& spec, const NormalForm& g);
bool is_cyclically_reduced(const NormalForm& g);
// Locally geodesic: every syllable of the word is a geodesic in its factor.
bool is_locally_geodesic(const FreeProductSpec& spec, const Word& w);

// g = conjugator * core * conjugator^-1.
struct FPReduction {
  NormalForm core, conjugator;
  bool identity = false;  // input was trivial; core is empty
};
// Strips g_1 and g_l while g_l g_1 = 1.
FPReduction weakly_cyclically_reduce(const FreeProductSpec& spec, const Word& w);
FPReduction weakly_cyclically_reduce(const FreeProductSpec& spec, const NormalForm& g);
// Also merges g_l g_1 into one syllable when both lie in one factor.
FPReduction cyclically_reduce(const FreeProductSpec& spec, const NormalForm& g);

struct StarSymmetrized {
  struct Origin {
    std::size_t relator = 0;
    bool inverted = false;
    std::size_t rotation = 0;
    std::int64_t split = 0;  // left part a of the split first syllable; identity if none
    bool is_split = false;
  };
  std::vector<NormalForm> elements;  // sorted, distinct
  std::vector<Origin> origin;        // first enumeration reaching each element
  std::vector<NormalForm> roots;     // cyclically reduced relators, input order
  std::size_t generated = 0;          // enumerated conjugates before deduplication
};
// Rotations at syllable boundaries of r and r^-1, and for each rotation
// g_1 g_2 ... g_l every splitting g_1 = a b with a, b non-trivial, giving
// b g_2 ... g_l a. Splittings of an infinite cyclic syllable t^e keep both
// exponents of the sign of e. Throws std::invalid_argument on a trivial relator.
StarSymmetrized symmetrize(const FreeProductSpec& spec, const std::vector<Word>& relators);
StarSymmetrized symmetrize(const FreeProductSpec& spec, const std::vector<NormalForm>& relators);

// Longest u with r1 = u v1 and r2 = u v2 both weakly reduced, r1 != r2: the
// common syllables plus one when the next syllables share a factor.
std::size_t star_piece_length(const NormalForm& r1, const NormalForm& r2);

struct StarPower {
  std::size_t element = 0;
  std::size_t period = 0;  // |w|_*
  std::size_t exponent = 0;
};
// Largest k with r = w^k v weakly reduced, w cyclically reduced, |w|_* > 1.
StarPower star_max_power(const NormalForm& r);

struct StarOptions {
  std::optional<std::size_t> p;
  bool symmetrize = true;  // false: input must already be symmetrized
  std::size_t max_violations = 1000;
};
struct StarPosition {
  std::size_t relator = 0;
  bool inverted = false;
  std::size_t offset = 0;  // syllable where the element starts
};
struct StarReport {
  SCReport sc;  // lengths in syllables; violations cite relator indices
  std::vector<NormalForm> roots;          // cyclically reduced relators
  std::size_t positions = 0;              // syllable positions of all r and r^-1
  std::vector<std::size_t> short_relators;  // |r|_* <= 1/lambda
  std::vector<std::size_t> proper_powers;
  std::size_t max_piece = 0;
  StarPosition max_piece_at;
  // Exact when at least 3; smaller exponents are reported as found.
  std::size_t max_power = 1, max_power_period = 0;
  StarPosition max_power_at;
};
// Pieces are computed on the cyclic syllable sequences without listing the
// symmetrized set: a split of a finite syllable can start with any
// non-trivial element, so two positions in one finite factor share a first
// syllable for some choice of splits.
StarReport check_classical_star(const FreeProductSpec& spec, const std::vector<Word>& relators, Ratio lambda,
                                const StarOptions& opt = {});
nlohmann::json to_json(const StarReport& r, const FreeProductSpec& spec);

// Small instance of the test-group relators: factors H = Z (h), G+ = Z/3 (p),
// G- = Z/3 (q), C = Z/n (t), C1 = Z/n (x), C2 = Z/n (z), and for each
// s in {h, q, t, x, z} the relator s^-1 u_1 t u_2 t^-1 u_3 t ... with
// `blocks` Thue-Morse blocks in g1 = [h,x], g2 = [h,z], of distinct lengths
// first_block, first_block + 1, ... An odd block count makes the t relator
// collapse two blocks together.
struct ToyInstance {
  FreeProductSpec spec;
  std::vector<Word> relators;
  std::vector<std::vector<std::size_t>> block_lengths;
};
ToyInstance toy_test_group(std::size_t blocks = 14, int n = 5, std::size_t first_block = 40);

// Graph side.

struct Merge {
  int a = -1, b = -1;  // vertices of the input graph
  std::string reason;   // "fold" or "trivial path"
};
struct FPReductionResult {
  LabelledGraph graph;
  std::vector<int> vertex_map;  // input vertex -> output vertex
  std::vector<int> dart_map;    // input dart -> output dart
  std::vector<Merge> trace;
  std::size_t rounds = 0;
};
// Quotient by e ~ e' when the labels agree and some path from the origin of
// e to the origin of e' reads an element trivial in F, to a fixed point.
// Paths through an infinite cyclic factor are tracked with exponents bounded
// by the vertex count.
FPReductionResult reduce_over_F(const FreeProductSpec& spec, const LabelledGraph& g);

struct AttachedCopy {
  int factor = -1;
  int component = -1;         // component of the whole graph
  std::vector<int> vertices;  // by element (finite) or along the line (Z)
  bool embedded = true;
  std::string problem;
  bool contains(int v) const;
};
// Components of the S_i-labelled subgraphs, one list per graph.
std::vector<AttachedCopy> attached_copies(const FreeProductSpec& spec, const LabelledGraph& g);

struct CompletionCertificate {
  LabelledGraph original, completed;
  std::vector<AttachedCopy> copies;
  std::vector<int> edge_copy;  // original dart -> copy index
  std::vector<int> vertex_map;  // original vertex -> completed vertex
  std::vector<int> added_factors;  // factors added as their own component
  FPReductionResult reduction;
  std::optional<std::size_t> truncation;
  bool certifiable = true;
};
// Throws std::invalid_argument when an infinite factor occurs and no
// truncation radius is given; truncated results are not certifiable.
CompletionCertificate complete(const FreeProductSpec& spec, const LabelledGraph& g,
                               std::optional<std::size_t> truncation = std::nullopt);
nlohmann::json to_json(const CompletionCertificate& c);

// Same vertex count and the same multiset of (origin, label, terminus).
bool same_graph(const LabelledGraph& a, const LabelledGraph& b);
// g equals its own completion (finite factors only).
bool is_completed(const FreeProductSpec& spec, const LabelledGraph& g);

struct CylinderResult {
  bool cylinder_free = true;
  int component = -1;
  Automorphism witness;
  int copy1 = -1, copy2 = -1;
  std::vector<AttachedCopy> copies;
  std::size_t automorphisms_checked = 0;
  bool exhaustive = true;
  bool certified = true;  // false when infinite factors are truncated lines
};
// Throws std::invalid_argument unless g is folded and every finite attached
// copy is an embedded Cayley graph (infinite cyclic copies must be lines).
CylinderResult cylinder_free(const FreeProductSpec& spec, const LabelledGraph& g, std::size_t max_automorphisms = 4096);

struct StarGraphOptions {
  std::optional<std::size_t> p, n;
  std::size_t cycle_length_cap = 0;
  std::size_t cycle_count_cap = 1000000;
  std::size_t power_search_cap = 0;  // 0: twice the longest simple cycle
  PieceOptions pieces;
  std::size_t max_violations = 1000;
  bool allow_truncated = false;
};
struct StarGraphReport {
  SCReport sc;  // edge lengths
  bool completed = true;
  std::vector<AttachedCopy> copies;
  std::optional<AttachedCopy> embedding_witness;
  std::optional<CylinderResult> cylinder;
  std::size_t trivial_cycles = 0;  // simple cycles with F-trivial labels, skipped
};
StarGraphReport check_star_graphical(const FreeProductSpec& spec, const LabelledGraph& g, Ratio lambda,
                                     const StarGraphOptions& opt = {});
nlohmann::json to_json(const StarGraphReport& r, const Alphabet& a);

}  // namespace sct
