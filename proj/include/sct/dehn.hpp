#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "sct/graph.hpp"

namespace sct {

// All cyclic conjugates of the relators and their inverses, deduplicated.
// Elements point into doubled copies of r and r^-1, so memory is linear in
// the total relator length.
struct SymmetrizedSet {
  struct Element {
    int relator = 0;
    bool inverted = false;
    std::size_t rotation = 0;  // element = rotate(r or r^-1, rotation)
    std::size_t length = 0;
  };
  std::vector<Element> elements;
  std::size_t min_length = 0;

  const Letter* data(std::size_t e) const;
  Word word(std::size_t e) const;

  static SymmetrizedSet build(const std::vector<Word>& relators);

 private:
  std::vector<Word> doubled_;  // r r and r^-1 r^-1, two per relator
};

// One Dehn step on the current word w = x u y: u v is element `element` of
// the symmetrized set, |u| > |u v| / 2, and w becomes free_reduce(x v^-1 y).
struct DehnStep {
  std::size_t position = 0;
  Word removed;    // u
  Word inserted;   // v^-1
  std::size_t element = 0;
  int relator = 0;
  bool inverted = false;
  std::size_t rotation = 0;
  Word result;  // word after the step and free reduction
};

struct DehnTrace {
  Word input;  // freely reduced input
  std::vector<DehnStep> steps;
};

struct DehnResult {
  Word result;
  DehnTrace trace;
};

// Conjugate c r^e c^-1 of a relator, as produced by re-expanding a trace.
struct RelatorConjugate {
  Word conjugator;
  int relator = 0;
  bool inverted = false;
};

class DehnSolver {
 public:
  // Throws std::invalid_argument unless pres passes check_classical(1/6)
  // (skipped when certify is false).
  explicit DehnSolver(Presentation pres, bool certify = true);

  const Presentation& presentation() const { return pres_; }
  const SymmetrizedSet& symmetrized() const { return set_; }

  // Leftmost position, then longest u, then least element index.
  DehnResult reduce(const Word& w) const;
  bool is_trivial(const Word& w) const { return reduce(w).result.empty(); }
  // True iff some subword is more than half of a symmetrized element.
  bool is_dehn_irreducible(const Word& w) const;

 private:
  struct Match {
    std::size_t position = 0, length = 0, element = 0;
  };
  std::optional<Match> find_match(const Word& w) const;

  Presentation pres_;
  SymmetrizedSet set_;
  std::size_t key_len_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

DehnResult dehn_reduce(const Presentation& pres, const Word& w);
bool is_trivial(const Presentation& pres, const Word& w);

// Checks each step against the presentation, length decrease, and that
// w = (product of the re-expanded conjugates) * result in the free group.
bool verify_trace(const Presentation& pres, const Word& w, const Word& result, const DehnTrace& trace,
                  std::string* why = nullptr);
std::vector<RelatorConjugate> trace_conjugates(const Presentation& pres, const DehnTrace& trace);

nlohmann::json to_json(const DehnTrace& t, const Alphabet& a);
DehnTrace trace_from_json(const nlohmann::json& j, const Alphabet& a);

// Exponent sums modulo the integer span of the relator images.
class Abelianization {
 public:
  explicit Abelianization(const Presentation& pres);
  std::vector<std::int64_t> image(const Word& w) const;
  // True iff image(w) lies in the span of the relator images.
  bool is_zero(const Word& w) const;
  // Canonical representative of the image modulo the relation lattice.
  std::vector<std::int64_t> canonical(const Word& w) const;
  std::vector<std::int64_t> reduce(std::vector<std::int64_t> image) const;
  std::size_t rank() const { return rank_; }                // free rank
  const std::vector<std::int64_t>& torsion() const { return torsion_; }  // invariant factors > 1

 private:
  std::size_t gens_ = 0, rank_ = 0;
  std::vector<std::vector<std::int64_t>> hnf_;  // row echelon basis of the relation lattice
  std::vector<std::size_t> pivots_;
  std::vector<std::int64_t> torsion_;
};

}  // namespace sct
