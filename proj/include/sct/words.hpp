#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sct {

// A letter is a non-zero integer: +k is generator k-1, -k its formal inverse.
using Letter = std::int32_t;
using Word = std::vector<Letter>;

inline Letter inverse(Letter x) { return -x; }
inline int generator_of(Letter x) { return (x > 0 ? x : -x) - 1; }
inline Letter letter(int gen, bool inv = false) { return inv ? -(gen + 1) : gen + 1; }

class alphabet_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  // Adds a generator if absent and returns its index.
  int add(const std::string& name);
  int index(const std::string& name) const;  // -1 if absent
  std::size_t size() const { return names_.size(); }
  const std::string& name(int gen) const { return names_.at(gen); }
  const std::vector<std::string>& names() const { return names_; }

  // Whitespace separated letters: `a`, `a^-1`, and `A` for `a^-1` when every
  // generator name is a single lowercase character.
  Word parse(std::string_view text) const;
  Letter parse_letter(std::string_view tok) const;
  std::string format(const Word& w) const;
  std::string format_letter(Letter x) const;

  // Throws alphabet_error if some letter is outside the alphabet.
  void check(const Word& w) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  bool short_names() const;
};

Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);
Word power(const Word& w, std::size_t k);
// Letters w[pos], ..., w[pos+len-1] with indices taken mod |w|.
Word cyclic_subword(const Word& w, std::size_t pos, std::size_t len);
Word rotate(const Word& w, std::size_t k);

Word free_reduce(const Word& w);
bool is_reduced(const Word& w);
bool is_cyclically_reduced(const Word& w);

struct CyclicReduction {
  Word core;
  Word conjugator;  // w = conjugator * core * conjugator^-1
};
CyclicReduction cyclic_reduce(const Word& w);

std::vector<Word> cyclic_conjugates(const Word& w);

struct PrimitiveRoot {
  Word root;
  std::size_t exponent = 1;
};
PrimitiveRoot primitive_root(const Word& w);
bool is_primitive(const Word& w);

// Index of the lexicographically least rotation (Booth).
std::size_t least_rotation(const Word& w);
Word canonical_necklace(const Word& w);

Word thue_morse(std::size_t len);

struct PowerWitness {
  Word base;
  std::size_t position = 0;
};
// Leftmost occurrence of a k-th power, shortest base among those; nullopt if
// the word is k-th power free.
std::optional<PowerWitness> find_kth_power(const Word& w, std::size_t k);
bool is_kth_power_free(const Word& w, std::size_t k);

// Maximal repetitions: w[start, start+length) has primitive period `period`
// and length >= min_exponent * period. Periods above max_period are skipped
// (0 = no limit). Sorted by (start, period).
struct Run {
  std::size_t start = 0, length = 0, period = 0;
  std::size_t exponent() const { return length / period; }
};
std::vector<Run> find_runs(const Word& w, std::size_t min_exponent = 2, std::size_t max_period = 0);

}  // namespace sct
