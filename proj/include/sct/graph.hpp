#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sct/words.hpp"

namespace sct {

// Serre graph: darts come in pairs (e, inv(e)); a dart may be its own inverse
// only when added through add_self_inverse_dart.
class LabelledGraph {
 public:
  LabelledGraph() = default;
  explicit LabelledGraph(Alphabet a) : alphabet_(std::move(a)) {}

  Alphabet& alphabet() { return alphabet_; }
  const Alphabet& alphabet() const { return alphabet_; }

  int add_vertex();
  int add_vertices(int count);  // returns the first new index
  // Adds an edge u -> v labelled s and its inverse v -> u labelled s^-1.
  // Returns the dart u -> v.
  int add_edge(int u, int v, Letter s);
  // Adds a path from u to v labelled w through fresh interior vertices.
  std::vector<int> add_path(int u, int v, const Word& w);
  // Adds a closed path labelled w through fresh vertices; returns its darts.
  std::vector<int> add_cycle(const Word& w);
  int add_self_inverse_dart(int v, Letter s);
  // Raw insertion used by importers; consistency is checked by validate().
  int add_raw_dart(int from, int to, Letter s);
  void set_inverse(int e, int f);

  int num_vertices() const { return static_cast<int>(out_.size()); }
  int num_darts() const { return static_cast<int>(origin_.size()); }
  int origin(int e) const { return origin_[e]; }
  int terminus(int e) const { return terminus_[e]; }
  int inv(int e) const { return inverse_[e]; }
  Letter label(int e) const { return label_[e]; }
  const std::vector<int>& out(int v) const { return out_[v]; }
  int degree(int v) const { return static_cast<int>(out_[v].size()); }

  // First dart leaving v with label s, or -1.
  int follow(int v, Letter s) const;
  // End vertex of the path from v labelled w, following first matching darts;
  // -1 if w cannot be read. Exact for reduced graphs.
  int read(int v, const Word& w) const;
  Word path_label(const std::vector<int>& darts) const;

  // Optional vertex names (kept by importers and constructions).
  std::map<std::string, int> marks;
  std::vector<std::string> vertex_names;

 private:
  Alphabet alphabet_;
  std::vector<int> origin_, terminus_, inverse_;
  std::vector<Letter> label_;
  std::vector<std::vector<int>> out_;
};

struct Components {
  std::vector<int> of;                    // component index per vertex
  std::vector<std::vector<int>> vertices;  // sorted vertex lists
  std::size_t count() const { return vertices.size(); }
};
Components components(const LabelledGraph& g);

struct Diagnostics {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};
Diagnostics validate(const LabelledGraph& g);

struct ReducedWitness {
  bool holds = true;
  int vertex = -1;
  int dart1 = -1, dart2 = -1;
  std::string reason;
};
ReducedWitness is_reduced(const LabelledGraph& g);
ReducedWitness is_strongly_reduced(const LabelledGraph& g);

// Classical presentation; relators as words over the alphabet.
struct Presentation {
  Alphabet alphabet;
  std::vector<Word> relators;
};
Presentation parse_presentation(const std::string& text);
std::string format_presentation(const Presentation& p);
// One closed path per relator.
LabelledGraph disjoint_cycles(const Presentation& p);

}  // namespace sct
