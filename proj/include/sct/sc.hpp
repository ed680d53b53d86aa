#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sct/graph.hpp"
#include "sct/pieces.hpp"

namespace sct {

// Exact small-cancellation parameter num/den.
struct Ratio {
  std::int64_t num = 1, den = 6;
  // a < lambda * b
  bool below(std::size_t a, std::size_t b) const {
    return static_cast<__int128>(a) * den < static_cast<__int128>(num) * static_cast<__int128>(b);
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  static Ratio parse(const std::string& s);  // "1/6", "0.25", "1"
};

// One class of primitive cyclically reduced roots, up to rotation and inversion.
struct PowerClass {
  Word root;                    // as first observed
  std::size_t max_exponent = 0;  // largest k seen with root^k on an open path
  std::size_t run_length = 0;    // letters in that occurrence
  std::vector<int> path;         // darts of that occurrence
  // Minimal d with a closed path labelled root^d, one per closing orbit; root^n
  // labels a closed path iff some entry divides n. Empty: no closed powers.
  std::vector<std::size_t> closing_periods;
  bool closed() const { return !closing_periods.empty(); }
  bool closes_for(std::size_t n) const;
};

struct PowerAnalysis {
  std::vector<PowerClass> classes;  // exponent >= 2 or with closed powers
  bool exhaustive = true;
  // Walk length searched in components that are not single cycles (0 if none).
  std::size_t walk_cap = 0;
};
// search_cap bounds the walks scanned outside cycle components (0 picks
// three times the longest simple cycle, at least 64).
PowerAnalysis analyse_powers(const LabelledGraph& g, std::size_t search_cap = 0, std::size_t budget = 40000000);

struct MaxPower {
  Word root;  // root of the largest open power, empty if none
  std::size_t exponent = 0;
  std::vector<int> path;
  bool is_closed_extension = false;  // root^n closes, for the requested n
  std::vector<PowerClass> closed_families;
  bool exhaustive = true;
};
MaxPower max_power_in_paths(const LabelledGraph& g, std::size_t search_cap = 0, std::optional<std::size_t> n = {});

struct PieceViolation {
  int cycle = -1;  // simple cycle (graphical) or relator (classical)
  std::size_t cycle_length = 0;
  std::size_t offset = 0;
  Word piece;
  std::vector<int> path1, path2;
  std::string evidence;
};

struct PowerViolation {
  Word root;
  std::size_t exponent = 0;  // 0 when unbounded
  bool unbounded = false;
  std::vector<int> path;
  std::string reason;
};

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct SCStats {
  std::size_t cycles = 0;
  std::size_t max_piece = 0;
  std::size_t min_cycle = 0, max_cycle = 0;
  std::size_t max_open_power = 0;
  Word max_power_root;
  double max_ratio = 0;  // max over cycles of longest piece / cycle length
};

struct SCReport {
  std::string condition;
  Ratio lambda;
  std::optional<std::size_t> p, n;
  Verdict verdict = Verdict::pass;
  ReducedWitness reduced;  // reducedness or strong reducedness, per condition
  std::vector<PieceViolation> violations;
  bool violations_truncated = false;
  std::vector<PowerViolation> power_violations;
  SCStats stats;
  std::vector<std::size_t> cycle_lengths, cycle_max_piece;
  bool cycles_exhaustive = true;
  std::size_t cycle_length_cap = 0;
  bool pieces_exact = true;
  std::size_t piece_cap = 0;
  bool readings_disagree = false;
  bool powers_exhaustive = true;
  std::vector<std::string> notes;
  bool passed() const { return verdict == Verdict::pass; }
};

struct SCOptions {
  std::optional<std::size_t> p, n;
  PieceOptions pieces;
  std::size_t cycle_length_cap = 0;
  std::size_t power_search_cap = 0;
  std::size_t max_violations = 1000;
};

// Power clause over an analysis: roots reaching exponent p whose powers do
// not all extend (without n) or whose n-th power closes nowhere (with n).
std::vector<PowerViolation> power_violations(const PowerAnalysis& an, std::size_t p, std::optional<std::size_t> n,
                                             SCStats* stats = nullptr);

// C'(lambda); with p: C'(lambda,p) (all powers extend); with p and n:
// C'_n(lambda,p) (strongly reduced, n-th powers close).
SCReport check_graphical(const LabelledGraph& g, Ratio lambda, const SCOptions& opt = {});

// Pieces as common prefixes of distinct cyclic conjugates of R and R^-1.
SCReport check_classical(const Presentation& pres, Ratio lambda, std::size_t max_violations = 1000);

nlohmann::json to_json(const SCReport& r, const Alphabet& a);

}  // namespace sct
