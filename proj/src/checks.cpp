#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "sct/automorphism.hpp"
#include "sct/graph_io.hpp"
#include "sct/sc.hpp"

namespace sct {

std::string Ratio::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Ratio Ratio::parse(const std::string& s) {
  Ratio r;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      r.num = std::stoll(s.substr(0, slash));
      r.den = std::stoll(s.substr(slash + 1));
    } else if (s.find('.') != std::string::npos) {
      auto dot = s.find('.');
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      r.num = std::stoll(digits);
      r.den = 1;
      for (std::size_t i = dot + 1; i < s.size(); ++i) r.den *= 10;
    } else {
      r.num = std::stoll(s);
      r.den = 1;
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("bad ratio: " + s);
  }
  if (r.den <= 0 || r.num < 0) throw std::invalid_argument("bad ratio: " + s);
  std::int64_t gcd = std::gcd(r.num, r.den);
  if (gcd > 1) {
    r.num /= gcd;
    r.den /= gcd;
  }
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

namespace {

std::string condition_name(Ratio l, std::optional<std::size_t> p, std::optional<std::size_t> n) {
  if (p && n) return "C'_" + std::to_string(*n) + "(" + l.str() + "," + std::to_string(*p) + ")";
  if (p) return "C'(" + l.str() + "," + std::to_string(*p) + ")";
  return "C'(" + l.str() + ")";
}

}  // namespace

std::vector<PowerViolation> power_violations(const PowerAnalysis& an, std::size_t p, std::optional<std::size_t> n,
                                             SCStats* stats) {
  std::vector<PowerViolation> out;
  for (const auto& c : an.classes) {
    if (stats && !c.closed() && c.max_exponent > stats->max_open_power) {
      stats->max_open_power = c.max_exponent;
      stats->max_power_root = c.root;
    }
    bool reaches = c.closed() || c.max_exponent >= p;
    if (!reaches) continue;
    if (n ? c.closes_for(*n) : c.closed()) continue;
    PowerViolation v;
    v.root = c.root;
    v.unbounded = c.closed();
    v.exponent = c.closed() ? 0 : c.max_exponent;
    v.path = c.path;
    if (n)
      v.reason = "root^" + std::to_string(p) + " labels a path but root^" + std::to_string(*n) + " labels no closed path";
    else
      v.reason = "root^" + std::to_string(p) + " labels a path but root^" + std::to_string(c.max_exponent + 1) +
                 " does not";
    out.push_back(std::move(v));
  }
  return out;
}

SCReport check_graphical(const LabelledGraph& g, Ratio lambda, const SCOptions& opt) {
  auto diag = validate(g);
  if (!diag.ok()) throw std::invalid_argument("invalid graph: " + diag.problems.front());
  SCReport rep;
  rep.lambda = lambda;
  rep.p = opt.p;
  rep.n = opt.p ? opt.n : std::nullopt;
  rep.condition = condition_name(lambda, rep.p, rep.n);

  rep.reduced = is_reduced(g);
  if (rep.reduced.holds && rep.n) rep.reduced = is_strongly_reduced(g);
  if (!rep.reduced.holds) {
    rep.verdict = Verdict::fail;
    rep.notes.push_back(rep.n ? "graph is not strongly reduced" : "graph is not reduced");
    if (!is_reduced(g).holds) return rep;
  }

  auto cycles = simple_cycles(g, opt.cycle_length_cap);
  rep.cycles_exhaustive = cycles.exhaustive;
  rep.cycle_length_cap = cycles.length_cap;
  if (!cycles.exhaustive)
    rep.notes.push_back("simple cycles enumerated up to length " + std::to_string(cycles.length_cap));
  auto orbits = vertex_orbits(g);
  rep.readings_disagree = orbits.identical_components;
  if (orbits.identical_components)
    rep.notes.push_back("isomorphic components present: whole-graph and component-local piece readings may differ");

  PieceProfile prof;
  bool conclusive = cycles.exhaustive;
  try {
    prof = piece_profile(g, cycles, orbits, opt.pieces);
  } catch (const std::runtime_error& e) {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back(e.what());
    return rep;
  }
  rep.piece_cap = prof.cap;
  rep.pieces_exact = prof.exact;
  auto comps = components(g);
  bool capped = false;
  rep.stats.cycles = cycles.cycles.size();
  for (std::size_t ci = 0; ci < cycles.cycles.size(); ++ci) {
    const auto& P = prof.longest[ci];
    const std::size_t L = P.size();
    std::size_t mx = P.empty() ? 0 : static_cast<std::size_t>(*std::max_element(P.begin(), P.end()));
    rep.cycle_lengths.push_back(L);
    rep.cycle_max_piece.push_back(mx);
    rep.stats.max_piece = std::max(rep.stats.max_piece, mx);
    rep.stats.min_cycle = ci == 0 ? L : std::min(rep.stats.min_cycle, L);
    rep.stats.max_cycle = std::max(rep.stats.max_cycle, L);
    rep.stats.max_ratio = std::max(rep.stats.max_ratio, static_cast<double>(mx) / static_cast<double>(L));
    // Values are exact below the cap, enough to decide the inequality only if
    // the cap reaches lambda * L.
    if (lambda.below(prof.cap, L) && mx >= prof.cap && !capped) {
      capped = true;
      conclusive = false;
      rep.notes.push_back("piece lengths exact only up to cap " + std::to_string(prof.cap));
    }
    if (lambda.below(mx, L)) continue;
    for (std::size_t i = 0; i < L; ++i) {
      if (lambda.below(static_cast<std::size_t>(P[i]), L)) continue;
      std::size_t prev = (i + L - 1) % L;
      if (L > 1 && P[prev] >= P[i] + 1) continue;
      if (rep.violations.size() >= opt.max_violations) {
        rep.violations_truncated = true;
        break;
      }
      auto w = piece_witness(g, cycles, orbits, comps, prof, ci, i);
      rep.violations.push_back({static_cast<int>(ci), L, i, w.word, w.path1, w.path2, w.separating_evidence});
    }
  }

  if (rep.p) {
    auto an = analyse_powers(g, opt.power_search_cap);
    rep.powers_exhaustive = an.exhaustive;
    if (!an.exhaustive) {
      conclusive = false;
      rep.notes.push_back("power search bounded by walk length " + std::to_string(an.walk_cap));
    }
    rep.power_violations = power_violations(an, *rep.p, rep.n, &rep.stats);
  }

  if (!rep.violations.empty() || !rep.power_violations.empty() || !rep.reduced.holds)
    rep.verdict = Verdict::fail;
  else if (!conclusive)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = Verdict::pass;
  return rep;
}

nlohmann::json to_json(const SCReport& r, const Alphabet& a) {
  nlohmann::json j;
  j["condition"] = r.condition;
  j["lambda"] = r.lambda.str();
  if (r.p) j["p"] = *r.p;
  if (r.n) j["n"] = *r.n;
  j["verdict"] = to_string(r.verdict);
  j["reduced"] = {{"holds", r.reduced.holds}, {"reason", r.reduced.reason}, {"vertex", r.reduced.vertex}};
  auto& vs = j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"cycle", v.cycle},
                  {"cycle_length", v.cycle_length},
                  {"offset", v.offset},
                  {"piece", a.format(v.piece)},
                  {"piece_length", v.piece.size()},
                  {"ratio", std::to_string(v.piece.size()) + "/" + std::to_string(v.cycle_length)},
                  {"path1", v.path1},
                  {"path2", v.path2},
                  {"evidence", v.evidence}});
  }
  j["violations_truncated"] = r.violations_truncated;
  auto& ps = j["power_violations"] = nlohmann::json::array();
  for (const auto& v : r.power_violations)
    ps.push_back({{"root", a.format(v.root)},
                  {"exponent", v.exponent},
                  {"unbounded", v.unbounded},
                  {"path", v.path},
                  {"reason", v.reason}});
  j["statistics"] = {{"cycles", r.stats.cycles},
                     {"max_piece", r.stats.max_piece},
                     {"min_cycle", r.stats.min_cycle},
                     {"max_cycle", r.stats.max_cycle},
                     {"max_ratio", r.stats.max_ratio},
                     {"max_open_power", r.stats.max_open_power},
                     {"max_power_root", a.format(r.stats.max_power_root)}};
  j["cycle_lengths"] = r.cycle_lengths;
  j["cycle_max_piece"] = r.cycle_max_piece;
  j["cycles_exhaustive"] = r.cycles_exhaustive;
  j["cycle_length_cap"] = r.cycle_length_cap;
  j["pieces_exact"] = r.pieces_exact;
  j["piece_cap"] = r.piece_cap;
  j["readings_disagree"] = r.readings_disagree;
  j["powers_exhaustive"] = r.powers_exhaustive;
  j["notes"] = r.notes;
  return j;
}

}  // namespace sct
