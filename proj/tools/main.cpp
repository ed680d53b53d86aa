#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sct/constructions.hpp"
#include "sct/dehn.hpp"
#include "sct/freeprod.hpp"
#include "sct/geometry.hpp"
#include "sct/graph_io.hpp"
#include "sct/sc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sct;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kPass = 0, kFail = 1, kInconclusive = 2, kInputError = 3 };

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int exit_of(Verdict v) {
  switch (v) {
    case Verdict::pass: return kPass;
    case Verdict::fail: return kFail;
    default: return kInconclusive;
  }
}

// State of one invocation. Everything under `hashed` must be a function of
// the command line and the input bytes.
struct Run {
  std::vector<std::string> argv;
  std::string command;
  json params = json::object();
  json inputs = json::array();
  json result = json::object();
  std::string verdict = "pass";
  int code = kPass;
  json env = json::object();
  bool dry = false;  // replay: no files written

  std::string input(const std::string& role, const std::string& path) {
    std::string text = read_file(path);
    inputs.push_back({{"role", role}, {"path", path}, {"bytes", text.size()}, {"sha256", sha256(text)}});
    return text;
  }
  void write(const std::string& path, const std::string& text) const {
    if (dry || path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write " + path);
    out << text;
  }
  void set(Verdict v) {
    verdict = to_string(v);
    code = exit_of(v);
  }
  json hashed() const {
    return {{"tool", "sct"},   {"version", kVersion}, {"command", command}, {"argv", argv},
            {"params", params}, {"inputs", inputs},   {"result", result},   {"verdict", verdict},
            {"exit_code", code}};
  }
};

json parse_json_input(const std::string& text, const std::string& path) {
  try {
    return parse_json_text(text);
  } catch (const parse_error& e) {
    throw input_error(path + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.what());
  }
}

Presentation load_presentation(Run& run, const std::string& path) {
  return parse_presentation(run.input("presentation", path));
}

// Condition strings: C'(1/6), C'(1/6,3), C'_n(1/6,3) n=5, C'_*(1/6), C'_*(1/6,10).
struct Condition {
  bool star = false;
  Ratio lambda;
  std::optional<std::size_t> p, n;
  std::string text;
};

Condition parse_condition(const std::string& s) {
  static const std::regex re(R"(^\s*C'(_n|_\*)?\(\s*([0-9./]+)\s*(?:,\s*([0-9]+)\s*)?\)\s*(?:n\s*=\s*([0-9]+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw input_error("cannot parse condition '" + s + "'");
  Condition c;
  c.text = s;
  c.star = m[1] == "_*";
  try {
    c.lambda = Ratio::parse(m[2]);
  } catch (const std::exception& e) {
    throw input_error("condition '" + s + "': " + e.what());
  }
  if (m[3].matched) c.p = std::stoull(m[3]);
  if (m[4].matched) c.n = std::stoull(m[4]);
  if (m[1] == "_n" && (!c.p || !c.n)) throw input_error("C'_n needs p and n, as in C'_n(1/6,3) n=5");
  if (m[1].matched == false && c.n) throw input_error("n is only meaningful for C'_n or C'_*");
  if (c.p && *c.p == 0) throw input_error("p must be positive");
  return c;
}

Word map_word(const Alphabet& from, const Word& w, const Alphabet& to) {
  Word out;
  for (Letter x : w) {
    int g = to.index(from.name(generator_of(x)));
    if (g < 0) throw input_error("generator '" + from.name(generator_of(x)) + "' is not in the free product spec");
    out.push_back(x > 0 ? g + 1 : -(g + 1));
  }
  return out;
}

json summary(const CompletionCertificate& c) {
  json j = to_json(c);
  j.erase("original");
  j.erase("completed");
  j["completed_vertices"] = c.completed.num_vertices();
  j["completed_darts"] = c.completed.num_darts();
  j["completed_sha256"] = sha256(graph_to_json(c.completed).dump());
  return j;
}

// ---- check

struct CheckArgs {
  std::string graph, pres, spec, cond, completed_out;
  bool complete = false;
  std::optional<std::size_t> truncate;
  std::size_t cycle_cap = 0, power_cap = 0, piece_cap = 0, max_violations = 1000;
};

void cmd_check(Run& run, const CheckArgs& a) {
  Condition c = parse_condition(a.cond);
  run.params = {{"condition", a.cond},  {"lambda", c.lambda.str()},       {"complete", a.complete},
                {"cycle_cap", a.cycle_cap}, {"power_cap", a.power_cap}, {"piece_cap", a.piece_cap},
                {"max_violations", a.max_violations}};
  if (c.p) run.params["p"] = *c.p;
  if (c.n) run.params["n"] = *c.n;
  if (a.truncate) run.params["truncate"] = *a.truncate;
  if (!a.graph.empty() && !a.pres.empty()) throw input_error("give one of --graph and --pres");

  if (c.star) {
    if (a.spec.empty()) throw input_error("C'_* needs --spec");
    json sj = parse_json_input(run.input("spec", a.spec), a.spec);
    const json& fj = sj.contains("spec") ? sj["spec"] : sj;
    FreeProductSpec spec = FreeProductSpec::from_json(fj);
    if (!a.graph.empty()) {
      json gj = parse_json_input(run.input("graph", a.graph), a.graph);
      LabelledGraph g = graph_from_json(gj);
      StarGraphOptions opt;
      opt.p = c.p;
      opt.n = c.n;
      opt.cycle_length_cap = a.cycle_cap;
      opt.power_search_cap = a.power_cap;
      opt.pieces.cap = a.piece_cap;
      opt.max_violations = a.max_violations;
      opt.allow_truncated = a.truncate.has_value();
      if (a.complete) {
        CompletionCertificate cert = complete(spec, g, a.truncate);
        run.result["completion"] = summary(cert);
        run.write(a.completed_out, graph_to_json(cert.completed).dump(2) + "\n");
        g = cert.completed;
      }
      StarGraphReport rep = check_star_graphical(spec, g, c.lambda, opt);
      run.result["report"] = to_json(rep, g.alphabet());
      run.set(rep.sc.verdict);
      return;
    }
    std::vector<Word> relators;
    if (!a.pres.empty()) {
      Presentation p = load_presentation(run, a.pres);
      for (auto& r : p.relators) relators.push_back(map_word(p.alphabet, r, spec.alphabet));
    } else if (sj.contains("relators")) {
      for (auto& r : sj["relators"]) relators.push_back(spec.alphabet.parse(r.get<std::string>()));
    } else {
      throw input_error("C'_* needs --graph, --pres or relators in the spec file");
    }
    StarOptions opt;
    opt.p = c.p;
    opt.max_violations = a.max_violations;
    StarReport rep = check_classical_star(spec, relators, c.lambda, opt);
    run.result["report"] = to_json(rep, spec);
    run.set(rep.sc.verdict);
    return;
  }

  SCOptions opt;
  opt.p = c.p;
  opt.n = c.n;
  opt.cycle_length_cap = a.cycle_cap;
  opt.power_search_cap = a.power_cap;
  opt.pieces.cap = a.piece_cap;
  opt.max_violations = a.max_violations;
  if (!a.graph.empty()) {
    json gj = parse_json_input(run.input("graph", a.graph), a.graph);
    LabelledGraph g = graph_from_json(gj);
    SCReport rep = check_graphical(g, c.lambda, opt);
    run.result["report"] = to_json(rep, g.alphabet());
    run.set(rep.verdict);
  } else if (!a.pres.empty()) {
    Presentation p = load_presentation(run, a.pres);
    SCReport rep;
    if (c.p) {
      run.result["model"] = "disjoint relator cycles";
      rep = check_graphical(disjoint_cycles(p), c.lambda, opt);
    } else {
      run.result["model"] = "classical";
      rep = check_classical(p, c.lambda, a.max_violations);
    }
    run.result["report"] = to_json(rep, p.alphabet);
    run.set(rep.verdict);
  } else {
    throw input_error("check needs --graph or --pres");
  }
}

// ---- generate

struct GenerateArgs {
  std::string family, out, I = "", pres;
  std::size_t imax = 2, n = 5, block = 100, p = 5, N = 50, cap = 3, min_len = 10000;
  std::size_t blocks = 14, order = 5, first_block = 40;
  std::string lambda = "1/6";
  int max_attempts = 6;
  bool certify = false;
};

std::set<std::size_t> parse_index_list(const std::string& s) {
  std::set<std::size_t> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    if (tok.find_first_not_of("0123456789") != std::string::npos) throw input_error("--I: bad index '" + tok + "'");
    out.insert(std::stoull(tok));
  }
  return out;
}

json graph_summary(const LabelledGraph& g) {
  return {{"vertices", g.num_vertices()}, {"edges", g.num_darts() / 2}, {"generators", g.alphabet().names()}};
}

// Produces the artifact and its result section; the artifact is what --out
// receives and what the cache stores.
struct Generated {
  json artifact, result;
  std::string verdict = "generated";
  int code = kPass;
};

Generated generate(Run& run, const GenerateArgs& a) {
  Generated out;
  auto certified = [&](Verdict v) {
    out.verdict = to_string(v);
    out.code = exit_of(v);
  };
  const std::string& f = a.family;
  if (f == "gamma_I") {
    auto I = parse_index_list(a.I);
    LabelledGraph g = gamma_I(I, a.imax, a.n, a.block);
    out.artifact = graph_to_json(g);
    out.result["graph"] = graph_summary(g);
    if (a.certify) {
      SCOptions opt;
      opt.p = 3;
      opt.n = a.n;
      SCReport rep = check_graphical(g, {1, 6}, opt);
      out.artifact["certificate"] = to_json(rep, g.alphabet());
      certified(rep.verdict);
    }
  } else if (f == "sl2") {
    SL2Cayley c = sl2_cayley(static_cast<int>(a.p));
    out.artifact = graph_to_json(c.graph);
    json stats = {{"order", c.stats.order},   {"regular", c.stats.regular},   {"degree", c.stats.degree},
                  {"girth", c.stats.girth},   {"diameter", c.stats.diameter}};
    out.artifact["stats"] = stats;
    out.result["graph"] = graph_summary(c.graph);
    out.result["stats"] = stats;
  } else if (f == "sq") {
    LabelledGraph g = sq_graph(a.N, a.imax);
    out.artifact = graph_to_json(g);
    out.result["graph"] = graph_summary(g);
    if (a.certify) {
      SCReport rep = check_graphical(g, {1, 6});
      out.artifact["certificate"] = to_json(rep, g.alphabet());
      out.result["max_ratio"] = rep.stats.max_ratio;
      certified(rep.verdict);
    }
  } else if (f == "pride") {
    PrideSchedule s = PrideSchedule::standard();
    s.cap = a.cap;
    Presentation pres = pride_presentation(s);
    out.artifact = {{"presentation", format_presentation(pres)}, {"p", s.p}, {"q", s.q}, {"cap", s.cap}};
    out.result["relators"] = pres.relators.size();
    if (a.certify) {
      PrideCertificate pc = certify_pride(s);
      json roots = json::array();
      for (auto& r : pc.cube_roots) roots.push_back(pres.alphabet.format(r));
      json collapse = json::array();
      bool trivial = true;
      for (std::size_t n = 1; n <= s.cap; ++n) {
        CollapseReport cr = burnside_collapse(pres, static_cast<std::int64_t>(n));
        trivial = trivial && cr.all_trivial;
        collapse.push_back({{"n", n}, {"verdict", cr.verdict}, {"steps", cr.steps}});
      }
      out.artifact["certificate"] = {{"pieces", to_json(pc.pieces, pres.alphabet)},
                                     {"cube_roots", roots},
                                     {"powers_unbounded_in_family", pc.powers_unbounded_in_family},
                                     {"passed", pc.passed},
                                     {"collapse", collapse}};
      out.result["collapse_trivial"] = trivial;
      out.result["passed"] = pc.passed;
      certified(pc.passed && trivial ? Verdict::pass : Verdict::fail);
    }
  } else if (f == "rips") {
    if (a.pres.empty()) throw input_error("rips needs --pres");
    Presentation Q = load_presentation(run, a.pres);
    RipsResult r = rips_graph(Q, Ratio::parse(a.lambda), a.n, a.min_len, a.max_attempts);
    out.artifact = graph_to_json(r.graph);
    out.result["graph"] = graph_summary(r.graph);
    out.result["blocks_per_cycle"] = r.blocks_per_cycle;
    out.result["attempts"] = r.attempts;
    // rips certifies while it grows, so the certificate is always present
    out.artifact["certificate"] = to_json(r.certificate, r.graph.alphabet());
    certified(r.certificate.verdict);
  } else if (f == "toy") {
    ToyInstance t = toy_test_group(a.blocks, static_cast<int>(a.order), a.first_block);
    json rels = json::array();
    for (auto& r : t.relators) rels.push_back(t.spec.alphabet.format(r));
    out.artifact = {{"spec", t.spec.to_json()}, {"relators", rels}, {"block_lengths", t.block_lengths}};
    out.result["relators"] = t.relators.size();
    if (a.certify) {
      StarOptions opt;
      opt.p = 10;
      StarReport rep = check_classical_star(t.spec, t.relators, {1, 6}, opt);
      out.artifact["certificate"] = to_json(rep, t.spec);
      out.result["max_piece"] = rep.max_piece;
      out.result["max_power"] = rep.max_power;
      certified(rep.sc.verdict);
    }
  }
  return out;
}

void cmd_generate(Run& run, const GenerateArgs& a) {
  json& p = run.params;
  p = {{"family", a.family}, {"certify", a.certify}};
  if (a.family == "gamma_I") p.update({{"I", a.I}, {"imax", a.imax}, {"n", a.n}, {"block", a.block}});
  if (a.family == "sl2") p["p"] = a.p;
  if (a.family == "sq") p.update({{"N", a.N}, {"imax", a.imax}});
  if (a.family == "pride") p["cap"] = a.cap;
  if (a.family == "rips")
    p.update({{"n", a.n}, {"lambda", a.lambda}, {"min_len", a.min_len}, {"max_attempts", a.max_attempts}});
  if (a.family == "toy") p.update({{"blocks", a.blocks}, {"order", a.order}, {"first_block", a.first_block}});

  Generated g;
  const char* cache = std::getenv("SCT_CACHE_DIR");
  std::string key;
  bool hit = false;
  if (cache && *cache) {
    // rips reads an input file; key on its hash as well
    std::string pres_hash = a.pres.empty() ? "" : sha256(read_file(a.pres));
    key = sha256(json{{"version", kVersion}, {"params", p}, {"pres", pres_hash}}.dump());
    fs::path file = fs::path(cache) / ("generate-" + key + ".json");
    if (fs::exists(file)) {
      json c = json::parse(read_file(file.string()));
      g.artifact = c["artifact"];
      g.result = c["result"];
      g.verdict = c["verdict"];
      g.code = c["code"];
      if (!a.pres.empty()) run.input("presentation", a.pres);
      hit = true;
    }
  }
  if (!hit) {
    g = generate(run, a);
    if (!key.empty() && !run.dry) {
      fs::create_directories(cache);
      std::ofstream(fs::path(cache) / ("generate-" + key + ".json"))
          << json{{"artifact", g.artifact}, {"result", g.result}, {"verdict", g.verdict}, {"code", g.code}}.dump();
    }
  }
  run.env["cache"] = key.empty() ? "off" : (hit ? "hit" : "miss");
  std::string text = g.artifact.dump(2) + "\n";
  run.result = g.result;
  run.result["artifact_sha256"] = sha256(text);
  run.write(a.out, text);
  run.verdict = g.verdict;
  run.code = g.code;
}

// ---- wordproblem

struct WordArgs {
  std::string pres, trace, verify;
  std::vector<std::string> words;
  bool uncertified = false;
};

void cmd_wordproblem(Run& run, const WordArgs& a) {
  run.params = {{"words", a.words}, {"certify", !a.uncertified}, {"trace", !a.trace.empty()}};
  Presentation pres = load_presentation(run, a.pres);
  DehnSolver solver(pres, !a.uncertified);
  std::vector<Word> words;
  for (auto& s : a.words) words.push_back(pres.alphabet.parse(s));

  json given;
  if (!a.verify.empty()) {
    given = parse_json_input(run.input("trace", a.verify), a.verify);
    if (!given.is_array()) given = json::array({given});
    if (given.size() != words.size()) throw input_error("--verify-trace: trace count differs from word count");
  }
  json traces = json::array(), answers = json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < words.size(); ++i) {
    DehnResult r = solver.reduce(words[i]);
    json t = to_json(r.trace, pres.alphabet);
    json ans = {{"word", pres.alphabet.format(words[i])},
                {"result", pres.alphabet.format(r.result)},
                {"steps", r.trace.steps.size()},
                {"answer", r.result.empty() ? "trivial" : (a.uncertified ? "unknown" : "nontrivial")}};
    if (!a.verify.empty()) {
      DehnTrace dt = trace_from_json(given[i], pres.alphabet);
      Word res = dt.steps.empty() ? dt.input : dt.steps.back().result;
      std::string why;
      bool ok = verify_trace(pres, words[i], res, dt, &why);
      ans["trace_verified"] = ok;
      if (!ok) ans["trace_problem"] = why;
      all_ok = all_ok && ok;
    }
    answers.push_back(ans);
    traces.push_back(t);
  }
  run.result["words"] = answers;
  if (!a.trace.empty()) run.write(a.trace, (traces.size() == 1 ? traces[0] : traces).dump(2) + "\n");
  run.set(all_ok ? Verdict::pass : Verdict::fail);
}

// ---- ball

struct BallArgs {
  std::string pres, dot;
  std::size_t free_rank = 0, radius = 2, cap = 200000, samples = 0;
  std::optional<std::size_t> trusted_radius;
  std::uint64_t seed = 0;
  bool coneoff = false, chords = false;
};

std::string ball_dot(const CayleyBall& b, const ConeOffBall* cb, const Presentation& pres) {
  std::ostringstream out;
  out << "graph ball {\n  node [shape=point];\n";
  for (std::size_t v = 0; v < b.size(); ++v)
    out << "  " << v << " [xlabel=\"" << (b.rep[v].empty() ? "1" : pres.alphabet.format(b.rep[v])) << "\"];\n";
  std::set<std::pair<int, int>> cayley;
  for (std::size_t v = 0; v < b.size(); ++v)
    for (std::size_t g = 0; g < b.generators; ++g) {
      int w = b.adj[v][2 * g];
      if (w < 0) continue;
      cayley.insert({std::min<int>(v, w), std::max<int>(v, w)});
      out << "  " << v << " -- " << w << " [label=\"" << pres.alphabet.name(static_cast<int>(g)) << "\"];\n";
    }
  if (cb)
    for (std::size_t v = 0; v < cb->adj.size(); ++v)
      for (int w : cb->adj[v])
        if (static_cast<int>(v) < w && !cayley.count({static_cast<int>(v), w}))
          out << "  " << v << " -- " << w << " [style=dashed, color=gray];\n";
  out << "}\n";
  return out.str();
}

void cmd_ball(Run& run, const BallArgs& a) {
  run.params = {{"radius", a.radius}, {"cap", a.cap},         {"coneoff", a.coneoff || a.samples > 0},
                {"samples", a.samples}, {"seed", a.seed},    {"chords", a.chords}};
  Presentation pres;
  if (!a.pres.empty()) {
    pres = load_presentation(run, a.pres);
  } else if (a.free_rank > 0) {
    run.params["free_rank"] = a.free_rank;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < a.free_rank; ++i) names.push_back("x" + std::to_string(i + 1));
    pres.alphabet = Alphabet(names);
  } else {
    throw input_error("ball needs --pres or --free");
  }
  BallContext ctx(pres, a.radius, a.cap, a.seed);
  const CayleyBall& b = ctx.ball();
  std::vector<std::size_t> spheres(a.radius + 1, 0);
  for (int d : b.dist) ++spheres[static_cast<std::size_t>(d)];
  run.result["vertices"] = b.size();
  run.result["complete"] = b.complete;
  run.result["spheres"] = spheres;
  Verdict v = b.complete ? Verdict::pass : Verdict::inconclusive;
  if (!b.complete) run.result["note"] = "vertex cap reached";

  bool need_coneoff = a.coneoff || a.samples > 0 || a.chords;
  std::optional<RelatorEmbedding> rel;
  std::optional<ConeOffBall> cb;
  if (need_coneoff) {
    rel = embed_relators(ctx);
    cb = coneoff_ball(ctx, *rel);
    run.result["coneoff"] = {{"clique_edges", cb->clique_edges},
                             {"D", cb->D},
                             {"full_copies", rel->copies.size()},
                             {"partial_copies", rel->partial.size()}};
  }
  if (a.samples > 0) {
    run.params["slimness_bound"] = 5;
    SlimnessReport s = sample_slimness(*cb, a.samples, a.seed);
    run.result["slimness"] = {{"samples_requested", s.samples_requested},
                              {"trusted", s.trusted},
                              {"attempts", s.attempts},
                              {"distinct", s.distinct},
                              {"max_slimness", s.max_slimness},
                              {"histogram", s.histogram}};
    if (s.max_slimness > 5) v = Verdict::fail;
  }
  if (a.chords) {
    std::size_t tr = a.trusted_radius.value_or(a.radius / 2);
    run.params["trusted_radius"] = tr;
    PropertyReport pr = check_chords(*cb, tr);
    run.result["chords"] = {{"checked", pr.checked}, {"counterexamples", pr.counterexamples}, {"details", pr.details}};
    if (!pr.passed()) v = Verdict::fail;
  }
  if (!a.dot.empty()) run.write(a.dot, ball_dot(b, cb ? &*cb : nullptr, pres));
  run.set(v);
}

// ---- driver

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Outcome {
  int code = kPass;
  json report;  // null for report and usage paths
};

Outcome run_report(const std::string& file, bool replay, bool quiet);

Outcome run(const std::vector<std::string>& args, bool dry, bool quiet) {
  CLI::App app{"Small cancellation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string report_out;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--report", report_out, "write the run report here instead of stdout");
  app.add_option("--threads", threads, "worker threads (execution is sequential)");
  app.set_version_flag("--version", kVersion);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "check a small cancellation condition");
  check->add_option("--graph", ca.graph, "labelled graph JSON");
  check->add_option("--pres", ca.pres, "presentation text");
  check->add_option("--spec", ca.spec, "free product spec JSON");
  check->add_option("--cond", ca.cond, "condition, e.g. \"C'_n(1/6,3) n=5\"")->required();
  check->add_flag("--complete", ca.complete, "complete the graph over the free product first");
  check->add_option("--truncate", ca.truncate, "line radius for infinite cyclic factors");
  check->add_option("--completed-out", ca.completed_out, "write the completed graph");
  check->add_option("--cycle-cap", ca.cycle_cap, "longest simple cycle to enumerate (0: none)");
  check->add_option("--power-cap", ca.power_cap, "walk length for the power search (0: default)");
  check->add_option("--piece-cap", ca.piece_cap, "piece lengths are exact up to this (0: longest cycle)");
  check->add_option("--max-violations", ca.max_violations);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "build a family member");
  gen->add_option("family", ga.family)->required()->check(CLI::IsMember({"gamma_I", "sl2", "sq", "pride", "rips", "toy"}));
  gen->add_option("--out", ga.out);
  gen->add_flag("--certify", ga.certify);
  gen->add_option("--I", ga.I, "comma separated indices of unpowered cycles");
  gen->add_option("--imax", ga.imax);
  gen->add_option("--n", ga.n);
  gen->add_option("--block", ga.block);
  gen->add_option("--p", ga.p);
  gen->add_option("--N", ga.N);
  gen->add_option("--cap", ga.cap);
  gen->add_option("--pres", ga.pres);
  gen->add_option("--lambda", ga.lambda);
  gen->add_option("--min-len", ga.min_len);
  gen->add_option("--max-attempts", ga.max_attempts);
  gen->add_option("--blocks", ga.blocks);
  gen->add_option("--order", ga.order);
  gen->add_option("--first-block", ga.first_block);
  gen->add_option("--seed", seed);

  WordArgs wa;
  auto* wp = app.add_subcommand("wordproblem", "decide triviality with Dehn's algorithm");
  wp->add_option("--pres", wa.pres)->required();
  wp->add_option("--word", wa.words)->required()->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  wp->add_option("--trace", wa.trace, "write the reduction trace JSON");
  wp->add_option("--verify-trace", wa.verify, "check a trace JSON against the words");
  wp->add_flag("--uncertified", wa.uncertified, "skip the C'(1/6) check; nontrivial answers become unknown");

  BallArgs ba;
  auto* ball = app.add_subcommand("ball", "Cayley ball and cone-off analyses");
  ball->add_option("--pres", ba.pres);
  ball->add_option("--free", ba.free_rank, "free group of this rank");
  ball->add_option("--radius", ba.radius);
  ball->add_option("--cap", ba.cap, "vertex cap");
  ball->add_flag("--coneoff", ba.coneoff);
  ball->add_option("--slimness-samples", ba.samples);
  ball->add_option("--seed", ba.seed);
  ball->add_flag("--chords", ba.chords);
  ball->add_option("--trusted-radius", ba.trusted_radius);
  ball->add_option("--dot", ba.dot);

  std::string report_file;
  bool replay = false;
  auto* rep = app.add_subcommand("report", "verify or replay a run report");
  rep->add_option("file", report_file)->required();
  rep->add_flag("--replay", replay, "rerun the recorded command and compare");

  Outcome o;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success&) {
    std::cout << app.help();
    return o;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return o;
    }
    std::cerr << "usage error: " << e.what() << "\n";
    o.code = kInputError;
    return o;
  }
  if (rep->parsed()) return run_report(report_file, replay, quiet);

  Run r;
  // where the report goes does not change it
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--report" && i + 1 < args.size()) {
      ++i;
      continue;
    }
    if (args[i].rfind("--report=", 0) == 0) continue;
    r.argv.push_back(args[i]);
  }
  r.dry = dry;
  r.env = {{"threads", threads}};
  auto start = std::chrono::steady_clock::now();
  std::string started = utc_now();
  try {
    if (check->parsed()) {
      r.command = "check";
      cmd_check(r, ca);
    } else if (gen->parsed()) {
      r.command = "generate";
      cmd_generate(r, ga);
      r.params["seed"] = seed;
    } else if (wp->parsed()) {
      r.command = "wordproblem";
      cmd_wordproblem(r, wa);
    } else if (ball->parsed()) {
      r.command = "ball";
      cmd_ball(r, ba);
    }
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    o.code = kInputError;
    return o;
  } catch (const parse_error& e) {
    std::cerr << "error: line " << e.line << ", column " << e.column << ": " << e.what() << "\n";
    o.code = kInputError;
    return o;
  } catch (const std::exception& e) {
    // the library signals bad input with std::invalid_argument and friends
    std::cerr << "error: " << e.what() << "\n";
    o.code = kInputError;
    return o;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.env["cwd"] = fs::current_path().string();
  json hashed = r.hashed();
  o.report = {{"hashed", hashed},
              {"digest", sha256(hashed.dump())},
              {"timing", {{"started_utc", started}, {"wall_ms", ms}}},
              {"environment", r.env}};
  o.code = r.code;
  if (!quiet) {
    std::string text = o.report.dump(2) + "\n";
    if (report_out.empty())
      std::cout << text;
    else
      r.write(report_out, text);
    std::cerr << r.command << ": " << r.verdict << " (exit " << r.code << ")\n";
  }
  return o;
}

Outcome run_report(const std::string& file, bool replay, bool quiet) {
  Outcome o;
  json j;
  try {
    j = parse_json_input(read_file(file), file);
    if (!j.contains("hashed") || !j.contains("digest")) throw input_error(file + ": not a run report");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    o.code = kInputError;
    return o;
  }
  const json& h = j["hashed"];
  json out = {{"file", file},
              {"command", h.value("command", "")},
              {"verdict", h.value("verdict", "")},
              {"digest_ok", sha256(h.dump()) == j["digest"].get<std::string>()}};
  bool ok = out["digest_ok"];
  if (replay) {
    fs::path here = fs::current_path();
    if (j.contains("environment") && j["environment"].contains("cwd") && fs::exists(j["environment"]["cwd"].get<std::string>()))
      fs::current_path(j["environment"]["cwd"].get<std::string>());
    Outcome again = run(h["argv"].get<std::vector<std::string>>(), true, true);
    fs::current_path(here);
    bool same = !again.report.is_null() && again.report["hashed"] == h;
    json diff = json::array();
    if (!again.report.is_null())
      for (auto& [k, v] : h.items())
        if (!again.report["hashed"].contains(k) || again.report["hashed"][k] != v) diff.push_back(k);
    out["replay"] = {{"identical", same}, {"exit_code", again.code}, {"differing_fields", diff}};
    ok = ok && same;
  }
  if (!quiet) std::cout << out.dump(2) << "\n";
  o.code = ok ? kPass : kFail;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, false, false).code;
}
