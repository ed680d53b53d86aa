#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sct/freeprod.hpp"
#include "sct/graph_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Dir {
  fs::path path;
  Dir() {
    path = fs::temp_directory_path() / ("sct_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Dir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

const Dir& dir() {
  static Dir d;
  return d;
}

std::string slurp(const std::string& f) {
  std::ifstream in(f);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const std::string& f, const std::string& text) { std::ofstream(f) << text; }

// Runs the binary with the given arguments (shell quoted by the caller).
int cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + SCT_CLI_PATH + std::string(" ") + args + " >" + (dir() / "stdout") + " 2>" +
                    (dir() / "stderr");
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

json report() { return json::parse(slurp(dir() / "stdout")); }
json hashed() { return report()["hashed"]; }

const char* kGenus2 = "a b c d\na b A B c d C D\n";

}  // namespace

TEST_CASE("cli: gamma_I generate, certify and check") {
  std::string out = dir() / "gI.json";
  CHECK(cli("generate gamma_I --I 0,2 --imax 3 --n 5 --certify --out " + out) == 0);
  auto h = hashed();
  CHECK(h["verdict"] == "pass");
  CHECK(h["params"]["block"] == 100);
  json g = json::parse(slurp(out));
  CHECK(g["certificate"]["verdict"] == "pass");
  CHECK(g["certificate"]["p"] == 3);

  CHECK(cli("check --graph " + out + " --cond \"C'_n(1/6,3) n=5\"") == 0);
  CHECK(hashed()["result"]["report"]["verdict"] == "pass");
  // block length 4 leaves pieces far above a sixth of the shortest cycle
  CHECK(cli("generate gamma_I --I 0 --imax 1 --n 5 --block 4 --certify --out " + (dir() / "small.json")) == 1);
  CHECK(cli("check --graph " + (dir() / "small.json") + " --cond \"C'(1/6)\"") == 1);
  CHECK_FALSE(hashed()["result"]["report"]["violations"].empty());
}

TEST_CASE("cli: input errors and caps") {
  put(dir() / "bad.json", "{\"vertices\": [0, 1,\n");
  CHECK(cli("check --graph " + (dir() / "bad.json") + " --cond \"C'(1/6)\"") == 3);
  CHECK(slurp(dir() / "stderr").find("bad.json:2:") != std::string::npos);
  CHECK(cli("check --graph " + (dir() / "missing.json") + " --cond \"C'(1/6)\"") == 3);
  CHECK(cli("generate bogus") == 3);
  CHECK(cli("frobnicate") == 3);

  std::string g = dir() / "g40.json";
  REQUIRE(cli("generate gamma_I --I 0,2 --imax 3 --n 5 --block 40 --out " + g) == 0);
  CHECK(cli("check --graph " + g + " --cond \"C'_n(1/6,3)\"") == 3);
  CHECK(cli("check --graph " + g + " --cond \"C(1/6)\"") == 3);
  CHECK(cli("check --graph " + g + " --cond \"C'(1/6) n=5\"") == 3);
  CHECK(cli("check --graph " + g + " --cond \"C'_n(1/6,3) n=5\" --piece-cap 2") == 2);
  auto h = hashed();
  CHECK(h["verdict"] == "inconclusive");
  CHECK(h["exit_code"] == 2);
  CHECK(h["result"]["report"]["notes"].dump().find("cap 2") != std::string::npos);
}

TEST_CASE("cli: sl2 statistics") {
  CHECK(cli("generate sl2 --p 5 --out " + (dir() / "sl2.json")) == 0);
  auto s = hashed()["result"]["stats"];
  CHECK(s["order"] == 120);
  CHECK(s["degree"] == 4);
  CHECK(s["regular"] == true);
  CHECK(json::parse(slurp(dir() / "sl2.json"))["vertices"].size() == 120);
}

TEST_CASE("cli: word problem traces round-trip") {
  std::string pres = dir() / "g2.txt";
  put(pres, kGenus2);
  std::string words = " --word \"a b A B c d C D\" --word \"c d C D a b A B\" --word \"a c\"";
  std::string trace = dir() / "trace.json";
  CHECK(cli("wordproblem --pres " + pres + words + " --trace " + trace) == 0);
  auto w = hashed()["result"]["words"];
  CHECK(w[0]["answer"] == "trivial");
  CHECK(w[1]["answer"] == "trivial");
  CHECK(w[2]["answer"] == "nontrivial");

  CHECK(cli("wordproblem --pres " + pres + words + " --verify-trace " + trace) == 0);
  for (auto& x : hashed()["result"]["words"]) CHECK(x["trace_verified"] == true);

  json t = json::parse(slurp(trace));
  t[0]["steps"][0]["rotation"] = t[0]["steps"][0]["rotation"].get<int>() + 1;
  put(dir() / "tampered.json", t.dump());
  CHECK(cli("wordproblem --pres " + pres + words + " --verify-trace " + (dir() / "tampered.json")) == 1);
  CHECK(hashed()["result"]["words"][0]["trace_verified"] == false);

  // not C'(1/6): refused unless explicitly uncertified
  put(dir() / "torus.txt", "a b\na b A B\n");
  CHECK(cli("wordproblem --pres " + (dir() / "torus.txt") + " --word \"a b\"") == 3);
  CHECK(cli("wordproblem --pres " + (dir() / "torus.txt") + " --word \"a b\" --uncertified") == 0);
  CHECK(hashed()["result"]["words"][0]["answer"] == "unknown");
}

TEST_CASE("cli: balls and cone-off slimness") {
  put(dir() / "free2.txt", "a b\n");
  CHECK(cli("ball --pres " + (dir() / "free2.txt") + " --radius 2") == 0);
  CHECK(hashed()["result"]["vertices"] == 17);
  CHECK(cli("ball --free 2 --radius 3") == 0);
  CHECK(hashed()["result"]["vertices"] == 53);
  CHECK(cli("ball --free 2 --radius 4 --cap 100") == 2);

  std::string pres = dir() / "g2.txt";
  put(pres, kGenus2);
  std::string dot = dir() / "ball.dot";
  CHECK(cli("ball --pres " + pres + " --radius 5 --coneoff --slimness-samples 500 --seed 7 --chords --dot " + dot) ==
        0);
  auto r = hashed()["result"];
  CHECK(r["slimness"]["trusted"] == 500);
  CHECK(r["slimness"]["max_slimness"].get<int>() <= 5);
  CHECK(r["chords"]["counterexamples"] == 0);
  std::string d = slurp(dot);
  CHECK(d.rfind("graph ball {", 0) == 0);
  CHECK(d.find("style=dashed") != std::string::npos);
}

TEST_CASE("cli: reports are deterministic and replay") {
  std::string pres = dir() / "g2.txt";
  put(pres, kGenus2);
  std::string a = dir() / "run_a.json", b = dir() / "run_b.json";
  std::string cmd = "ball --pres " + pres + " --radius 4 --slimness-samples 200 --seed 3 --report ";
  REQUIRE(cli(cmd + a) == 0);
  REQUIRE(cli(cmd + b) == 0);
  json ja = json::parse(slurp(a)), jb = json::parse(slurp(b));
  CHECK(ja["hashed"].dump() == jb["hashed"].dump());
  CHECK(ja["digest"] == jb["digest"]);
  CHECK(ja["hashed"]["inputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(ja.contains("timing"));

  REQUIRE(cli(cmd.substr(0, cmd.find("--seed")) + "--seed 4 --report " + b) == 0);
  CHECK(json::parse(slurp(b))["hashed"]["params"]["seed"] == 4);

  CHECK(cli("report " + a + " --replay") == 0);
  CHECK(report()["replay"]["identical"] == true);

  // a changed input is caught by the replay
  put(pres, "a b c d\na b c d A B C D\n");
  CHECK(cli("report " + a + " --replay") == 1);
  put(pres, kGenus2);

  json broken = ja;
  broken["hashed"]["verdict"] = "fail";
  put(dir() / "broken.json", broken.dump());
  CHECK(cli("report " + (dir() / "broken.json")) == 1);
  CHECK(report()["digest_ok"] == false);
  CHECK(cli("report " + (dir() / "bad_path.json")) == 3);
}

TEST_CASE("cli: generate cache") {
  std::string cache = dir() / "cache";
  std::string env = "SCT_CACHE_DIR=" + cache;
  REQUIRE(cli("generate sl2 --p 7 --report " + (dir() / "c1.json"), env) == 0);
  REQUIRE(cli("generate sl2 --p 7 --report " + (dir() / "c2.json"), env) == 0);
  json c1 = json::parse(slurp(dir() / "c1.json")), c2 = json::parse(slurp(dir() / "c2.json"));
  CHECK(c1["environment"]["cache"] == "miss");
  CHECK(c2["environment"]["cache"] == "hit");
  CHECK(c1["hashed"] == c2["hashed"]);
  CHECK(std::distance(fs::directory_iterator(cache), fs::directory_iterator{}) == 1);
}

TEST_CASE("cli: free products") {
  std::string toy = dir() / "toy.json";
  CHECK(cli("generate toy --certify --out " + toy) == 0);
  CHECK(cli("check --spec " + toy + " --cond \"C'_*(1/6,10)\"") == 0);
  CHECK(hashed()["result"]["report"]["max_power"]["exponent"].get<int>() < 10);
  CHECK(cli("generate toy --blocks 5 --first-block 8 --certify") == 1);
  CHECK(cli("check --cond \"C'_*(1/6)\" --graph " + toy) == 3);

  // classical over Z/3 * Z/3 * Z/3 against the library, then the graph side
  auto spec = sct::FreeProductSpec::cyclic({{"x", 3}, {"y", 3}, {"z", 3}});
  put(dir() / "spec.json", spec.to_json().dump());
  put(dir() / "rel.txt", "x y z\nx y z x y^-1 z x^-1 y z^-1 x y z y\n");
  auto expected = sct::check_classical_star(spec, {spec.alphabet.parse("x y z x y^-1 z x^-1 y z^-1 x y z y")}, {1, 6});
  int code = cli("check --spec " + (dir() / "spec.json") + " --pres " + (dir() / "rel.txt") + " --cond \"C'_*(1/6)\"");
  CHECK(hashed()["verdict"] == sct::to_string(expected.sc.verdict));
  CHECK(code == (expected.sc.passed() ? 0 : 1));
  CHECK(hashed()["result"]["report"]["max_piece_syllables"] == expected.max_piece);

  sct::LabelledGraph g(spec.alphabet);
  g.add_cycle(spec.alphabet.parse("x y z x y^-1 z x^-1 y z^-1 x y z y"));
  put(dir() / "cyc.json", sct::graph_to_json(g).dump());
  auto cert = sct::complete(spec, g);
  auto gexp = sct::check_star_graphical(spec, cert.completed, {1, 6});
  std::string completed = dir() / "completed.json";
  code = cli("check --spec " + (dir() / "spec.json") + " --graph " + (dir() / "cyc.json") +
             " --complete --completed-out " + completed + " --cond \"C'_*(1/6)\"");
  CHECK(hashed()["verdict"] == sct::to_string(gexp.sc.verdict));
  CHECK(code == (gexp.sc.passed() ? 0 : 1));
  CHECK(hashed()["result"]["completion"]["certifiable"] == true);
  CHECK(sct::same_graph(sct::graph_from_json(json::parse(slurp(completed))), cert.completed));

  // infinite factor: completion needs a truncation
  auto zspec = sct::FreeProductSpec::cyclic({{"x", 0}, {"y", 3}});
  put(dir() / "zspec.json", zspec.to_json().dump());
  sct::LabelledGraph zg(zspec.alphabet);
  zg.add_cycle(zspec.alphabet.parse("x y x x y"));
  put(dir() / "zcyc.json", sct::graph_to_json(zg).dump());
  CHECK(cli("check --spec " + (dir() / "zspec.json") + " --graph " + (dir() / "zcyc.json") +
            " --complete --cond \"C'_*(1/6)\"") == 3);
  int zc = cli("check --spec " + (dir() / "zspec.json") + " --graph " + (dir() / "zcyc.json") +
               " --complete --truncate 2 --cond \"C'_*(1/6)\"");
  CHECK(zc != 3);
  CHECK(hashed()["result"]["completion"]["certifiable"] == false);
}

TEST_CASE("cli: pride and rips") {
  CHECK(cli("generate pride --certify --out " + (dir() / "pride.json")) == 0);
  auto h = hashed();
  CHECK(h["result"]["collapse_trivial"] == true);
  CHECK(json::parse(slurp(dir() / "pride.json"))["presentation"].get<std::string>().rfind("a b\n", 0) == 0);

  put(dir() / "q.txt", "q\nq q q\n");
  CHECK(cli("generate rips --pres " + (dir() / "q.txt") + " --n 3 --min-len 200 --out " + (dir() / "rips.json")) == 0);
  CHECK(hashed()["inputs"][0]["role"] == "presentation");
  CHECK(json::parse(slurp(dir() / "rips.json"))["certificate"]["verdict"] == "pass");
}
