#include "sct/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sct {

int LabelledGraph::add_vertex() {
  out_.emplace_back();
  return static_cast<int>(out_.size()) - 1;
}

int LabelledGraph::add_vertices(int count) {
  int first = num_vertices();
  out_.resize(out_.size() + count);
  return first;
}

int LabelledGraph::add_raw_dart(int from, int to, Letter s) {
  if (from < 0 || to < 0 || from >= num_vertices() || to >= num_vertices())
    throw std::out_of_range("dart endpoint out of range");
  int e = num_darts();
  origin_.push_back(from);
  terminus_.push_back(to);
  inverse_.push_back(-1);
  label_.push_back(s);
  out_[from].push_back(e);
  return e;
}

void LabelledGraph::set_inverse(int e, int f) {
  inverse_.at(e) = f;
  inverse_.at(f) = e;
}

int LabelledGraph::add_edge(int u, int v, Letter s) {
  if (s == 0) throw std::invalid_argument("label 0");
  int e = add_raw_dart(u, v, s);
  int f = add_raw_dart(v, u, -s);
  set_inverse(e, f);
  return e;
}

int LabelledGraph::add_self_inverse_dart(int v, Letter s) {
  int e = add_raw_dart(v, v, s);
  inverse_[e] = e;
  return e;
}

std::vector<int> LabelledGraph::add_path(int u, int v, const Word& w) {
  std::vector<int> darts;
  if (w.empty()) {
    if (u != v) throw std::invalid_argument("empty path between distinct vertices");
    return darts;
  }
  int cur = u;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int next = (i + 1 == w.size()) ? v : add_vertex();
    darts.push_back(add_edge(cur, next, w[i]));
    cur = next;
  }
  return darts;
}

std::vector<int> LabelledGraph::add_cycle(const Word& w) {
  if (w.empty()) throw std::invalid_argument("empty cycle label");
  int start = add_vertex();
  return add_path(start, start, w);
}

int LabelledGraph::follow(int v, Letter s) const {
  for (int e : out_[v])
    if (label_[e] == s) return e;
  return -1;
}

int LabelledGraph::read(int v, const Word& w) const {
  for (Letter x : w) {
    int e = follow(v, x);
    if (e < 0) return -1;
    v = terminus_[e];
  }
  return v;
}

Word LabelledGraph::path_label(const std::vector<int>& darts) const {
  Word w;
  w.reserve(darts.size());
  for (int e : darts) w.push_back(label_[e]);
  return w;
}

Components components(const LabelledGraph& g) {
  Components c;
  const int n = g.num_vertices();
  c.of.assign(n, -1);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (c.of[s] >= 0) continue;
    int id = static_cast<int>(c.vertices.size());
    c.vertices.emplace_back();
    c.of[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      c.vertices[id].push_back(v);
      for (int e : g.out(v)) {
        int t = g.terminus(e);
        if (c.of[t] < 0) {
          c.of[t] = id;
          stack.push_back(t);
        }
      }
    }
    std::sort(c.vertices[id].begin(), c.vertices[id].end());
  }
  return c;
}

Diagnostics validate(const LabelledGraph& g) {
  Diagnostics d;
  const int nd = g.num_darts();
  for (int e = 0; e < nd; ++e) {
    std::ostringstream msg;
    int f = g.inv(e);
    if (f < 0 || f >= nd) {
      msg << "dart " << e << " has no inverse";
      d.problems.push_back(msg.str());
      continue;
    }
    if (g.inv(f) != e) {
      msg << "inverse of dart " << e << " is not an involution";
      d.problems.push_back(msg.str());
      continue;
    }
    if (g.origin(f) != g.terminus(e) || g.terminus(f) != g.origin(e)) {
      msg << "dart " << e << " and its inverse have inconsistent endpoints";
      d.problems.push_back(msg.str());
    }
    if (g.label(e) == 0 || generator_of(g.label(e)) >= static_cast<int>(g.alphabet().size())) {
      msg << "dart " << e << " has a label outside the alphabet";
      d.problems.push_back(msg.str());
    } else if (f != e && g.label(f) != -g.label(e)) {
      msg << "dart " << e << " and its inverse carry labels that are not mutually inverse";
      d.problems.push_back(msg.str());
    }
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int e : g.out(v))
      if (g.origin(e) != v) d.problems.push_back("adjacency list of vertex " + std::to_string(v) + " is inconsistent");
  return d;
}

ReducedWitness is_reduced(const LabelledGraph& g) {
  ReducedWitness w;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& out = g.out(v);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j)
        if (g.label(out[i]) == g.label(out[j])) {
          w.holds = false;
          w.vertex = v;
          w.dart1 = out[i];
          w.dart2 = out[j];
          w.reason = "two darts with label " + g.alphabet().format_letter(g.label(out[i])) + " leave vertex " +
                     std::to_string(v);
          return w;
        }
  }
  return w;
}

ReducedWitness is_strongly_reduced(const LabelledGraph& g) {
  ReducedWitness w;
  for (int e = 0; e < g.num_darts(); ++e)
    if (g.origin(e) == g.terminus(e)) {
      w.holds = false;
      w.vertex = g.origin(e);
      w.dart1 = e;
      w.reason = "loop edge at vertex " + std::to_string(w.vertex);
      return w;
    }
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& out = g.out(v);
    for (std::size_t i = 0; i < out.size(); ++i) {
      int e = out[i];
      if (g.label(e) < 0) continue;
      for (std::size_t j = 0; j < out.size(); ++j) {
        int f = out[j];
        if (f == e || g.label(f) < 0 || g.terminus(f) != g.terminus(e) || g.label(f) == g.label(e)) continue;
        w.holds = false;
        w.vertex = v;
        w.dart1 = e;
        w.dart2 = f;
        const auto& a = g.alphabet();
        w.reason = "closed path labelled " + a.format_letter(g.label(e)) + " " + a.format_letter(-g.label(f)) +
                   " at vertex " + std::to_string(v);
        return w;
      }
    }
  }
  return w;
}

Presentation parse_presentation(const std::string& text) {
  Presentation p;
  std::istringstream in(text);
  std::string line;
  bool have_gens = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!have_gens) {
      std::vector<std::string> names;
      while (ls >> tok) names.push_back(tok);
      if (names.empty()) continue;
      p.alphabet = Alphabet(names);
      have_gens = true;
      continue;
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    p.relators.push_back(p.alphabet.parse(line));
  }
  if (!have_gens) throw std::invalid_argument("presentation: missing generator line");
  return p;
}

std::string format_presentation(const Presentation& p) {
  std::string out;
  for (std::size_t i = 0; i < p.alphabet.size(); ++i) {
    if (i) out += ' ';
    out += p.alphabet.name(static_cast<int>(i));
  }
  out += '\n';
  for (auto& r : p.relators) out += p.alphabet.format(r) + '\n';
  return out;
}

LabelledGraph disjoint_cycles(const Presentation& p) {
  LabelledGraph g(p.alphabet);
  for (auto& r : p.relators) {
    if (r.empty()) throw std::invalid_argument("disjoint_cycles: empty relator");
    g.add_cycle(r);
  }
  return g;
}

}  // namespace sct
