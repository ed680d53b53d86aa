#include "sct/graph_io.hpp"

#include <map>
#include <sstream>

namespace sct {

using nlohmann::json;

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw parse_error(e.what(), line, col);
  }
}

json word_to_json(const Alphabet& a, const Word& w) { return a.format(w); }

json graph_to_json(const LabelledGraph& g) {
  json j;
  j["alphabet"] = g.alphabet().names();
  json verts = json::array();
  for (int v = 0; v < g.num_vertices(); ++v) verts.push_back(v);
  j["vertices"] = verts;
  json edges = json::array();
  for (int e = 0; e < g.num_darts(); ++e)
    edges.push_back({{"id", e},
                     {"from", g.origin(e)},
                     {"to", g.terminus(e)},
                     {"label", g.alphabet().format_letter(g.label(e))},
                     {"inverse_id", g.inv(e)}});
  j["edges"] = edges;
  if (!g.marks.empty()) j["marks"] = g.marks;
  return j;
}

LabelledGraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw std::invalid_argument("graph JSON needs 'vertices' and 'edges'");
  Alphabet a;
  if (j.contains("alphabet"))
    for (auto& n : j["alphabet"]) a.add(n.get<std::string>());
  // Collect generator names used by labels when no alphabet is given.
  auto base_name = [](std::string s) {
    if (s.size() > 3 && s.compare(s.size() - 3, 3, "^-1") == 0) s.resize(s.size() - 3);
    return s;
  };
  if (!j.contains("alphabet"))
    for (auto& e : j["edges"]) {
      std::string l = e.at("label").get<std::string>();
      std::string b = base_name(l);
      if (b.size() == 1 && std::isupper(static_cast<unsigned char>(b[0])))
        b = std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(b[0]))));
      a.add(b);
    }
  LabelledGraph g(a);
  std::map<std::string, int> vid;
  for (auto& v : j["vertices"]) {
    std::string key = v.is_string() ? v.get<std::string>() : v.dump();
    if (vid.count(key)) throw std::invalid_argument("duplicate vertex id " + key);
    vid[key] = g.add_vertex();
    g.vertex_names.push_back(key);
  }
  auto vertex = [&](const json& v) {
    std::string key = v.is_string() ? v.get<std::string>() : v.dump();
    auto it = vid.find(key);
    if (it == vid.end()) throw std::invalid_argument("edge refers to unknown vertex " + key);
    return it->second;
  };
  std::map<std::string, int> did;
  std::vector<std::string> inv_key;
  for (auto& e : j["edges"]) {
    int d = g.add_raw_dart(vertex(e.at("from")), vertex(e.at("to")), g.alphabet().parse_letter(e.at("label").get<std::string>()));
    std::string key = e.contains("id") ? e["id"].dump() : std::to_string(d);
    if (did.count(key)) throw std::invalid_argument("duplicate edge id " + key);
    did[key] = d;
    inv_key.push_back(e.contains("inverse_id") ? e["inverse_id"].dump() : std::string());
  }
  for (int d = 0; d < g.num_darts(); ++d) {
    if (inv_key[d].empty()) continue;
    auto it = did.find(inv_key[d]);
    if (it == did.end()) throw std::invalid_argument("inverse_id refers to unknown edge " + inv_key[d]);
    if (g.inv(d) < 0 && g.inv(it->second) < 0) g.set_inverse(d, it->second);
  }
  // Darts listed without an inverse get a fresh one.
  const int listed = g.num_darts();
  for (int d = 0; d < listed; ++d)
    if (g.inv(d) < 0) {
      int f = g.add_raw_dart(g.terminus(d), g.origin(d), -g.label(d));
      g.set_inverse(d, f);
    }
  if (j.contains("marks"))
    for (auto& [k, v] : j["marks"].items()) g.marks[k] = v.get<int>();
  return g;
}

std::string graph_to_dot(const LabelledGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  for (int v = 0; v < g.num_vertices(); ++v) out << "  " << v << ";\n";
  for (int e = 0; e < g.num_darts(); ++e) {
    int f = g.inv(e);
    // One arrow per edge, oriented along its positive label.
    if (g.label(e) < 0 || (f < e && f >= 0 && g.label(f) > 0)) continue;
    out << "  " << g.origin(e) << " -> " << g.terminus(e) << " [label=\"" << g.alphabet().format_letter(g.label(e))
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace sct
