#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sct/graph.hpp"

namespace sct {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line(line), column(column) {}
  std::size_t line, column;
};

// Parses JSON text, mapping parser failures to parse_error with line/column.
nlohmann::json parse_json_text(const std::string& text);

nlohmann::json graph_to_json(const LabelledGraph& g);
LabelledGraph graph_from_json(const nlohmann::json& j);
std::string graph_to_dot(const LabelledGraph& g, const std::string& name = "G");

nlohmann::json word_to_json(const Alphabet& a, const Word& w);

}  // namespace sct
