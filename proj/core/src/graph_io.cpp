#include "qgraph/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

using nlohmann::json;

std::size_t line_of(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::UnknownField, "unknown field '" + key + "' in " + where);
    }
  }
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::ParseError, where + ": missing '" + key + "'");
  if (!it->is_string()) throw Error(ErrorCode::ParseError, where + ": '" + key + "' must be a string");
  return it->get<std::string>();
}

double optional_number(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return 1.0;
  if (!it->is_number()) throw Error(ErrorCode::ParseError, where + ": '" + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

RawGraph parse_graph(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " +
                    e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "line 1: top level must be an object");
  reject_unknown(doc, {"vertices", "edges"}, "graph");

  RawGraph raw;
  const auto vs = doc.find("vertices");
  if (vs == doc.end() || !vs->is_array()) {
    throw Error(ErrorCode::ParseError, "graph: 'vertices' must be an array of strings");
  }
  for (const auto& v : *vs) {
    if (!v.is_string()) throw Error(ErrorCode::ParseError, "graph: vertex ids must be strings");
    raw.vertices.push_back(v.get<std::string>());
  }
  const auto es = doc.find("edges");
  if (es == doc.end() || !es->is_array()) {
    throw Error(ErrorCode::ParseError, "graph: 'edges' must be an array of records");
  }
  for (std::size_t k = 0; k < es->size(); ++k) {
    const json& rec = (*es)[k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!rec.is_object()) throw Error(ErrorCode::ParseError, where + " must be an object");
    reject_unknown(rec, {"id", "from", "to", "c", "mu"}, where);
    RawEdge e;
    e.id = require_string(rec, "id", where);
    e.from = require_string(rec, "from", where);
    e.to = require_string(rec, "to", where);
    e.c = optional_number(rec, "c", where);
    e.mu = optional_number(rec, "mu", where);
    raw.edges.push_back(std::move(e));
  }
  return raw;
}

RawGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

std::string format_graph(const RawGraph& raw) {
  json doc;
  doc["vertices"] = raw.vertices;
  doc["edges"] = json::array();
  for (const auto& e : raw.edges) {
    doc["edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"c", e.c}, {"mu", e.mu}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace qgraph
