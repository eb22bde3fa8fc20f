#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qgraph/metric_graph.hpp"

namespace qgraph {

// Graph files are JSON documents:
//
//   {
//     "vertices": ["v1", "v2", "v3"],
//     "edges": [
//       {"id": "e1", "from": "v1", "to": "v2", "c": 1.0, "mu": 1.0},
//       ...
//     ]
//   }
//
// "c" and "mu" default to 1.0. Unknown keys at either level are rejected
// (ErrorCode::UnknownField); malformed JSON or wrong value types raise
// ErrorCode::ParseError with a line number where one is known.

RawGraph parse_graph(std::string_view text);
RawGraph read_graph_file(const std::filesystem::path& path);
std::string format_graph(const RawGraph& raw);

}  // namespace qgraph
