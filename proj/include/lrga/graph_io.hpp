#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lrga/graph.hpp"

namespace lrga {

/// Decodes one graph6 record. A leading ">>graph6<<" header and a trailing
/// newline are accepted. Throws ParseError with the offending byte offset.
Graph parse_graph6(std::string_view text);

/// Canonical graph6 encoding (no header, no newline). Features are dropped.
std::string encode_graph6(const Graph& g);

/// One record per non-empty line. ParseError offsets are relative to the
/// start of the stream.
std::vector<Graph> read_graph6(std::istream& in);

/// {"n": ..., "edges": [[i, j], ...], "features": [[...], ...]}, 0-based.
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);

}  // namespace lrga
