#include "lrga/graph_io.hpp"

#include <string>

#include "lrga/error.hpp"

namespace lrga {

namespace {

constexpr std::string_view kHeader = ">>graph6<<";
constexpr int kBias = 63;

int decode_byte(std::string_view text, std::size_t pos) {
  const auto c = static_cast<unsigned char>(text[pos]);
  if (c < 63 || c > 126) {
    throw ParseError("graph6: byte value " + std::to_string(c) + " outside [63, 126]", pos);
  }
  return c - kBias;
}

void encode_size(std::size_t n, std::string& out) {
  if (n <= 62) {
    out.push_back(static_cast<char>(n + kBias));
  } else if (n <= 258047) {
    out.push_back(static_cast<char>(126));
    for (int shift = 12; shift >= 0; shift -= 6) {
      out.push_back(static_cast<char>(((n >> shift) & 0x3f) + kBias));
    }
  } else {
    out.push_back(static_cast<char>(126));
    out.push_back(static_cast<char>(126));
    for (int shift = 30; shift >= 0; shift -= 6) {
      out.push_back(static_cast<char>(((n >> shift) & 0x3f) + kBias));
    }
  }
}

}  // namespace

Graph parse_graph6(std::string_view text) {
  std::size_t pos = 0;
  if (text.starts_with(kHeader)) pos = kHeader.size();
  std::size_t end = text.size();
  while (end > pos && (text[end - 1] == '\n' || text[end - 1] == '\r')) --end;
  if (pos == end) throw ParseError("graph6: empty record", pos);

  std::size_t n = 0;
  const int first = decode_byte(text, pos);
  if (first < 63) {
    n = static_cast<std::size_t>(first);
    pos += 1;
  } else {
    std::size_t width = 3;
    std::size_t start = pos + 1;
    if (start < end && static_cast<unsigned char>(text[start]) == 126) {
      width = 6;
      start += 1;
    }
    if (start + width > end) throw ParseError("graph6: truncated node count", end);
    for (std::size_t k = 0; k < width; ++k) {
      n = (n << 6) | static_cast<std::size_t>(decode_byte(text, start + k));
    }
    pos = start + width;
  }
  if (n == 0) throw ParseError("graph6: graph must have at least one node", pos);

  const std::size_t bits = n * (n - 1) / 2;
  const std::size_t expected = (bits + 5) / 6;
  if (end - pos != expected) {
    throw ParseError("graph6: expected " + std::to_string(expected) +
                         " adjacency bytes for n = " + std::to_string(n) + ", found " +
                         std::to_string(end - pos),
                     end - pos < expected ? end : pos + expected);
  }

  Matrix adjacency = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t bit = 0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i, ++bit) {
      const int chunk = decode_byte(text, pos + bit / 6);
      if ((chunk >> (5 - bit % 6)) & 1) {
        adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        adjacency(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
      }
    }
  }
  if (bits % 6 != 0) {
    const std::size_t last = pos + expected - 1;
    const int pad_mask = (1 << (6 - bits % 6)) - 1;
    if (decode_byte(text, last) & pad_mask) {
      throw ParseError("graph6: nonzero padding bits", last);
    }
  }
  return Graph::from_adjacency(adjacency);
}

std::string encode_graph6(const Graph& g) {
  const std::size_t n = g.size();
  std::string out;
  encode_size(n, out);
  int chunk = 0;
  int filled = 0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      chunk = (chunk << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(chunk + kBias));
        chunk = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>((chunk << (6 - filled)) + kBias));
  return out;
}

std::vector<Graph> read_graph6(std::istream& in) {
  std::vector<Graph> graphs;
  std::string line;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      graphs.push_back(parse_graph6(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.detail(),
                       line_start + e.offset());
    }
  }
  return graphs;
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n")) {
    throw std::invalid_argument("graph JSON must be an object with field \"n\"");
  }
  const auto n = j.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("graph JSON edges must be [i, j] pairs");
      }
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
  }
  Matrix features;
  if (j.contains("features") && !j.at("features").empty()) {
    const auto& rows = j.at("features");
    if (rows.size() != n) throw std::invalid_argument("graph JSON features must have n rows");
    const auto d0 = rows[0].size();
    features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d0));
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != d0) throw std::invalid_argument("ragged feature rows");
      for (std::size_t c = 0; c < d0; ++c) {
        features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
            rows[i][c].get<double>();
      }
    }
  }
  return Graph(n, edges, std::move(features));
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.size();
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : g.edges()) j["edges"].push_back({a, b});
  j["features"] = nlohmann::json::array();
  if (g.has_features()) {
    for (Eigen::Index i = 0; i < g.features().rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < g.features().cols(); ++c) row.push_back(g.features()(i, c));
      j["features"].push_back(row);
    }
  }
  return j;
}

}  // namespace lrga
