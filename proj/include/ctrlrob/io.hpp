#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace ctrlrob {

/// A parsed SNAP-style edge list. External ids are remapped densely in ascending order.
struct EdgeListDocument {
  std::vector<std::string> raw_lines;
  std::vector<Edge> edges;                     // dense ids, sorted, simple
  std::vector<std::uint64_t> external_ids;     // dense id -> external id
  std::unordered_map<std::uint64_t, NodeId> dense_ids;
  std::size_t dropped_self_loops{0};
  std::size_t dropped_duplicates{0};

  std::size_t node_count() const noexcept { return external_ids.size(); }
  DirectedGraph graph() const { return DirectedGraph(node_count(), edges); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline std::uint64_t parse_id(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected a non-negative integer node id, got '" + std::string(token) + "'");
  return value;
}

// "# nodes: N" (our own header) pre-registers ids 0..N-1 so isolated nodes survive a round trip.
inline bool parse_nodes_header(std::string_view comment, std::size_t line, std::uint64_t& nodes) {
  comment = trim(comment.substr(1));
  constexpr std::string_view key = "nodes:";
  if (comment.substr(0, key.size()) != key) return false;
  const auto tokens = split_ws(comment.substr(key.size()));
  if (tokens.empty()) throw ParseError(line, "nodes header without a count");
  nodes = parse_id(tokens[0], line);
  return true;
}

}  // namespace detail

/**
 * Parses "u v" lines; '#' starts a comment line. Self-loops are dropped but
 * their endpoints still count as nodes. Repeated edges are collapsed.
 */
inline EdgeListDocument parse_edge_list(std::string_view text) {
  EdgeListDocument doc;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_edges;
  std::vector<std::uint64_t> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    doc.raw_lines.emplace_back(line);
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::uint64_t nodes = 0;
      if (detail::parse_nodes_header(body, line_no, nodes))
        for (std::uint64_t v = 0; v < nodes; ++v) ids.push_back(v);
      continue;
    }
    const auto tokens = detail::split_ws(body);
    if (tokens.size() != 2)
      throw ParseError(line_no, "expected two node ids, found " + std::to_string(tokens.size()) + " tokens");
    const std::uint64_t u = detail::parse_id(tokens[0], line_no);
    const std::uint64_t v = detail::parse_id(tokens[1], line_no);
    ids.push_back(u);
    ids.push_back(v);
    if (u == v) {
      ++doc.dropped_self_loops;
      continue;
    }
    raw_edges.emplace_back(u, v);
  }

  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > std::numeric_limits<NodeId>::max())
    throw std::length_error("parse_edge_list: too many nodes");
  doc.external_ids = ids;
  doc.dense_ids.reserve(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) doc.dense_ids.emplace(ids[k], static_cast<NodeId>(k));

  doc.edges.reserve(raw_edges.size());
  for (const auto& [u, v] : raw_edges) doc.edges.push_back({doc.dense_ids.at(u), doc.dense_ids.at(v)});
  std::sort(doc.edges.begin(), doc.edges.end());
  const auto last = std::unique(doc.edges.begin(), doc.edges.end());
  doc.dropped_duplicates = static_cast<std::size_t>(doc.edges.end() - last);
  doc.edges.erase(last, doc.edges.end());
  return doc;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline EdgeListDocument read_edge_list(const std::filesystem::path& path) {
  return parse_edge_list(read_text_file(path));
}

/// Header comments, then one sorted "u\tv" line per edge.
inline std::string format_edge_list(const DirectedGraph& g) {
  std::string out = "# ctrlrob-edgelist v1\n# nodes: " + std::to_string(g.node_count()) +
                    " edges: " + std::to_string(g.edge_count()) + "\n";
  for (const auto& e : g.edges()) {
    out += std::to_string(e.from);
    out += '\t';
    out += std::to_string(e.to);
    out += '\n';
  }
  return out;
}

inline void emit_edge_list(const DirectedGraph& g, const std::filesystem::path& path) {
  write_text_file(path, format_edge_list(g));
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Accumulates a CSV table whose first line names the schema and its version.
class CsvTable {
 public:
  CsvTable(std::string schema, std::vector<std::string> columns) : columns_(columns.size()) {
    text_ = "# ctrlrob-csv " + schema + " v1\n";
    append_row(columns);
  }

  CsvTable& row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
      throw std::invalid_argument("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(columns_));
    append_row(cells);
    return *this;
  }

  const std::string& str() const noexcept { return text_; }
  void save(const std::filesystem::path& path) const { write_text_file(path, text_); }

 private:
  void append_row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) text_ += ',';
      text_ += cells[k];
    }
    text_ += '\n';
  }

  std::size_t columns_;
  std::string text_;
};

}  // namespace ctrlrob
