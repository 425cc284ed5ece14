// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>

#include "gss/graph.hpp"

namespace gss {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_uint(std::string_view token, std::uint64_t& out) {
  if (token.empty()) return false;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EdgeList parse_edge_list(std::istream& in, const std::string& origin) {
  EdgeList list;
  std::optional<std::uint64_t> declared_nodes;
  std::uint64_t max_id = 0;
  bool any_edge = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return DataError(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::string_view body = trim(text.substr(1));
      constexpr std::string_view kNodes = "nodes=";
      if (body.substr(0, kNodes.size()) == kNodes) {
        std::uint64_t n = 0;
        if (!parse_uint(trim(body.substr(kNodes.size())), n)) {
          throw fail("malformed nodes header");
        }
        declared_nodes = n;
      }
      continue;
    }
    const auto split = text.find_first_of(" \t");
    if (split == std::string_view::npos) throw fail("expected 'u v'");
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!parse_uint(text.substr(0, split), u) ||
        !parse_uint(trim(text.substr(split)), v)) {
      throw fail("expected two decimal node ids");
    }
    if (u >= kInvalidNode || v >= kInvalidNode) throw fail("node id too large");
    list.edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    max_id = std::max({max_id, u, v});
    any_edge = true;
  }
  if (declared_nodes) {
    if (any_edge && max_id >= *declared_nodes) {
      throw DataError(origin + ": node id " + std::to_string(max_id) +
                      " exceeds declared nodes=" +
                      std::to_string(*declared_nodes));
    }
    list.node_count = *declared_nodes;
  } else {
    list.node_count = any_edge ? max_id + 1 : 0;
  }
  return list;
}

EdgeList read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return parse_edge_list(in, path);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes=" << g.node_count() << '\n';
  for (NodeId u = 0; u < g.node_count(); ++u) {
    bool skip_loop = false;
    for (NodeId v : g.out_neighbors(u)) {
      if (g.symmetrized() && v < u) continue;
      // Symmetrization stores a self loop twice; emit one line per pair.
      if (g.symmetrized() && v == u) {
        skip_loop = !skip_loop;
        if (!skip_loop) continue;
      }
      out << u << ' ' << v << '\n';
    }
  }
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write edge list '" + path + "'");
  write_edge_list(g, out);
}

Graph load_graph(const std::string& path, bool symmetrize) {
  EdgeList list = read_edge_list(path);
  return build_graph(list.edges, list.node_count,
                     {.symmetrize = symmetrize, .build_in_adjacency = true});
}

}  // namespace gss
