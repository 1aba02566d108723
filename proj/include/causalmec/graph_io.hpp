#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "causalmec/error.hpp"
#include "causalmec/graph.hpp"

// Text format, one graph per file:
//
//   # kind=<dag|admg|dcg> n=<int>
//   a -> b
//   a <-> b
//
// Lines after the header that start with '#' are comments. The writer emits
// directed edges first, then bidirected edges, each sorted lexicographically.

namespace causalmec {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline int parse_int(std::string_view s, int line_no) {
  s = trim(s);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected integer, got '" + std::string(s) + "'");
  return value;
}

}  // namespace detail

inline MixedGraph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  GraphKind kind = GraphKind::Dag;
  int n = 0;
  std::vector<Edge> directed, bidirected;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    if (!have_header) {
      if (body.front() != '#')
        throw Error(ErrorCode::ParseError, "first line must be '# kind=<kind> n=<int>'");
      std::istringstream header{std::string(body.substr(1))};
      std::string token;
      bool saw_kind = false, saw_n = false;
      while (header >> token) {
        if (token.rfind("kind=", 0) == 0) {
          const auto k = parse_kind(token.substr(5));
          if (!k) throw Error(ErrorCode::ParseError, "unknown kind '" + token.substr(5) + "'");
          kind = *k;
          saw_kind = true;
        } else if (token.rfind("n=", 0) == 0) {
          n = detail::parse_int(token.substr(2), line_no);
          saw_n = true;
        }
      }
      if (!saw_kind || !saw_n) throw Error(ErrorCode::ParseError, "header must set kind= and n=");
      have_header = true;
      continue;
    }
    if (body.front() == '#') continue;
    if (const auto pos = body.find("<->"); pos != std::string_view::npos) {
      bidirected.push_back({detail::parse_int(body.substr(0, pos), line_no), detail::parse_int(body.substr(pos + 3), line_no)});
    } else if (const auto arrow = body.find("->"); arrow != std::string_view::npos) {
      directed.push_back({detail::parse_int(body.substr(0, arrow), line_no), detail::parse_int(body.substr(arrow + 2), line_no)});
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'a -> b' or 'a <-> b'");
    }
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "missing header line");
  return make_graph(n, std::move(directed), std::move(bidirected), kind);
}

inline std::string format_graph(const MixedGraph& g) {
  std::ostringstream out;
  out << "# kind=" << to_string(g.kind()) << " n=" << g.num_vertices() << '\n';
  for (const Edge& e : g.directed_edges()) out << e.from << " -> " << e.to << '\n';
  for (const Edge& e : g.bidirected_edges()) out << e.from << " <-> " << e.to << '\n';
  return out.str();
}

inline MixedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

inline void write_graph_file(const std::string& path, const MixedGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << format_graph(g);
}

}  // namespace causalmec
