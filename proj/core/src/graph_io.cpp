#include "mdst/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace mdst {
namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

WeightedGraph parse_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  long n = -1, m = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_comment(line);
    if (blank(line)) continue;
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n >> m) || n < 1 || m < 0)
        throw GraphError(fmt::format("line {}: expected header 'n m' with n >= 1, m >= 0", lineno));
      std::string extra;
      if (ls >> extra) throw GraphError(fmt::format("line {}: trailing data in header", lineno));
      continue;
    }
    Edge e;
    if (!(ls >> e.u >> e.v >> e.w)) throw GraphError(fmt::format("line {}: expected 'u v w'", lineno));
    std::string extra;
    if (ls >> extra) throw GraphError(fmt::format("line {}: trailing data after edge", lineno));
    edges.push_back(e);
  }
  if (n < 0) throw GraphError("missing header line");
  if (static_cast<long>(edges.size()) != m)
    throw GraphError(fmt::format("header declares {} edges but {} were listed", m, edges.size()));
  return WeightedGraph(static_cast<int>(n), std::move(edges));
}

WeightedGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError(fmt::format("cannot open graph file '{}'", path));
  return parse_graph(in);
}

std::string format_graph(const WeightedGraph& g) {
  std::string out = fmt::format("{} {}\n", g.n(), g.m());
  for (const Edge& e : g.edges()) out += fmt::format("{} {} {}\n", e.u, e.v, e.w);
  return out;
}

void write_graph_file(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GraphError(fmt::format("cannot write graph file '{}'", path));
  out << format_graph(g);
}

}  // namespace mdst
