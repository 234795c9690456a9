#pragma once

#include <iosfwd>
#include <string>

#include "mdst/graph.hpp"

namespace mdst {

// Line-oriented text format:
//   n m
//   u v w        (m lines, 0-based vertices, positive decimal weight)
// Anything after '#' on a line is a comment; blank lines are ignored.

[[nodiscard]] WeightedGraph parse_graph(std::istream& in);
[[nodiscard]] WeightedGraph parse_graph(const std::string& text);
[[nodiscard]] WeightedGraph read_graph_file(const std::string& path);

[[nodiscard]] std::string format_graph(const WeightedGraph& g);
void write_graph_file(const WeightedGraph& g, const std::string& path);

}  // namespace mdst
