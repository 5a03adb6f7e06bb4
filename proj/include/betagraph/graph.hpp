#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace betagraph {

/// Vertex ids are 1-based throughout the public API.
using Vertex = std::size_t;

/// Thrown by parse_edge_list; carries the offending input line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Per-vertex influence parameters on the log-odds scale.
class BetaVector {
 public:
  BetaVector() = default;
  explicit BetaVector(std::vector<double> values);

  static BetaVector constant(std::size_t t, double value);

  std::size_t size() const noexcept { return values_.size(); }
  /// 1-based access.
  double operator[](Vertex i) const { return values_[i - 1]; }
  std::span<const double> values() const noexcept { return values_; }
  /// max_i |beta_i|
  double max_abs() const noexcept;

  friend bool operator==(const BetaVector&, const BetaVector&) = default;

 private:
  std::vector<double> values_;
};

/// Degrees of an undirected simple graph. Each entry lies in [0, t-1] and the
/// total is even.
class DegreeSequence {
 public:
  DegreeSequence() = default;
  explicit DegreeSequence(std::vector<int> degrees);

  std::size_t size() const noexcept { return degrees_.size(); }
  int operator[](Vertex i) const { return degrees_[i - 1]; }
  std::span<const int> values() const noexcept { return degrees_; }
  long long total() const noexcept;

  friend bool operator==(const DegreeSequence&, const DegreeSequence&) = default;

 private:
  std::vector<int> degrees_;
};

/// Undirected simple graph on vertices 1..t. Edges are stored as (i, j) with
/// i < j, sorted and unique.
class Graph {
 public:
  using Edge = std::pair<Vertex, Vertex>;

  Graph(std::size_t t, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return t_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(Vertex i, Vertex j) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t t_;
  std::vector<Edge> edges_;
};

struct ParsedEdgeList {
  Graph graph;
  std::size_t duplicates_collapsed = 0;
};

/// Logistic of x, stable for large |x|.
double logistic(double x) noexcept;

/// e^{b_i+b_j} / (1 + e^{b_i+b_j}). Throws std::domain_error when i == j or an
/// id is outside 1..t.
double edge_probability(const BetaVector& beta, Vertex i, Vertex j);

/// Draws each pair {i,j} independently. The draw for a pair depends only on
/// (seed, i, j), so the result does not depend on traversal order.
Graph sample_graph(const BetaVector& beta, std::uint64_t seed);

/// Reads "i j" lines; '#' starts a comment line; "t=<n>" fixes the vertex
/// count. Duplicate edges are collapsed and counted, self-loops are rejected.
ParsedEdgeList parse_edge_list(std::istream& in);

/// Inverse of parse_edge_list: a "t=<n>" header followed by one edge per line.
void write_edge_list(std::ostream& out, const Graph& g);

DegreeSequence degree_sequence(const Graph& g);

}  // namespace betagraph
