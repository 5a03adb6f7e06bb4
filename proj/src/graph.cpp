#include "betagraph/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "betagraph/random.hpp"

namespace betagraph {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

BetaVector::BetaVector(std::vector<double> values) : values_(std::move(values)) {
  for (double b : values_) {
    if (!std::isfinite(b)) throw std::domain_error("beta entries must be finite");
  }
}

BetaVector BetaVector::constant(std::size_t t, double value) {
  return BetaVector(std::vector<double>(t, value));
}

double BetaVector::max_abs() const noexcept {
  double m = 0.0;
  for (double b : values_) m = std::max(m, std::abs(b));
  return m;
}

DegreeSequence::DegreeSequence(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  const auto t = static_cast<long long>(degrees_.size());
  for (int d : degrees_) {
    if (d < 0 || d > t - 1) {
      throw std::domain_error("degree " + std::to_string(d) + " outside [0, t-1] for t=" +
                              std::to_string(t));
    }
  }
  if (total() % 2 != 0) throw std::domain_error("degree sum must be even");
}

long long DegreeSequence::total() const noexcept {
  return std::accumulate(degrees_.begin(), degrees_.end(), 0LL);
}

Graph::Graph(std::size_t t, std::vector<Edge> edges) : t_(t), edges_(std::move(edges)) {
  for (auto& [i, j] : edges_) {
    if (i == j) throw std::domain_error("self-loop at vertex " + std::to_string(i));
    if (i < 1 || j < 1 || i > t_ || j > t_) throw std::domain_error("vertex id out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::domain_error("duplicate edge");
  }
}

bool Graph::has_edge(Vertex i, Vertex j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double edge_probability(const BetaVector& beta, Vertex i, Vertex j) {
  const std::size_t t = beta.size();
  if (i == j) throw std::domain_error("edge_probability: i == j");
  if (i < 1 || j < 1 || i > t || j > t) throw std::domain_error("edge_probability: id out of range");
  // Summation order fixed so that p(i,j) == p(j,i) bit for bit.
  const double x = i < j ? beta[i] + beta[j] : beta[j] + beta[i];
  return logistic(x);
}

Graph sample_graph(const BetaVector& beta, std::uint64_t seed) {
  const std::size_t t = beta.size();
  if (t < 2) throw std::domain_error("sample_graph: need t >= 2");
  std::vector<Graph::Edge> edges;
  for (Vertex i = 1; i <= t; ++i) {
    for (Vertex j = i + 1; j <= t; ++j) {
      const double u = to_unit(derive_seed(seed, i, j));
      if (u < edge_probability(beta, i, j)) edges.emplace_back(i, j);
    }
  }
  return Graph(t, std::move(edges));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) {
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

ParsedEdgeList parse_edge_list(std::istream& in) {
  std::string raw;
  std::size_t lineno = 0;
  long long declared_t = -1;
  std::size_t max_id = 0;
  std::vector<Graph::Edge> edges;

  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("t=")) {
      declared_t = parse_int(trim(line.substr(2)), lineno);
      if (declared_t < 2) throw ParseError(lineno, "vertex count must be at least 2");
      continue;
    }
    std::istringstream fields{std::string(line)};
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(lineno, "expected two vertex ids");
    }
    const long long i = parse_int(a, lineno);
    const long long j = parse_int(b, lineno);
    if (i < 1 || j < 1) throw ParseError(lineno, "vertex ids must be positive");
    if (i == j) throw ParseError(lineno, "self-loop at vertex " + std::to_string(i));
    if (declared_t > 0 && (i > declared_t || j > declared_t)) {
      throw ParseError(lineno, "vertex id exceeds declared t=" + std::to_string(declared_t));
    }
    max_id = std::max<std::size_t>(max_id, static_cast<std::size_t>(std::max(i, j)));
    edges.emplace_back(static_cast<Vertex>(std::min(i, j)), static_cast<Vertex>(std::max(i, j)));
  }

  const std::size_t t = declared_t > 0 ? static_cast<std::size_t>(declared_t) : max_id;
  if (t < 2) throw ParseError(lineno, "edge list defines fewer than 2 vertices");

  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  const auto duplicates = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  return {Graph(t, std::move(edges)), duplicates};
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "t=" << g.vertex_count() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

DegreeSequence degree_sequence(const Graph& g) {
  std::vector<int> d(g.vertex_count(), 0);
  for (const auto& [i, j] : g.edges()) {
    ++d[i - 1];
    ++d[j - 1];
  }
  return DegreeSequence(std::move(d));
}

}  // namespace betagraph
