#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/lambda_graph.hpp"
#include "starmetric/metric.hpp"
#include "starmetric/parametric.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

/// G(λ*) with weights evaluated, plus a source vertex with a 0-weight edge
/// to every over(v).
class SourceGraph {
 public:
  SourceGraph(LambdaGraph graph, Rational lambda);

  const LambdaGraph& graph() const noexcept { return graph_; }
  const Rational& lambda() const noexcept { return lambda_; }
  std::size_t vertex_count() const noexcept { return graph_.vertex_count() + 1; }
  VertexId source() const noexcept { return graph_.vertex_count(); }
  const std::vector<WeightedEdge>& source_edges() const noexcept { return source_edges_; }

  /// Every edge with its weight at λ, sorted by (from, to).
  std::vector<WeightedEdge> edges() const;

 private:
  LambdaGraph graph_;
  Rational lambda_;
  std::vector<WeightedEdge> source_edges_;
};

/// Shortest-path length from the source to every vertex of a SourceGraph,
/// indexed by vertex id.
struct PathLengths {
  std::vector<Rational> l;
};

/// Throws NegativeCycleError if G(λ) has a negative cycle.
inline SourceGraph build_source_graph(const LambdaGraph& g, const Rational& lambda) {
  if (has_negative_cycle(g, lambda)) {
    throw NegativeCycleError("G(lambda) has a negative cycle at lambda = " + to_fraction_string(lambda));
  }
  return SourceGraph(g, lambda);
}

inline PathLengths shortest_path_lengths(const SourceGraph& sg) {
  return PathLengths{sssp_lengths(sg.graph(), sg.lambda(), sg.source(), sg.source_edges())};
}

/// c_v = (l(under(v)) - l(over(v))) / 2.
inline std::vector<Rational> hub_lengths(const PathLengths& pl, std::size_t n) {
  if (pl.l.size() < 2 * n) throw DomainError("path lengths do not cover 2n vertices");
  std::vector<Rational> c;
  c.reserve(n);
  for (std::size_t v = 0; v < n; ++v) c.push_back(Rational((pl.l[n + v] - pl.l[v]) / 2));
  return c;
}

/// The minimum-dilation star: λ* by parametric search, then hub lengths from
/// shortest paths in the source graph at λ*.
inline StarEmbedding embed(const MetricSpace& m, SearchStats* stats = nullptr) {
  if (m.size() < 2) throw DomainError("embedding needs at least two sites");
  LambdaGraph g(m);
  Rational lam = lambda_star(g, stats);
  SourceGraph sg = build_source_graph(g, lam);
  std::vector<Rational> c = hub_lengths(shortest_path_lengths(sg), m.size());
  return StarEmbedding{m.labels(), std::move(c), std::move(lam)};
}

// ---------------------------------------------------------------------------

inline SourceGraph::SourceGraph(LambdaGraph graph, Rational lambda)
    : graph_(std::move(graph)), lambda_(std::move(lambda)) {
  const std::size_t n = graph_.site_count();
  source_edges_.reserve(n);
  for (std::size_t v = 0; v < n; ++v) source_edges_.push_back({source(), graph_.over(v), Rational(0)});
}

inline std::vector<WeightedEdge> SourceGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(graph_.edges().size() + source_edges_.size());
  for (const auto& e : graph_.edges()) {
    out.push_back({e.from, e.to, Rational(e.weight.slope() * lambda_ + e.weight.intercept())});
  }
  out.insert(out.end(), source_edges_.begin(), source_edges_.end());
  return out;
}

}  // namespace starmetric
