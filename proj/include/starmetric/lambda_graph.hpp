#pragma once

// The λ-graph of a metric space: vertices over(s) and under(s) per site,
// edges under(s) -> over(t) of weight -d(s,t) for all s, t (0 when s == t)
// and over(s) -> under(t) of weight λ·d(s,t) for s != t. A negative cycle at
// λ means no star has dilation λ.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/linfun.hpp"
#include "starmetric/metric.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

using VertexId = std::size_t;

enum class Side : std::uint8_t { over, under };

class LambdaGraph {
 public:
  struct Edge {
    VertexId from;
    VertexId to;
    LinearFn<Rational> weight;
  };

  explicit LambdaGraph(const MetricSpace& m);

  std::size_t site_count() const noexcept { return n_; }
  std::size_t vertex_count() const noexcept { return 2 * n_; }

  VertexId over(std::size_t site) const noexcept { return site; }
  VertexId under(std::size_t site) const noexcept { return n_ + site; }
  Side side(VertexId v) const noexcept { return v < n_ ? Side::over : Side::under; }
  std::size_t site(VertexId v) const noexcept { return v < n_ ? v : v - n_; }
  std::string vertex_name(VertexId v) const;

  /// Sorted by (from, to).
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Weight of the edge from -> to, if there is one.
  std::optional<LinearFn<Rational>> edge_weight(VertexId from, VertexId to) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Rational& distance(std::size_t s, std::size_t t) const { return dist_[s * n_ + t]; }

  /// Distances in the integer unit of the source metric: distance * scale.
  const BigInt& scale() const noexcept { return scale_; }
  const std::vector<BigInt>& scaled_distances() const noexcept { return scaled_; }
  const BigInt& max_scaled() const noexcept { return max_scaled_; }
  const BigInt& min_scaled() const noexcept { return min_scaled_; }

 private:
  std::size_t n_;
  std::vector<std::string> labels_;
  std::vector<Rational> dist_;
  BigInt scale_;
  std::vector<BigInt> scaled_;
  BigInt max_scaled_;
  BigInt min_scaled_;
  std::vector<Edge> edges_;
};

inline LambdaGraph build_lambda_graph(const MetricSpace& m) { return LambdaGraph(m); }

/// A closed walk v0 -> v1 -> ... -> v(k-1) -> v0 and its total weight.
struct CycleWitness {
  std::vector<VertexId> vertices;
  LinearFn<Rational> weight;
};

struct WeightedEdge {
  VertexId from;
  VertexId to;
  Rational weight;
};

std::optional<CycleWitness> find_negative_cycle(const LambdaGraph& g, const Rational& lambda);
bool has_negative_cycle(const LambdaGraph& g, const Rational& lambda);

/// Exact shortest-path lengths from `source` in G(λ) plus `extra_edges`
/// (which may introduce new vertex ids past vertex_count()).
std::vector<Rational> sssp_lengths(const LambdaGraph& g, const Rational& lambda, VertexId source,
                                   const std::vector<WeightedEdge>& extra_edges);

// ---------------------------------------------------------------------------

namespace detail {

template <class Int>
struct IntEdge {
  std::uint32_t from;
  std::uint32_t to;
  Int weight;
};

template <class Int>
struct ShortestPaths {
  std::vector<Int> dist;
  std::vector<char> reached;
  std::vector<std::int64_t> pred;
  std::optional<std::vector<VertexId>> negative_cycle;
  std::size_t rounds = 0;
};

/// Bellman–Ford over a fixed edge order. With no source every vertex starts
/// at distance 0, which detects a negative cycle anywhere in the graph. Stops
/// early after a round without relaxations; a relaxation in round |V| means
/// a negative cycle, recovered by walking predecessor links.
template <class Int>
ShortestPaths<Int> bellman_ford(std::size_t vertex_count, std::span<const IntEdge<Int>> edges,
                                std::optional<VertexId> source) {
  ShortestPaths<Int> out;
  out.dist.assign(vertex_count, Int(0));
  out.reached.assign(vertex_count, source ? 0 : 1);
  out.pred.assign(vertex_count, -1);
  if (source) out.reached[*source] = 1;

  std::int64_t last_relaxed = -1;
  for (std::size_t round = 1; round <= vertex_count; ++round) {
    out.rounds = round;
    bool changed = false;
    for (const auto& e : edges) {
      if (!out.reached[e.from]) continue;
      Int candidate = out.dist[e.from] + e.weight;
      if (!out.reached[e.to] || candidate < out.dist[e.to]) {
        out.dist[e.to] = std::move(candidate);
        out.reached[e.to] = 1;
        out.pred[e.to] = e.from;
        changed = true;
        last_relaxed = e.to;
      }
    }
    if (!changed) return out;
  }

  auto x = static_cast<std::int64_t>(last_relaxed);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    x = out.pred[static_cast<std::size_t>(x)];
    if (x < 0) throw InternalInvariantError("predecessor chain ended before reaching a cycle");
  }
  std::vector<VertexId> cycle;
  std::int64_t y = x;
  do {
    cycle.push_back(static_cast<VertexId>(y));
    y = out.pred[static_cast<std::size_t>(y)];
  } while (y != x);
  std::reverse(cycle.begin(), cycle.end());
  out.negative_cycle = std::move(cycle);
  return out;
}

/// Edges of G(λ) at λ = p/q, every weight multiplied by q, distances in the
/// integer unit `d` (row-major n×n). Sorted by (from, to).
template <class Int>
std::vector<IntEdge<Int>> lambda_edges(std::size_t n, const std::vector<Int>& d, const Int& p,
                                       const Int& q) {
  std::vector<IntEdge<Int>> edges;
  edges.reserve(2 * n * n - n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      edges.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(n + t),
                       Int(p * d[s * n + t])});
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      edges.push_back({static_cast<std::uint32_t>(n + s), static_cast<std::uint32_t>(t),
                       Int(-(q * d[s * n + t]))});
    }
  }
  return edges;
}

template <class Int>
std::vector<Int> narrow_matrix(const std::vector<BigInt>& big) {
  std::vector<Int> out;
  out.reserve(big.size());
  for (const auto& x : big) out.push_back(from_big<Int>(x));
  return out;
}

template <class Int>
std::optional<std::vector<VertexId>> negative_cycle_at(std::size_t n, const std::vector<Int>& d,
                                                       const Ratio<Int>& lambda) {
  auto edges = lambda_edges(n, d, lambda.num, lambda.den);
  auto result = bellman_ford<Int>(2 * n, edges, std::nullopt);
  return std::move(result.negative_cycle);
}

/// Upper bound on every intermediate of a Bellman–Ford run on G(p/q).
inline BigInt probe_bound(const LambdaGraph& g, const BigInt& p, const BigInt& q) {
  return BigInt((2 * g.site_count() + 4) * (abs(p) + q) * g.max_scaled());
}

}  // namespace detail

inline LambdaGraph::LambdaGraph(const MetricSpace& m)
    : n_(m.size()), labels_(m.labels()), scale_(m.scale()), scaled_(m.scaled_matrix()) {
  if (n_ < 2) throw DomainError("the lambda graph needs at least two sites");
  dist_.reserve(n_ * n_);
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t t = 0; t < n_; ++t) dist_.push_back(m(s, t));
  }
  max_scaled_ = scaled_[1];
  min_scaled_ = scaled_[1];
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t t = 0; t < n_; ++t) {
      if (s == t) continue;
      const BigInt& x = scaled_[s * n_ + t];
      if (x > max_scaled_) max_scaled_ = x;
      if (x < min_scaled_) min_scaled_ = x;
    }
  }

  edges_.reserve(2 * n_ * n_ - n_);
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t t = 0; t < n_; ++t) {
      if (s != t) edges_.push_back({over(s), under(t), LinearFn<Rational>(distance(s, t), Rational(0))});
    }
  }
  for (std::size_t s = 0; s < n_; ++s) {
    for (std::size_t t = 0; t < n_; ++t) {
      edges_.push_back({under(s), over(t), LinearFn<Rational>(Rational(0), Rational(-distance(s, t)))});
    }
  }
}

inline std::string LambdaGraph::vertex_name(VertexId v) const {
  if (v >= vertex_count()) return "v" + std::to_string(v);
  return std::string(side(v) == Side::over ? "over(" : "under(") + labels_[site(v)] + ")";
}

inline std::optional<LinearFn<Rational>> LambdaGraph::edge_weight(VertexId from, VertexId to) const {
  if (from >= vertex_count() || to >= vertex_count() || side(from) == side(to)) return std::nullopt;
  const std::size_t s = site(from);
  const std::size_t t = site(to);
  if (side(from) == Side::over) {
    if (s == t) return std::nullopt;
    return LinearFn<Rational>(distance(s, t), Rational(0));
  }
  return LinearFn<Rational>(Rational(0), Rational(-distance(s, t)));
}

inline std::optional<CycleWitness> find_negative_cycle(const LambdaGraph& g, const Rational& lambda) {
  const std::size_t n = g.site_count();
  auto cycle = with_integer_kernel(
      detail::probe_bound(g, lambda.get_num(), lambda.get_den()), [&](auto tag) {
        using Int = typename decltype(tag)::type;
        auto d = detail::narrow_matrix<Int>(g.scaled_distances());
        return detail::negative_cycle_at<Int>(n, d, ratio_from_rational<Int>(lambda));
      });
  if (!cycle) return std::nullopt;

  CycleWitness witness{*cycle, LinearFn<Rational>(Rational(0), Rational(0))};
  for (std::size_t i = 0; i < cycle->size(); ++i) {
    auto w = g.edge_weight((*cycle)[i], (*cycle)[(i + 1) % cycle->size()]);
    if (!w) throw InternalInvariantError("negative cycle witness uses a missing edge");
    witness.weight = witness.weight + *w;
  }
  return witness;
}

inline bool has_negative_cycle(const LambdaGraph& g, const Rational& lambda) {
  return find_negative_cycle(g, lambda).has_value();
}

inline std::vector<Rational> sssp_lengths(const LambdaGraph& g, const Rational& lambda,
                                          VertexId source,
                                          const std::vector<WeightedEdge>& extra_edges) {
  const std::size_t n = g.site_count();
  std::size_t vertex_count = std::max(g.vertex_count(), source + 1);
  BigInt extra_den = 1;
  for (const auto& e : extra_edges) {
    vertex_count = std::max({vertex_count, e.from + 1, e.to + 1});
    mpz_lcm(extra_den.get_mpz_t(), extra_den.get_mpz_t(), e.weight.get_den().get_mpz_t());
  }

  // Integer weights are the true weights times unit = scale · q · extra_den.
  const BigInt& p = lambda.get_num();
  const BigInt& q = lambda.get_den();
  const BigInt unit = g.scale() * q * extra_den;
  std::vector<std::pair<std::pair<VertexId, VertexId>, BigInt>> weighted;
  weighted.reserve(g.edges().size() + extra_edges.size());
  const auto& d = g.scaled_distances();
  for (const auto& e : g.edges()) {
    const std::size_t s = g.site(e.from);
    const std::size_t t = g.site(e.to);
    BigInt w = g.side(e.from) == Side::over ? BigInt(extra_den * p * d[s * n + t])
                                            : BigInt(-(extra_den * q * d[s * n + t]));
    weighted.push_back({{e.from, e.to}, std::move(w)});
  }
  for (const auto& e : extra_edges) {
    Rational scaled = e.weight * Rational(unit);
    weighted.push_back({{e.from, e.to}, scaled.get_num()});
  }
  std::stable_sort(weighted.begin(), weighted.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  BigInt largest = 0;
  for (const auto& [_, w] : weighted) {
    if (abs(w) > largest) largest = abs(w);
  }
  const BigInt bound = BigInt((vertex_count + 2) * largest);

  std::vector<BigInt> lengths = with_integer_kernel(bound, [&](auto tag) {
    using Int = typename decltype(tag)::type;
    std::vector<detail::IntEdge<Int>> edges;
    edges.reserve(weighted.size());
    for (const auto& [ends, w] : weighted) {
      edges.push_back({static_cast<std::uint32_t>(ends.first), static_cast<std::uint32_t>(ends.second),
                       from_big<Int>(w)});
    }
    auto result = detail::bellman_ford<Int>(vertex_count, edges, source);
    if (result.negative_cycle) {
      throw NegativeCycleError("graph has a negative cycle at lambda = " + to_fraction_string(lambda));
    }
    std::vector<BigInt> out;
    out.reserve(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
      if (!result.reached[v]) {
        throw UnreachableError("vertex " + std::to_string(v) + " is unreachable from the source");
      }
      out.push_back(to_big(result.dist[v]));
    }
    return out;
  });

  std::vector<Rational> out;
  out.reserve(lengths.size());
  for (auto& x : lengths) {
    Rational r(x, unit);
    r.canonicalize();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace starmetric
