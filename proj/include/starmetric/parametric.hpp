#pragma once

// Parametric negative-cycle detection: the smallest λ for which G(λ) has no
// negative cycle.
//
// Min-plus squaring of the hop matrix D_i, whose entry (u, v) is the lightest
// walk from u to v with at most 2^i edges as a function of λ. After each
// squaring every entry is a lower envelope of |V| lines; a binary search over
// all their breakpoints, driven by Bellman–Ford probes, shrinks [λ1, λ2] to a
// stretch with no breakpoint inside, and each entry collapses back to one
// line. After ⌈log2 |V|⌉ rounds the diagonal covers every simple cycle and
// λ* is the largest root of a diagonal entry.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/lambda_graph.hpp"
#include "starmetric/linfun.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

/// The λ-graph's distances in a common integer unit, narrowed to Int.
template <class Int>
struct ScaledGraph {
  std::size_t sites = 0;
  std::vector<Int> d;  // row-major sites × sites
  Int max_distance{0};
  Int min_distance{0};

  std::size_t vertex_count() const noexcept { return 2 * sites; }
  std::size_t over(std::size_t s) const noexcept { return s; }
  std::size_t under(std::size_t s) const noexcept { return sites + s; }
};

template <class Int>
ScaledGraph<Int> scale_graph(const LambdaGraph& g) {
  ScaledGraph<Int> out;
  out.sites = g.site_count();
  out.d = detail::narrow_matrix<Int>(g.scaled_distances());
  out.max_distance = from_big<Int>(g.max_scaled());
  out.min_distance = from_big<Int>(g.min_scaled());
  return out;
}

template <class C>
struct HopMatrix {
  std::size_t order = 0;
  std::vector<PiecewiseLinearFn<C>> entries;  // row-major order × order
  unsigned hop_exponent = 0;
  Interval<C> valid_interval;

  const PiecewiseLinearFn<C>& operator()(std::size_t u, std::size_t v) const {
    return entries[u * order + v];
  }
};

/// Instrumentation of one lambda_star run.
struct SearchStats {
  std::size_t vertex_count = 0;
  std::size_t iterations = 0;
  std::size_t probes = 0;
  std::size_t envelopes = 0;
  std::size_t max_envelope_breakpoints = 0;
  std::size_t max_breakpoint_set = 0;
  std::string kernel;
  /// The search interval at entry and after every narrowing.
  std::vector<Interval<Rational>> intervals;
};

/// ⌈log2 v⌉ for v >= 1.
inline unsigned ceil_log2(std::size_t v) {
  unsigned k = 0;
  while ((std::size_t{1} << k) < v) ++k;
  return k;
}

template <class Int>
const char* kernel_name() {
  if constexpr (std::is_same_v<Int, std::int64_t>) return "int64";
  else if constexpr (std::is_same_v<Int, int128>) return "int128";
  else return "bigint";
}

// ---------------------------------------------------------------------------
// Steps

/// [1, 2D/d_min]: every 2-cycle weighs (λ - 1)·d, so λ* >= 1, and c_v = D is
/// feasible at 2D/d_min.
template <class Int>
Interval<Int> initial_interval(const ScaledGraph<Int>& g) {
  return Interval<Int>(Ratio<Int>(Int(1)), Ratio<Int>(Int(2 * g.max_distance), g.min_distance));
}

inline Interval<Rational> initial_interval(const LambdaGraph& g) {
  Rational hi(BigInt(2 * g.max_scaled()), g.min_scaled());
  hi.canonicalize();
  return Interval<Rational>(Ratio<Rational>(Rational(1)), Ratio<Rational>(hi));
}

/// D_0: 0 on the diagonal, the edge's line where there is an edge, +∞ elsewhere.
template <class Int>
HopMatrix<Int> initialize_d0(const ScaledGraph<Int>& g, const Interval<Int>& r) {
  const std::size_t n = g.sites;
  const std::size_t order = g.vertex_count();
  HopMatrix<Int> out;
  out.order = order;
  out.hop_exponent = 0;
  out.valid_interval = r;
  out.entries.assign(order * order,
                     PiecewiseLinearFn<Int>::single(LinearFn<Int>::plus_infinity(), r));
  for (std::size_t v = 0; v < order; ++v) {
    out.entries[v * order + v] = PiecewiseLinearFn<Int>::single(LinearFn<Int>(Int(0), Int(0)), r);
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const Int& dst = g.d[s * n + t];
      if (s != t) {
        out.entries[g.over(s) * order + g.under(t)] =
            PiecewiseLinearFn<Int>::single(LinearFn<Int>(dst, Int(0)), r);
      }
      // under(s) -> over(t) never lands on the diagonal, so s == t keeps the 0 edge
      out.entries[g.under(s) * order + g.over(t)] =
          PiecewiseLinearFn<Int>::single(LinearFn<Int>(Int(0), Int(-dst)), r);
    }
  }
  return out;
}

namespace detail {

/// Single-line entries in structure-of-arrays form, with each line's value
/// at both ends of the interval (numerators over lo.den and hi.den). The
/// value of a sum of two lines at an end is then a sum of two table values.
template <class Int>
struct LineTable {
  std::vector<Int> slope;
  std::vector<Int> intercept;
  std::vector<Int> at_lo;
  std::vector<Int> at_hi;
  std::vector<char> finite;

  explicit LineTable(std::size_t size)
      : slope(size), intercept(size), at_lo(size), at_hi(size), finite(size, 0) {}

  void set(std::size_t i, const LinearFn<Int>& f, const Interval<Int>& r) {
    if (f.is_infinite()) return;
    finite[i] = 1;
    slope[i] = f.slope();
    intercept[i] = f.intercept();
    at_lo[i] = f.scaled_at(r.lo);
    at_hi[i] = f.scaled_at(r.hi);
  }
};

}  // namespace detail

/// One min-plus squaring on d.valid_interval. Every entry of `d` must be a
/// single line.
///
/// For entry (u, v) the candidates are d(u, w) + d(w, v) over all w. Only
/// candidates whose slope lies between those of the minimizers at the two
/// interval ends can reach the envelope, and those minimizers are found with
/// additions alone from the precomputed end values.
template <class Int>
HopMatrix<Int> square(const HopMatrix<Int>& d, SearchStats* stats = nullptr) {
  const std::size_t order = d.order;
  const Interval<Int>& r = d.valid_interval;
  detail::LineTable<Int> rows(order * order);
  detail::LineTable<Int> cols(order * order);  // cols[v][w] = d(w, v)
  for (std::size_t u = 0; u < order; ++u) {
    for (std::size_t v = 0; v < order; ++v) {
      const auto& entry = d(u, v);
      if (entry.breakpoint_count() != 0) {
        throw InternalInvariantError("square() needs single-line entries");
      }
      rows.set(u * order + v, entry.front_line(), r);
      cols.set(v * order + u, entry.front_line(), r);
    }
  }

  HopMatrix<Int> out;
  out.order = order;
  out.hop_exponent = d.hop_exponent + 1;
  out.valid_interval = r;
  out.entries.resize(order * order);

  const bool degenerate = r.lo == r.hi;
  EnvelopeBuilder<Int> builder;
  std::vector<LinearFn<Int>> candidates;
  candidates.reserve(order);
  constexpr std::size_t kBlock = 32;  // columns kept hot while sweeping all rows
  for (std::size_t v0 = 0; v0 < order; v0 += kBlock) {
    const std::size_t v1 = std::min(order, v0 + kBlock);
    for (std::size_t u = 0; u < order; ++u) {
      const std::size_t ru = u * order;
      for (std::size_t v = v0; v < v1; ++v) {
        const std::size_t cv = v * order;
        std::size_t first = order;
        std::size_t last = order;
        Int best_lo{0}, best_hi{0}, slope_first{0}, slope_last{0};
        for (std::size_t w = 0; w < order; ++w) {
          if (!rows.finite[ru + w] || !cols.finite[cv + w]) continue;
          Int lo = rows.at_lo[ru + w] + cols.at_lo[cv + w];
          Int hi = rows.at_hi[ru + w] + cols.at_hi[cv + w];
          Int m = rows.slope[ru + w] + cols.slope[cv + w];
          if (first == order || lo < best_lo || (lo == best_lo && m < slope_first)) {
            first = w;
            best_lo = lo;
            slope_first = m;
          }
          if (last == order || hi < best_hi || (hi == best_hi && m > slope_last)) {
            last = w;
            best_hi = std::move(hi);
            slope_last = std::move(m);
          }
        }

        auto sum_at = [&](std::size_t w) {
          return LinearFn<Int>(Int(rows.slope[ru + w] + cols.slope[cv + w]),
                               Int(rows.intercept[ru + w] + cols.intercept[cv + w]));
        };
        PiecewiseLinearFn<Int>& entry = out.entries[u * order + v];
        if (first == order) {
          entry = PiecewiseLinearFn<Int>::single(LinearFn<Int>::plus_infinity(), r);
        } else if (first == last || degenerate) {
          entry = PiecewiseLinearFn<Int>::single(sum_at(first), r);
        } else {
          candidates.clear();
          for (std::size_t w = 0; w < order; ++w) {
            if (!rows.finite[ru + w] || !cols.finite[cv + w]) continue;
            Int m = rows.slope[ru + w] + cols.slope[cv + w];
            if (w == first || w == last || (slope_last < m && m < slope_first)) {
              candidates.push_back(sum_at(w));
            }
          }
          entry = builder.build(candidates, r);
        }
        if (stats) {
          ++stats->envelopes;
          stats->max_envelope_breakpoints =
              std::max(stats->max_envelope_breakpoints, entry.breakpoint_count());
        }
      }
    }
  }
  return out;
}

/// Binary search over the sorted breakpoints of every entry (plus the current
/// endpoints) for the consecutive pair bracketing λ*. A probe t is below λ*
/// exactly when G(t) has a negative cycle.
template <class Int>
Interval<Int> narrow_interval(const ScaledGraph<Int>& g, const HopMatrix<Int>& d,
                              SearchStats* stats = nullptr) {
  const Interval<Int>& r = d.valid_interval;
  std::vector<Ratio<Int>> points;
  points.push_back(r.lo);
  for (const auto& entry : d.entries) {
    const auto& pieces = entry.pieces();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) points.push_back(pieces[i].right_end);
  }
  points.push_back(r.hi);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (stats) stats->max_breakpoint_set = std::max(stats->max_breakpoint_set, points.size() - 2);

  std::size_t lo = 0;
  std::size_t hi = points.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (stats) ++stats->probes;
    if (detail::negative_cycle_at(g.sites, g.d, points[mid])) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Interval<Int>(points[lo], points[hi]);
}

/// Replaces every entry by the single line it equals on r.
template <class Int>
HopMatrix<Int> restrict_entries(const HopMatrix<Int>& d, const Interval<Int>& r) {
  HopMatrix<Int> out;
  out.order = d.order;
  out.hop_exponent = d.hop_exponent;
  out.valid_interval = r;
  out.entries.reserve(d.entries.size());
  for (const auto& entry : d.entries) {
    out.entries.push_back(PiecewiseLinearFn<Int>::single(restrict_to_line(entry, r), r));
  }
  return out;
}

/// Smallest λ in the valid interval with every diagonal entry >= 0: the
/// largest root among diagonal lines that are negative at the left end.
template <class Int>
Ratio<Int> lambda_from_diagonal(const HopMatrix<Int>& d) {
  const Interval<Int>& r = d.valid_interval;
  Ratio<Int> best = r.lo;
  for (std::size_t v = 0; v < d.order; ++v) {
    const auto& entry = d(v, v);
    if (entry.breakpoint_count() != 0) throw InternalInvariantError("diagonal entry is not a single line");
    const LinearFn<Int>& line = entry.front_line();
    if (line.is_infinite()) throw InternalInvariantError("infinite diagonal entry");
    if (!(line.scaled_at(r.lo) < 0)) continue;
    if (line.slope() == 0) {
      throw InternalInvariantError("diagonal entry is a negative constant on the final interval");
    }
    Ratio<Int> root(Int(-line.intercept()), line.slope());
    if (best < root) best = root;
  }
  if (!r.contains(best)) throw InternalInvariantError("lambda* fell outside the final interval");
  return best;
}

/// The whole search on one integer kernel.
template <class Int>
Ratio<Int> parametric_lambda_star(const ScaledGraph<Int>& g, SearchStats* stats = nullptr) {
  const std::size_t order = g.vertex_count();
  const unsigned rounds = ceil_log2(order);
  Interval<Int> interval = initial_interval(g);
  if (stats) {
    stats->vertex_count = order;
    stats->kernel = kernel_name<Int>();
    stats->intervals.push_back(Interval<Rational>(to_rational(interval.lo), to_rational(interval.hi)));
  }

  HopMatrix<Int> d = initialize_d0(g, interval);
  for (unsigned i = 1; i <= rounds; ++i) {
    HopMatrix<Int> squared = square(d, stats);
    interval = narrow_interval(g, squared, stats);
    d = restrict_entries(squared, interval);
    if (stats) {
      ++stats->iterations;
      stats->intervals.push_back(Interval<Rational>(to_rational(interval.lo), to_rational(interval.hi)));
    }
  }
  return lambda_from_diagonal(d);
}

/// Bound on every intermediate of the search: coefficients are sums over at
/// most 2^k edges, so |coefficient| <= A = 2^k·D_max, and every product
/// formed stays below 16·A².
inline BigInt search_bound(const LambdaGraph& g) {
  const unsigned rounds = ceil_log2(g.vertex_count());
  BigInt a = g.max_scaled();
  a <<= rounds;
  return BigInt(16 * a * a);
}

/// λ*, exactly.
inline Rational lambda_star(const LambdaGraph& g, SearchStats* stats = nullptr) {
  return with_integer_kernel(search_bound(g), [&](auto tag) {
    using Int = typename decltype(tag)::type;
    return to_rational(parametric_lambda_star(scale_graph<Int>(g), stats));
  });
}

}  // namespace starmetric
