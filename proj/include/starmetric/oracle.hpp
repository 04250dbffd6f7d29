#pragma once

// Ground truth for λ*, independent of the parametric search:
//  - exact, by enumerating every simple cycle of G(λ) (small n only);
//  - approximate, by bisection on Bellman–Ford probes;
//  - an optimality check for a proposed star.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/lambda_graph.hpp"
#include "starmetric/metric.hpp"
#include "starmetric/parametric.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

/// A simple cycle with weight λ·M + B. It is negative exactly below -B/M.
struct CycleRatio {
  std::vector<VertexId> cycle;
  Rational slope_sum;      // M
  Rational intercept_sum;  // B
  Rational threshold;      // -B/M
};

inline constexpr std::size_t kMaxOracleSites = 7;
inline constexpr std::uint64_t kMaxOracleCycles = 200'000'000;

/// The simple cycle with the largest threshold; its threshold is λ*.
CycleRatio max_cycle_ratio(const LambdaGraph& g);

inline Rational exact_lambda_by_cycles(const LambdaGraph& g) { return max_cycle_ratio(g).threshold; }

/// λ̂ with |λ̂ - λ*| <= tol, from ⌈log2(width / tol)⌉ probes on [1, 2D/d_min].
/// Returns the upper end of the final bracket, so tighter tolerances never
/// move the answer away from λ*.
Rational bisect_lambda(const LambdaGraph& g, const Rational& tol, std::size_t* probes = nullptr);

struct OptimalityReport {
  bool feasible = false;
  bool optimal = false;
  std::string method;  // "exact-oracle" or "probe"
  std::optional<Rational> oracle_lambda;
  bool clean_at_lambda = false;
  std::optional<bool> negative_below;  // unset when λ* == 1
  std::vector<std::string> problems;
};

/// Feasibility by verify_star, optimality by the exact oracle when
/// n <= kMaxOracleSites, otherwise by probing G at λ* (clean) and at
/// λ*·(1 - 2^-20) (negative cycle, unless λ* == 1).
OptimalityReport check_optimal(const MetricSpace& m, const StarEmbedding& s);

// ---------------------------------------------------------------------------

namespace detail {

template <class Int>
class SimpleCycleSearch {
 public:
  SimpleCycleSearch(std::size_t n, std::vector<Int> d) : n_(n), d_(std::move(d)) {
    const std::size_t vertices = 2 * n_;
    adj_.resize(vertices);
    for (std::size_t s = 0; s < n_; ++s) {
      for (std::size_t t = 0; t < n_; ++t) {
        if (s != t) adj_[s].push_back({n_ + t, d_[s * n_ + t], Int(0)});
        adj_[n_ + s].push_back({t, Int(0), Int(-d_[s * n_ + t])});
      }
    }
    on_path_.assign(vertices, 0);
  }

  void run() {
    for (start_ = 0; start_ < 2 * n_; ++start_) {
      path_.assign(1, start_);
      on_path_[start_] = 1;
      extend(start_, Int(0), Int(0));
      on_path_[start_] = 0;
    }
  }

  bool found() const { return found_; }
  const std::vector<VertexId>& best_cycle() const { return best_cycle_; }
  const Int& best_slope() const { return best_m_; }
  const Int& best_intercept() const { return best_b_; }

 private:
  struct Arc {
    std::size_t to;
    Int slope;
    Int intercept;
  };

  // Cycles are enumerated once each, from their smallest vertex.
  void extend(std::size_t v, const Int& m, const Int& b) {
    for (const Arc& arc : adj_[v]) {
      if (arc.to == start_) {
        Int cm = m + arc.slope;
        Int cb = b + arc.intercept;
        if (++cycles_ > kMaxOracleCycles) throw SizeError("simple cycle enumeration exceeded its cap");
        // -cb/cm > -best_b/best_m  <=>  best_b·cm > cb·best_m   (both M > 0)
        if (!found_ || Int(best_b_ * cm) > Int(cb * best_m_)) {
          found_ = true;
          best_m_ = std::move(cm);
          best_b_ = std::move(cb);
          best_cycle_ = path_;
        }
      } else if (arc.to > start_ && !on_path_[arc.to]) {
        on_path_[arc.to] = 1;
        path_.push_back(arc.to);
        extend(arc.to, Int(m + arc.slope), Int(b + arc.intercept));
        path_.pop_back();
        on_path_[arc.to] = 0;
      }
    }
  }

  std::size_t n_;
  std::vector<Int> d_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<char> on_path_;
  std::vector<VertexId> path_;
  std::size_t start_ = 0;
  std::uint64_t cycles_ = 0;
  bool found_ = false;
  Int best_m_{1};
  Int best_b_{0};
  std::vector<VertexId> best_cycle_;
};

}  // namespace detail

inline CycleRatio max_cycle_ratio(const LambdaGraph& g) {
  const std::size_t n = g.site_count();
  if (n > kMaxOracleSites) {
    throw SizeError("cycle enumeration is capped at " + std::to_string(kMaxOracleSites) + " sites");
  }
  const BigInt sum_bound = BigInt(2 * n * g.max_scaled());
  return with_integer_kernel(BigInt(4 * sum_bound * sum_bound), [&](auto tag) {
    using Int = typename decltype(tag)::type;
    detail::SimpleCycleSearch<Int> search(n, detail::narrow_matrix<Int>(g.scaled_distances()));
    search.run();
    if (!search.found()) throw InternalInvariantError("lambda graph without cycles");
    CycleRatio out;
    out.cycle = search.best_cycle();
    out.slope_sum = Rational(to_big(search.best_slope()), g.scale());
    out.intercept_sum = Rational(to_big(search.best_intercept()), g.scale());
    out.slope_sum.canonicalize();
    out.intercept_sum.canonicalize();
    out.threshold = -out.intercept_sum / out.slope_sum;
    return out;
  });
}

inline Rational bisect_lambda(const LambdaGraph& g, const Rational& tol, std::size_t* probes) {
  if (tol <= 0) throw DomainError("bisection tolerance must be positive");
  const Interval<Rational> start = initial_interval(g);
  Rational lo = start.lo.num;
  Rational hi = start.hi.num;
  std::size_t count = 0;
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    ++count;
    if (has_negative_cycle(g, mid)) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  if (probes) *probes = count;
  return hi;
}

inline OptimalityReport check_optimal(const MetricSpace& m, const StarEmbedding& s) {
  OptimalityReport report;
  const VerificationReport verification = verify_star(m, s);
  report.feasible = verification.feasible();
  for (const auto& v : verification.violations) report.problems.push_back(describe(v, m.labels()));

  LambdaGraph g(m);
  report.clean_at_lambda = !has_negative_cycle(g, s.lambda_star);
  if (!report.clean_at_lambda) report.problems.push_back("G(lambda) has a negative cycle at the declared lambda");

  if (m.size() <= kMaxOracleSites) {
    report.method = "exact-oracle";
    report.oracle_lambda = exact_lambda_by_cycles(g);
    if (*report.oracle_lambda != s.lambda_star) {
      report.problems.push_back("declared lambda " + to_fraction_string(s.lambda_star) +
                                " differs from the exact optimum " +
                                to_fraction_string(*report.oracle_lambda));
    }
    report.optimal = report.feasible && *report.oracle_lambda == s.lambda_star;
    return report;
  }

  report.method = "probe";
  bool below_ok = true;
  if (s.lambda_star > 1) {
    Rational factor(BigInt((BigInt(1) << 20) - 1), BigInt(BigInt(1) << 20));
    const bool negative = has_negative_cycle(g, Rational(s.lambda_star * factor));
    report.negative_below = negative;
    below_ok = negative;
    if (!negative) report.problems.push_back("no negative cycle just below the declared lambda");
  }
  report.optimal = report.feasible && report.clean_at_lambda && below_ok;
  return report;
}

}  // namespace starmetric
