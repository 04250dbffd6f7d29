#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/metric.hpp"

namespace starmetric {

enum class MetricModel {
  shortest_path,      // all-pairs shortest paths of a random connected graph
  rounded_euclidean,  // L1 distances between distinct random integer points
};

inline MetricModel parse_model_name(std::string_view name) {
  if (name == "shortest_path") return MetricModel::shortest_path;
  if (name == "rounded_euclidean") return MetricModel::rounded_euclidean;
  throw ParseError("unknown metric model '" + std::string(name) + "'");
}

inline std::string model_name(MetricModel model) {
  return model == MetricModel::shortest_path ? "shortest_path" : "rounded_euclidean";
}

/// Deterministic in (n, seed, model). All distances are small integers.
inline MetricSpace gen_random_metric(std::size_t n, std::uint64_t seed, MetricModel model) {
  if (n < 2) throw DomainError("random metric needs n >= 2");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(model)};
  std::mt19937_64 rng(seq);
  std::vector<std::int64_t> d(n * n, 0);

  if (model == MetricModel::shortest_path) {
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::uniform_int_distribution<std::int64_t> weight(1, 10);
    std::fill(d.begin(), d.end(), inf);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
    auto connect = [&](std::size_t a, std::size_t b) {
      std::int64_t w = weight(rng);
      d[a * n + b] = std::min(d[a * n + b], w);
      d[b * n + a] = std::min(d[b * n + a], w);
    };
    // random spanning tree, then about n extra chords
    for (std::size_t i = 1; i < n; ++i) {
      connect(i, std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
    }
    std::uniform_int_distribution<std::size_t> site(0, n - 1);
    for (std::size_t e = 0; e < n; ++e) {
      std::size_t a = site(rng);
      std::size_t b = site(rng);
      if (a != b) connect(a, b);
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
        }
      }
    }
  } else {
    const auto side = static_cast<std::int64_t>(std::max<std::size_t>(100, 4 * n));
    std::uniform_int_distribution<std::int64_t> coord(0, side);
    std::set<std::pair<std::int64_t, std::int64_t>> used;
    std::vector<std::pair<std::int64_t, std::int64_t>> points;
    while (points.size() < n) {
      std::pair<std::int64_t, std::int64_t> p{coord(rng), coord(rng)};
      if (used.insert(p).second) points.push_back(p);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i * n + j] = std::abs(points[i].first - points[j].first) +
                       std::abs(points[i].second - points[j].second);
      }
    }
  }

  std::vector<Rational> dist;
  dist.reserve(n * n);
  for (auto x : d) dist.emplace_back(static_cast<long>(x));
  return MetricSpace({}, std::move(dist));
}

}  // namespace starmetric
