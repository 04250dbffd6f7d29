#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

/// A finite metric space on labelled sites. Construction validates
/// positivity, symmetry and the triangle inequality exactly; instances are
/// immutable afterwards.
///
/// Alongside the rational matrix the space keeps an integer copy scaled by
/// the least common denominator of all entries, which is what the graph
/// kernels consume.
class MetricSpace {
 public:
  /// `dist` is row-major n×n. Empty `labels` means "0".."n-1".
  MetricSpace(std::vector<std::string> labels, std::vector<Rational> dist);

  /// Convenience for tests and generators.
  static MetricSpace from_rows(const std::vector<std::vector<Rational>>& rows,
                               std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return n_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  /// Common denominator: (*this)(i, j) * scale() == scaled(i, j).
  const BigInt& scale() const noexcept { return scale_; }
  const BigInt& scaled(std::size_t i, std::size_t j) const { return scaled_[i * n_ + j]; }
  const std::vector<BigInt>& scaled_matrix() const noexcept { return scaled_; }

  /// Largest and smallest off-diagonal distance (n >= 2).
  Rational max_distance() const;
  Rational min_distance() const;

  /// Every distance multiplied by alpha > 0.
  MetricSpace scaled_by(const Rational& alpha) const;

  friend bool operator==(const MetricSpace& a, const MetricSpace& b) {
    return a.labels_ == b.labels_ && a.dist_ == b.dist_;
  }

 private:
  void validate() const;

  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<Rational> dist_;
  BigInt scale_{1};
  std::vector<BigInt> scaled_;
};

/// Hub edge lengths c_v of a star spanning the sites, with its dilation.
struct StarEmbedding {
  std::vector<std::string> labels;
  std::vector<Rational> hub_len;
  Rational lambda_star;
};

enum class Constraint : std::uint8_t {
  nonnegative = 1,  // c_v >= 0
  dominating = 2,   // c_v + c_w >= d(v, w)
  dilation = 3,     // c_v + c_w <= λ d(v, w)
};

struct Violation {
  Constraint constraint;
  std::size_t v;
  std::size_t w;  // == v for nonnegativity
  Rational lhs;
  Rational rhs;
};

struct VerificationReport {
  std::vector<Violation> violations;

  bool feasible() const noexcept { return violations.empty(); }
};

/// One line per violation, naming sites by label.
std::string describe(const Violation& violation, const std::vector<std::string>& labels);

/// max over unordered pairs of (c_u + c_v) / d(u, v).
Rational star_dilation(const MetricSpace& m, const std::vector<Rational>& hub_len);

/// Checks every constraint of the star LP exactly. Violations are report
/// content; a label or length mismatch between `m` and `s` is a DomainError.
VerificationReport verify_star(const MetricSpace& m, const StarEmbedding& s);

// ---------------------------------------------------------------------------

namespace detail {

inline std::string pair_text(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

template <class Int>
void check_triangles(std::size_t n, const std::vector<BigInt>& scaled_big) {
  std::vector<Int> d(scaled_big.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = from_big<Int>(scaled_big[i]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Int& dij = d[i * n + j];
      const Int* row_j = &d[j * n];
      const Int* row_i = &d[i * n];
      for (std::size_t k = 0; k < n; ++k) {
        if (dij + row_j[k] < row_i[k]) {
          throw MetricViolation("triangle inequality fails at (" + std::to_string(i) + "," +
                                    std::to_string(j) + "," + std::to_string(k) + "): d(" +
                                    std::to_string(i) + "," + std::to_string(j) + ") + d(" +
                                    std::to_string(j) + "," + std::to_string(k) + ") < d(" +
                                    std::to_string(i) + "," + std::to_string(k) + ")",
                                {i, j, k});
        }
      }
    }
  }
}

}  // namespace detail

inline MetricSpace::MetricSpace(std::vector<std::string> labels, std::vector<Rational> dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  std::size_t n = 0;
  while (n * n < dist_.size()) ++n;
  if (n == 0 || n * n != dist_.size()) {
    throw ParseError("distance matrix must be square and nonempty (got " +
                     std::to_string(dist_.size()) + " entries)");
  }
  n_ = n;
  if (labels_.empty()) {
    for (std::size_t i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != n_) {
    throw ParseError(std::to_string(labels_.size()) + " labels for a " + std::to_string(n_) +
                     "x" + std::to_string(n_) + " matrix");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw ParseError("empty site label");
    if (!seen.insert(label).second) throw DomainError("duplicate site label '" + label + "'");
  }

  for (const auto& x : dist_) {
    mpz_lcm(scale_.get_mpz_t(), scale_.get_mpz_t(), x.get_den().get_mpz_t());
  }
  scaled_.reserve(dist_.size());
  for (const auto& x : dist_) {
    scaled_.push_back(BigInt(x.get_num() * (scale_ / x.get_den())));
  }
  validate();
}

inline MetricSpace MetricSpace::from_rows(const std::vector<std::vector<Rational>>& rows,
                                          std::vector<std::string> labels) {
  std::vector<Rational> flat;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      throw ParseError("row of length " + std::to_string(row.size()) + " in a " +
                       std::to_string(rows.size()) + "-row matrix");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return MetricSpace(std::move(labels), std::move(flat));
}

inline void MetricSpace::validate() const {
  BigInt largest = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const Rational& x = (*this)(i, j);
      if (i == j) {
        if (x != 0) {
          throw MetricViolation("diagonal entry d" + detail::pair_text(i, i) + " = " +
                                    to_fraction_string(x) + " is not zero",
                                {i, i});
        }
        continue;
      }
      if (x <= 0) {
        throw MetricViolation("positivity fails at " + detail::pair_text(i, j) + ": d = " +
                                  to_fraction_string(x),
                              {i, j});
      }
      if (x != (*this)(j, i)) {
        throw MetricViolation("asymmetric entries at " + detail::pair_text(i, j) + ": " +
                                  to_fraction_string(x) + " vs " +
                                  to_fraction_string((*this)(j, i)),
                              {i, j});
      }
      if (scaled(i, j) > largest) largest = scaled(i, j);
    }
  }
  with_integer_kernel(BigInt(4 * largest), [&](auto tag) {
    detail::check_triangles<typename decltype(tag)::type>(n_, scaled_);
  });
}

inline Rational MetricSpace::max_distance() const {
  if (n_ < 2) throw DomainError("metric space has fewer than two sites");
  Rational best = (*this)(0, 1);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) > best) best = (*this)(i, j);
    }
  }
  return best;
}

inline Rational MetricSpace::min_distance() const {
  if (n_ < 2) throw DomainError("metric space has fewer than two sites");
  Rational best = (*this)(0, 1);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) < best) best = (*this)(i, j);
    }
  }
  return best;
}

inline MetricSpace MetricSpace::scaled_by(const Rational& alpha) const {
  if (alpha <= 0) throw DomainError("scale factor must be positive");
  std::vector<Rational> out;
  out.reserve(dist_.size());
  for (const auto& x : dist_) out.push_back(Rational(x * alpha));
  return MetricSpace(labels_, std::move(out));
}

inline std::string describe(const Violation& violation, const std::vector<std::string>& labels) {
  const std::string& a = labels.at(violation.v);
  const std::string& b = labels.at(violation.w);
  switch (violation.constraint) {
    case Constraint::nonnegative:
      return "constraint (1) c >= 0 violated at " + a + ": c = " + to_fraction_string(violation.lhs);
    case Constraint::dominating:
      return "constraint (2) c_v + c_w >= d violated at (" + a + "," + b + "): " +
             to_fraction_string(violation.lhs) + " < " + to_fraction_string(violation.rhs);
    case Constraint::dilation:
      return "constraint (3) c_v + c_w <= lambda*d violated at (" + a + "," + b + "): " +
             to_fraction_string(violation.lhs) + " > " + to_fraction_string(violation.rhs);
  }
  return "unknown constraint";
}

inline Rational star_dilation(const MetricSpace& m, const std::vector<Rational>& hub_len) {
  const std::size_t n = m.size();
  if (n < 2) throw DomainError("star dilation needs at least two sites");
  if (hub_len.size() != n) {
    throw DomainError("expected " + std::to_string(n) + " hub lengths, got " +
                      std::to_string(hub_len.size()));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (hub_len[v] < 0) throw DomainError("negative hub length at site " + m.labels()[v]);
  }
  Rational best = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      Rational ratio = (hub_len[u] + hub_len[v]) / m(u, v);
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

inline VerificationReport verify_star(const MetricSpace& m, const StarEmbedding& s) {
  const std::size_t n = m.size();
  if (s.labels != m.labels()) throw DomainError("star labels do not match the metric's sites");
  if (s.hub_len.size() != n) throw DomainError("hub length count does not match site count");

  VerificationReport report;
  for (std::size_t v = 0; v < n; ++v) {
    if (s.hub_len[v] < 0) {
      report.violations.push_back({Constraint::nonnegative, v, v, s.hub_len[v], Rational(0)});
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = v + 1; w < n; ++w) {
      Rational sum = s.hub_len[v] + s.hub_len[w];
      if (sum < m(v, w)) report.violations.push_back({Constraint::dominating, v, w, sum, m(v, w)});
      Rational cap = s.lambda_star * m(v, w);
      if (sum > cap) report.violations.push_back({Constraint::dilation, v, w, sum, cap});
    }
  }
  return report;
}

}  // namespace starmetric
