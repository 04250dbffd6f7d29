#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace starmetric {

/// Malformed input text (metric files, star files, numeric literals).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distance matrix that is not a metric. `where()` holds the offending
/// site indices: a pair (i, j) or a triangle triple (i, j, k).
class MetricViolation : public std::runtime_error {
 public:
  MetricViolation(const std::string& what, std::vector<std::size_t> where)
      : std::runtime_error(what), where_(std::move(where)) {}

  const std::vector<std::size_t>& where() const noexcept { return where_; }

 private:
  std::vector<std::size_t> where_;
};

/// An argument outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// restrict_to_line was asked to collapse a function across one of its
/// breakpoints.
class BreakpointInside : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Shortest paths were requested at a parameter where the graph has a
/// negative cycle.
class NegativeCycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant of the parametric search failed. Always a bug.
class InternalInvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input too large for an exponential-time oracle.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace starmetric
