#pragma once

// Linear functions of the dilation parameter λ and their lower envelopes.
//
// Everything here is templated on the coefficient ring C. The graph kernels
// instantiate it with integers (distances scaled to a common unit); tests and
// ad-hoc callers can use Rational directly. Points on the λ axis are
// Ratio<C>, so breakpoints (ratios of coefficient differences) stay exact.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "starmetric/errors.hpp"
#include "starmetric/rational.hpp"

namespace starmetric {

/// λ·slope + intercept, or the absorbing value +∞.
template <class C>
class LinearFn {
 public:
  LinearFn() = default;
  LinearFn(C slope, C intercept) : slope_(std::move(slope)), intercept_(std::move(intercept)) {}

  static LinearFn plus_infinity() {
    LinearFn f;
    f.infinite_ = true;
    return f;
  }

  bool is_infinite() const noexcept { return infinite_; }
  const C& slope() const noexcept { return slope_; }
  const C& intercept() const noexcept { return intercept_; }

  /// Value at x; the function must be finite.
  Ratio<C> at(const Ratio<C>& x) const {
    return Ratio<C>(C(slope_ * x.num + intercept_ * x.den), x.den);
  }

  /// Numerator of the value at x over x.den. Cheaper than at() when only
  /// comparing functions at a common point.
  C scaled_at(const Ratio<C>& x) const { return C(slope_ * x.num + intercept_ * x.den); }

  friend LinearFn operator+(const LinearFn& f, const LinearFn& g) {
    if (f.infinite_ || g.infinite_) return plus_infinity();
    return LinearFn(C(f.slope_ + g.slope_), C(f.intercept_ + g.intercept_));
  }

  friend bool operator==(const LinearFn& f, const LinearFn& g) {
    if (f.infinite_ || g.infinite_) return f.infinite_ == g.infinite_;
    return f.slope_ == g.slope_ && f.intercept_ == g.intercept_;
  }
  friend bool operator!=(const LinearFn& f, const LinearFn& g) { return !(f == g); }

 private:
  C slope_{0};
  C intercept_{0};
  bool infinite_ = false;
};

template <class C>
LinearFn<C> add(const LinearFn<C>& f, const LinearFn<C>& g) {
  return f + g;
}

/// Closed interval [lo, hi] on the λ axis.
template <class C>
struct Interval {
  Ratio<C> lo;
  Ratio<C> hi;

  Interval() = default;
  Interval(Ratio<C> lo_, Ratio<C> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (hi < lo) throw DomainError("interval with hi < lo");
  }

  bool contains(const Ratio<C>& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& r) const { return lo <= r.lo && r.hi <= hi; }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

template <class C>
struct Piece {
  LinearFn<C> line;
  Ratio<C> right_end;
};

template <class C>
class EnvelopeBuilder;

/// Continuous piecewise-linear function over a closed interval. Pieces are
/// ordered left to right; piece i covers [right_end(i-1), right_end(i)].
template <class C>
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn() = default;

  /// Checks ordering, coverage and continuity at every breakpoint.
  PiecewiseLinearFn(Interval<C> domain, std::vector<Piece<C>> pieces)
      : domain_(std::move(domain)), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw DomainError("piecewise function without pieces");
    if (pieces_.back().right_end != domain_.hi) throw DomainError("last piece must end at domain.hi");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
      const auto& x = pieces_[i].right_end;
      const auto& left = i == 0 ? domain_.lo : pieces_[i - 1].right_end;
      if (!(left < x) || !(x < domain_.hi)) throw DomainError("piece ends must strictly increase");
      const auto& f = pieces_[i].line;
      const auto& g = pieces_[i + 1].line;
      if (f.is_infinite() != g.is_infinite() ||
          (!f.is_infinite() && f.at(x) != g.at(x))) {
        throw DomainError("pieces disagree at a shared breakpoint");
      }
    }
  }

  static PiecewiseLinearFn single(LinearFn<C> line, Interval<C> domain) {
    PiecewiseLinearFn f;
    f.pieces_.push_back({std::move(line), domain.hi});
    f.domain_ = std::move(domain);
    return f;
  }

  const Interval<C>& domain() const noexcept { return domain_; }
  const std::vector<Piece<C>>& pieces() const noexcept { return pieces_; }
  std::size_t breakpoint_count() const noexcept { return pieces_.size() - 1; }

  /// The line of the first piece; the whole function when breakpoint_count() == 0.
  const LinearFn<C>& front_line() const { return pieces_.front().line; }

 private:
  friend class EnvelopeBuilder<C>;

  Interval<C> domain_;
  std::vector<Piece<C>> pieces_;
};

/// Value at x; std::nullopt stands for +∞.
template <class C>
std::optional<Ratio<C>> eval(const PiecewiseLinearFn<C>& f, const Ratio<C>& x) {
  if (!f.domain().contains(x)) throw DomainError("evaluation point outside the domain");
  for (const auto& piece : f.pieces()) {
    if (x <= piece.right_end) {
      if (piece.line.is_infinite()) return std::nullopt;
      return piece.line.at(x);
    }
  }
  throw InternalInvariantError("piecewise function does not cover its domain");
}

/// Interior breakpoints, strictly increasing; domain endpoints excluded.
template <class C>
std::vector<Ratio<C>> breakpoints(const PiecewiseLinearFn<C>& f) {
  std::vector<Ratio<C>> out;
  const auto& pieces = f.pieces();
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) out.push_back(pieces[i].right_end);
  return out;
}

/// The single line equal to f on r. Breakpoints at r's endpoints are fine;
/// one strictly inside r is a BreakpointInside error.
template <class C>
LinearFn<C> restrict_to_line(const PiecewiseLinearFn<C>& f, const Interval<C>& r) {
  if (!f.domain().contains(r)) throw DomainError("restriction interval not inside the domain");
  const auto& pieces = f.pieces();
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const auto& b = pieces[i].right_end;
    if (r.lo < b && b < r.hi) throw BreakpointInside("breakpoint strictly inside restriction interval");
  }
  for (const auto& piece : pieces) {
    if (r.lo < piece.right_end) return piece.line;
  }
  return pieces.back().line;
}

/// Builds lower envelopes, reusing its scratch buffers across calls.
///
/// Lines are sorted by decreasing slope (ties: smaller intercept first,
/// duplicates dropped) and swept once with a stack; lines that are minimal
/// only at a single point are discarded, so breakpoints strictly increase.
/// Before sorting, the candidates are cut down to the slope range between the
/// minimizers at the two domain ends; nothing outside that range can reach
/// the envelope on the domain.
template <class C>
class EnvelopeBuilder {
 public:
  PiecewiseLinearFn<C> build(std::span<const LinearFn<C>> lines, const Interval<C>& domain) {
    const Ratio<C>& lo = domain.lo;
    const Ratio<C>& hi = domain.hi;

    cand_.clear();
    for (const auto& f : lines) {
      if (!f.is_infinite()) cand_.push_back(&f);
    }
    if (cand_.empty()) return PiecewiseLinearFn<C>::single(LinearFn<C>::plus_infinity(), domain);

    // Minimizers at each end of the domain.
    std::size_t first = 0;
    std::size_t last = 0;
    C best_lo = cand_[0]->scaled_at(lo);
    C best_hi = cand_[0]->scaled_at(hi);
    for (std::size_t i = 1; i < cand_.size(); ++i) {
      C v_lo = cand_[i]->scaled_at(lo);
      if (v_lo < best_lo || (v_lo == best_lo && cand_[i]->slope() < cand_[first]->slope())) {
        best_lo = std::move(v_lo);
        first = i;
      }
      C v_hi = cand_[i]->scaled_at(hi);
      if (v_hi < best_hi || (v_hi == best_hi && cand_[i]->slope() > cand_[last]->slope())) {
        best_hi = std::move(v_hi);
        last = i;
      }
    }
    if (first == last || lo == hi) return PiecewiseLinearFn<C>::single(*cand_[first], domain);
    first_ = cand_[first];

    const C& slope_first = cand_[first]->slope();
    const C& slope_last = cand_[last]->slope();
    sorted_.clear();
    for (std::size_t i = 0; i < cand_.size(); ++i) {
      const C& m = cand_[i]->slope();
      if (i == first || i == last || (slope_last < m && m < slope_first)) sorted_.push_back(cand_[i]);
    }
    if (auto walked = march(first_, domain)) return std::move(*walked);

    std::sort(sorted_.begin(), sorted_.end(), [](const LinearFn<C>* a, const LinearFn<C>* b) {
      if (a->slope() != b->slope()) return a->slope() > b->slope();
      return a->intercept() < b->intercept();
    });

    hull_.clear();
    for (const LinearFn<C>* f : sorted_) {
      if (!hull_.empty() && hull_.back()->slope() == f->slope()) continue;
      while (hull_.size() >= 2) {
        const LinearFn<C>* a = hull_[hull_.size() - 2];
        const LinearFn<C>* b = hull_.back();
        // b survives iff x(a, b) < x(b, f)
        C lhs = C(f->intercept() - b->intercept()) * C(a->slope() - b->slope());
        C rhs = C(b->intercept() - a->intercept()) * C(b->slope() - f->slope());
        if (lhs <= rhs) {
          hull_.pop_back();
        } else {
          break;
        }
      }
      hull_.push_back(f);
    }

    // hull_[i] is minimal between crossings x(i-1, i) and x(i, i+1); keep the
    // lines whose stretch overlaps the open domain.
    std::vector<Piece<C>> pieces;
    for (std::size_t i = 0; i < hull_.size(); ++i) {
      if (i > 0 && !(crossing(i - 1) < hi)) break;
      if (i + 1 < hull_.size() && !(lo < crossing(i))) continue;
      if (!pieces.empty()) pieces.back().right_end = crossing(i - 1);
      pieces.push_back({*hull_[i], hi});
    }

    PiecewiseLinearFn<C> out;
    out.domain_ = domain;
    out.pieces_ = std::move(pieces);
    return out;
  }

 private:
  static constexpr std::size_t kMaxMarchPieces = 8;

  // Walks the envelope left to right from `start`, the minimizer at domain.lo:
  // the next piece is the line of smaller slope that crosses the current one
  // earliest (ties: smallest slope). Costs O(lines · pieces), so it gives up
  // after kMaxMarchPieces pieces and leaves the rest to the hull sweep.
  std::optional<PiecewiseLinearFn<C>> march(const LinearFn<C>* start, const Interval<C>& domain) const {
    std::vector<Piece<C>> pieces;
    const LinearFn<C>* cur = start;
    while (true) {
      if (pieces.size() == kMaxMarchPieces) return std::nullopt;
      const LinearFn<C>* next = nullptr;
      Ratio<C> at;
      for (const LinearFn<C>* f : sorted_) {
        if (!(f->slope() < cur->slope())) continue;
        Ratio<C> x(C(f->intercept() - cur->intercept()), C(cur->slope() - f->slope()));
        if (next == nullptr || x < at || (x == at && f->slope() < next->slope())) {
          next = f;
          at = std::move(x);
        }
      }
      if (next == nullptr || !(at < domain.hi)) {
        pieces.push_back({*cur, domain.hi});
        break;
      }
      pieces.push_back({*cur, at});
      cur = next;
    }
    PiecewiseLinearFn<C> out;
    out.domain_ = domain;
    out.pieces_ = std::move(pieces);
    return out;
  }

  Ratio<C> crossing(std::size_t i) const {
    const LinearFn<C>* a = hull_[i];
    const LinearFn<C>* b = hull_[i + 1];
    return Ratio<C>(C(b->intercept() - a->intercept()), C(a->slope() - b->slope()));
  }

  std::vector<const LinearFn<C>*> cand_;
  std::vector<const LinearFn<C>*> sorted_;
  std::vector<const LinearFn<C>*> hull_;
  const LinearFn<C>* first_ = nullptr;
};

/// Pointwise minimum of `lines` over `domain`. +∞ entries are ignored; if all
/// are +∞ the result is the constant +∞ function.
template <class C>
PiecewiseLinearFn<C> lower_envelope(std::span<const LinearFn<C>> lines, const Interval<C>& domain) {
  EnvelopeBuilder<C> builder;
  return builder.build(lines, domain);
}

template <class C>
PiecewiseLinearFn<C> lower_envelope(const std::vector<LinearFn<C>>& lines, const Interval<C>& domain) {
  return lower_envelope(std::span<const LinearFn<C>>(lines), domain);
}

}  // namespace starmetric
