#pragma once

// Exact scalars. `Rational` is the public currency for distances, dilations
// and hub lengths; `Ratio<Int>` is the unnormalized fraction used inside the
// integer kernels, where every distance has been scaled to a common integer
// unit and λ values are ratios of path-weight differences.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "starmetric/errors.hpp"

namespace starmetric {

using Rational = mpq_class;
using BigInt = mpz_class;
__extension__ using int128 = __int128;

// ---------------------------------------------------------------------------
// Text conversion

/// Exact conversion of "12", "-3/4", "1.5", "2.5e-3" to a Rational.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) -> Rational {
    throw ParseError("invalid number '" + std::string(text) + "': " + why);
  };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) return fail("empty");

  auto all_digits = [](std::string_view d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) {
             return std::isdigit(static_cast<unsigned char>(c)) != 0;
           });
  };

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view p = s.substr(0, slash);
    std::string_view q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) return fail("expected p/q with integer p and q");
    BigInt den(std::string(q), 10);
    if (den == 0) return fail("zero denominator");
    value = Rational(BigInt(std::string(p), 10), den);
    value.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) return fail("bad exponent");
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      int_part = s.substr(0, dot);
      frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) return fail("no digits");
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      return fail("unexpected character");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    BigInt mantissa(digits.empty() ? std::string("0") : digits, 10);
    exponent -= static_cast<long>(frac_part.size());
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0) {
      value = Rational(mantissa * power);
    } else {
      value = Rational(mantissa, power);
      value.canonicalize();
    }
  }
  if (negative) value = -value;
  return value;
}

/// Canonical exact form: "p/q" in lowest terms, or "p" for integers.
inline std::string to_fraction_string(const Rational& x) { return x.get_str(10); }

/// Decimal rendering with `significant` significant digits, rounded half away
/// from zero. Display only.
inline std::string to_decimal_string(const Rational& x, int significant = 20) {
  if (x == 0) return "0";
  BigInt a = abs(x.get_num());
  const BigInt& b = x.get_den();

  // e = floor(log10(a / b))
  long e = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 10));
  auto pow10 = [](long k) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k));
    return p;
  };
  auto below = [&](long k) {  // a/b < 10^k
    return k >= 0 ? a < b * pow10(k) : a * pow10(-k) < b;
  };
  while (below(e)) --e;
  while (!below(e + 1)) ++e;

  auto scaled_round = [&](long shift) {  // round(a/b * 10^shift)
    BigInt num = a;
    BigInt den = b;
    if (shift >= 0) num *= pow10(shift); else den *= pow10(-shift);
    BigInt q = (2 * num + den) / (2 * den);
    return q;
  };
  BigInt digits_value = scaled_round(significant - 1 - e);
  if (digits_value >= pow10(significant)) {
    ++e;
    digits_value = scaled_round(significant - 1 - e);
  }
  std::string digits = digits_value.get_str(10);

  std::string out = x < 0 ? "-" : "";
  if (e >= 0) {
    auto before = static_cast<std::size_t>(e + 1);
    if (before >= digits.size()) {
      out += digits + std::string(before - digits.size(), '0');
    } else {
      out += digits.substr(0, before) + "." + digits.substr(before);
    }
  } else {
    out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  }
  return out;
}

inline double to_double(const Rational& x) { return x.get_d(); }

// ---------------------------------------------------------------------------
// Integer kernel types

inline BigInt to_big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

inline BigInt to_big(int128 v) {
  const bool negative = v < 0;
  auto u = static_cast<unsigned __int128>(v);
  if (negative) u = -u;
  const std::uint64_t words[2] = {static_cast<std::uint64_t>(u),
                                  static_cast<std::uint64_t>(u >> 64)};
  BigInt out;
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (negative) out = -out;
  return out;
}

inline const BigInt& to_big(const BigInt& v) { return v; }

template <class Int>
Int from_big(const BigInt& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else if constexpr (std::is_same_v<Int, std::int64_t>) {
    if (!v.fits_slong_p()) throw InternalInvariantError("integer kernel overflow (int64)");
    return static_cast<std::int64_t>(v.get_si());
  } else {
    static_assert(std::is_same_v<Int, int128>);
    BigInt mag = abs(v);
    if (mpz_sizeinbase(mag.get_mpz_t(), 2) > 126) {
      throw InternalInvariantError("integer kernel overflow (int128)");
    }
    std::uint64_t words[2] = {0, 0};
    mpz_export(words, nullptr, -1, sizeof(std::uint64_t), 0, 0, mag.get_mpz_t());
    auto u = (static_cast<unsigned __int128>(words[1]) << 64) | words[0];
    auto out = static_cast<int128>(u);
    return v < 0 ? -out : out;
  }
}

/// An exact fraction num/den with den > 0, not reduced. Comparisons use
/// cross multiplication, so callers must keep |num|·|den| products inside
/// the range of Int (see `with_integer_kernel`).
template <class Int>
struct Ratio {
  Int num{0};
  Int den{1};

  Ratio() = default;
  Ratio(Int n) : num(std::move(n)), den(1) {}  // NOLINT(google-explicit-constructor)
  Ratio(Int n, Int d) : num(std::move(n)), den(std::move(d)) {
    if (den == 0) throw DomainError("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
  }

  friend bool operator<(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
  friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }
  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
  friend bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }
};

template <class Int>
Rational to_rational(const Ratio<Int>& r) {
  Rational out(to_big(r.num), to_big(r.den));
  out.canonicalize();
  return out;
}

inline Rational to_rational(const Ratio<Rational>& r) { return r.num / r.den; }

template <class Int>
Ratio<Int> ratio_from_rational(const Rational& x) {
  if constexpr (std::is_same_v<Int, Rational>) {
    return Ratio<Rational>(x);
  } else {
    return Ratio<Int>(from_big<Int>(x.get_num()), from_big<Int>(x.get_den()));
  }
}

/// Invokes `fn(std::type_identity<Int>{})` with the narrowest of int64,
/// int128 and BigInt that holds every intermediate bounded by `bound`.
template <class Fn>
decltype(auto) with_integer_kernel(const BigInt& bound, Fn&& fn) {
  const auto bits = mpz_sizeinbase(BigInt(abs(bound)).get_mpz_t(), 2);
  if (bits <= 59) return std::forward<Fn>(fn)(std::type_identity<std::int64_t>{});
  if (bits <= 122) return std::forward<Fn>(fn)(std::type_identity<int128>{});
  return std::forward<Fn>(fn)(std::type_identity<BigInt>{});
}

}  // namespace starmetric
