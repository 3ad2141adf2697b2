#pragma once

// Exact rational scalars and vectors shared by every module.

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adjoint/error.hpp"

namespace adjoint {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row-major
using IntVec = std::vector<long>;

inline Int numer(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denom(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rat& q) { return denom(q) == 1; }

inline Int floor_rat(const Rat& q) {
  Int n = numer(q), d = denom(q);
  Int f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

inline Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

inline Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

/// Canonical text form: "p" for integers, "p/q" otherwise, lowest terms.
inline std::string to_string(const Rat& q) {
  if (is_integer(q)) return numer(q).str();
  return numer(q).str() + "/" + denom(q).str();
}

/// Parses "p" or "p/q" with optional sign. Decimal points and exponents are
/// rejected so that no binary float can enter the kernel.
inline Rat parse_rat(std::string_view s) {
  auto bad = [&] { return Error(ErrorKind::Parse, "malformed rational \"" + std::string(s) + "\"; rationals must be written \"p\" or \"p/q\", e.g. \"1/2\""); };
  if (s.empty()) throw bad();
  auto valid_int = [](std::string_view t) {
    std::size_t i = 0;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string_view t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    if (!valid_int(s)) throw bad();
    return Rat(Int(std::string(strip_plus(s))));
  }
  auto num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') throw bad();
  Int d{std::string(den)};
  if (d == 0) throw Error(ErrorKind::Parse, "zero denominator in \"" + std::string(s) + "\"");
  return Rat(Int(std::string(strip_plus(num))), d);
}

inline RatVec to_ratvec(const std::vector<long>& v) {
  RatVec out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

inline IntVec to_intvec(const RatVec& v) {
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!is_integer(x)) throw Error(ErrorKind::Domain, "expected an integer vector");
    out.push_back(numer(x).convert_to<long>());
  }
  return out;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::Dimension, "dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const RatVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::Dimension, "dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline long dot(const IntVec& a, const IntVec& b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec operator+(RatVec a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline RatVec operator-(RatVec a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline RatVec operator*(const Rat& t, RatVec a) {
  for (auto& x : a) x *= t;
  return a;
}

inline bool is_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

inline bool is_integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return is_integer(x); });
}

inline Int common_denominator(const RatVec& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm_int(l, denom(x));
  return l;
}

/// Scales a nonzero rational vector to the primitive integer vector on its ray.
inline RatVec primitive(const RatVec& v) {
  Int l = common_denominator(v);
  Int g = 0;
  for (const auto& x : v) g = gcd_int(g, abs(numer(x * l)));
  if (g == 0) return v;
  RatVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(numer(x * l) / g);
  return out;
}

inline Rat max_norm(const RatVec& v) {
  Rat m = 0;
  for (const auto& x : v) m = std::max<Rat>(m, abs(x));
  return m;
}

inline std::string to_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

inline std::string to_string(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

inline Rat sum(const RatVec& v) {
  Rat s = 0;
  for (const auto& x : v) s += x;
  return s;
}

}  // namespace adjoint
