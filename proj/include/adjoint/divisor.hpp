#pragma once

// Formal divisors: finite combinations of named prime divisors.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "adjoint/quadratic.hpp"
#include "adjoint/rational.hpp"

namespace adjoint {

/// Finite combination sum c_P P over named primes. The optional space tag
/// ("X", "S", ...) keeps divisors of different varieties from being mixed;
/// an untagged divisor combines with anything.
template <class T>
class BasicDivisor {
 public:
  using Map = std::map<std::string, T>;

  BasicDivisor() = default;
  explicit BasicDivisor(Map coeffs, std::string space = {}) : space_(std::move(space)) {
    for (auto& [k, v] : coeffs)
      if (!(v == T(0))) c_.emplace(k, v);
  }

  static BasicDivisor prime(const std::string& name, std::string space = {}) {
    return BasicDivisor(Map{{name, T(1)}}, std::move(space));
  }

  const Map& coeffs() const { return c_; }
  const std::string& space() const { return space_; }
  BasicDivisor with_space(std::string s) const {
    BasicDivisor d = *this;
    d.space_ = std::move(s);
    return d;
  }

  T operator[](const std::string& name) const {
    auto it = c_.find(name);
    return it == c_.end() ? T(0) : it->second;
  }
  void set(const std::string& name, const T& v) {
    if (v == T(0)) c_.erase(name);
    else c_[name] = v;
  }

  bool is_zero() const { return c_.empty(); }
  bool is_effective() const {
    for (auto& [k, v] : c_)
      if (v < T(0)) return false;
    return true;
  }

  std::set<std::string> support() const {
    std::set<std::string> s;
    for (auto& [k, v] : c_) s.insert(k);
    return s;
  }

  friend BasicDivisor operator+(const BasicDivisor& a, const BasicDivisor& b) {
    BasicDivisor out(a.c_, join(a, b));
    for (auto& [k, v] : b.c_) out.set(k, out[k] + v);
    return out;
  }
  friend BasicDivisor operator-(const BasicDivisor& a, const BasicDivisor& b) {
    BasicDivisor out(a.c_, join(a, b));
    for (auto& [k, v] : b.c_) out.set(k, out[k] - v);
    return out;
  }
  friend BasicDivisor operator*(const T& t, const BasicDivisor& a) {
    BasicDivisor out({}, a.space_);
    for (auto& [k, v] : a.c_) out.set(k, t * v);
    return out;
  }
  BasicDivisor operator-() const { return T(-1) * *this; }

  friend bool operator==(const BasicDivisor& a, const BasicDivisor& b) {
    join(a, b);
    return a.c_ == b.c_;
  }

  /// Coefficientwise a <= b.
  friend bool operator<=(const BasicDivisor& a, const BasicDivisor& b) { return (b - a).is_effective(); }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (auto& [k, v] : c_) {
      if (!s.empty()) s += " + ";
      s += coeff_str(v) + "*" + k;
    }
    return s;
  }

 private:
  static std::string coeff_str(const Rat& v) { return to_string(v); }
  static std::string coeff_str(const QuadNum& v) { return "(" + v.str() + ")"; }

  static std::string join(const BasicDivisor& a, const BasicDivisor& b) {
    if (a.space_.empty()) return b.space_;
    if (b.space_.empty() || a.space_ == b.space_) return a.space_;
    throw Error(ErrorKind::Domain, "mixing divisors on different varieties (" + a.space_ + ", " + b.space_ + ")");
  }

  Map c_;
  std::string space_;
};

using Divisor = BasicDivisor<Rat>;
using QuadDivisor = BasicDivisor<QuadNum>;

/// D1 ∧ D2: coefficientwise minimum over the union of supports.
template <class T>
BasicDivisor<T> wedge(const BasicDivisor<T>& a, const BasicDivisor<T>& b) {
  BasicDivisor<T> out = a - a;  // zero with the joined space tag
  out = out + (b - b);
  for (const auto& name : a.support()) out.set(name, std::min(a[name], b[name]));
  for (const auto& name : b.support()) out.set(name, std::min(a[name], b[name]));
  return out;
}

inline Divisor floor_divisor(const Divisor& d) {
  Divisor out({}, d.space());
  for (auto& [k, v] : d.coeffs()) out.set(k, Rat(floor_rat(v)));
  return out;
}

inline bool is_integral(const Divisor& d) {
  for (auto& [k, v] : d.coeffs())
    if (!is_integer(v)) return false;
  return true;
}

inline QuadDivisor to_quad(const Divisor& d) {
  QuadDivisor::Map m;
  for (auto& [k, v] : d.coeffs()) m.emplace(k, QuadNum(v));
  return QuadDivisor(m, d.space());
}

/// Max-norm of the coefficient vector.
template <class T>
T max_norm(const BasicDivisor<T>& d) {
  T m(0);
  for (auto& [k, v] : d.coeffs()) {
    T a = v < T(0) ? T(0) - v : v;
    if (a > m) m = a;
  }
  return m;
}

}  // namespace adjoint
