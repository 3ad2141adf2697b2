#pragma once

// Exact arithmetic in a real quadratic field Q(sqrt d).

#include <cmath>
#include <compare>
#include <string>
#include <vector>

#include "adjoint/rational.hpp"

namespace adjoint {

inline bool is_squarefree(long d) {
  if (d < 2) return false;
  for (long p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return true;
}

/// a + b*sqrt(d). A number with b == 0 is rational and mixes with any field.
class QuadNum {
 public:
  QuadNum() = default;
  QuadNum(const Rat& a) : a_(a) {}  // NOLINT: rationals embed implicitly
  QuadNum(long a) : a_(a) {}        // NOLINT
  QuadNum(Rat a, Rat b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (b_ != 0 && !is_squarefree(d_))
      throw Error(ErrorKind::Domain, "quadratic field radicand must be squarefree and > 1");
    if (b_ == 0) d_ = 0;
  }

  const Rat& rational_part() const { return a_; }
  const Rat& irrational_part() const { return b_; }
  long radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  QuadNum conjugate() const { return b_ == 0 ? *this : QuadNum(a_, -b_, d_); }
  /// Field norm a^2 - d b^2, always rational.
  Rat norm() const { return a_ * a_ - Rat(d_) * b_ * b_; }

  friend QuadNum operator+(const QuadNum& x, const QuadNum& y) {
    long d = join(x, y);
    return QuadNum(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  friend QuadNum operator-(const QuadNum& x, const QuadNum& y) {
    long d = join(x, y);
    return QuadNum(x.a_ - y.a_, x.b_ - y.b_, d);
  }
  friend QuadNum operator*(const QuadNum& x, const QuadNum& y) {
    long d = join(x, y);
    return QuadNum(x.a_ * y.a_ + Rat(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  friend QuadNum operator/(const QuadNum& x, const QuadNum& y) {
    if (y.is_zero()) throw Error(ErrorKind::Domain, "division by zero in Q(sqrt d)");
    if (y.is_rational()) return QuadNum(x.a_ / y.a_, x.b_ / y.a_, x.d_);
    Rat n = y.norm();
    QuadNum num = x * y.conjugate();
    return QuadNum(num.a_ / n, num.b_ / n, num.d_);
  }
  QuadNum operator-() const { return QuadNum(-a_, -b_, d_); }
  QuadNum& operator+=(const QuadNum& y) { return *this = *this + y; }
  QuadNum& operator-=(const QuadNum& y) { return *this = *this - y; }
  QuadNum& operator*=(const QuadNum& y) { return *this = *this * y; }
  QuadNum& operator/=(const QuadNum& y) { return *this = *this / y; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// Exact sign: compares a^2 against d b^2 when the parts disagree in sign.
  int sign() const {
    int sa = a_ > 0 ? 1 : (a_ < 0 ? -1 : 0);
    int sb = b_ > 0 ? 1 : (b_ < 0 ? -1 : 0);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    Rat lhs = a_ * a_, rhs = Rat(d_) * b_ * b_;
    if (lhs == rhs) return 0;  // impossible for squarefree d, kept for safety of the algebra
    return lhs > rhs ? sa : sb;
  }

  friend bool operator==(const QuadNum& x, const QuadNum& y) { return (x - y).sign() == 0; }
  friend std::strong_ordering operator<=>(const QuadNum& x, const QuadNum& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double approx() const {
    return a_.convert_to<double>() + b_.convert_to<double>() * std::sqrt(static_cast<double>(d_));
  }

  std::string str() const {
    if (b_ == 0) return to_string(a_);
    return to_string(a_) + (b_ < 0 ? "-" : "+") + to_string(abs(b_)) + "*sqrt(" + std::to_string(d_) + ")";
  }

 private:
  static long join(const QuadNum& x, const QuadNum& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_) throw Error(ErrorKind::Domain, "mixing different quadratic fields");
    return x.d_;
  }

  Rat a_ = 0;
  Rat b_ = 0;
  long d_ = 0;
};

inline QuadNum abs(const QuadNum& x) { return x.sign() < 0 ? -x : x; }

/// Exact floor.
inline Int floor_quad(const QuadNum& x) {
  if (x.is_rational()) return floor_rat(x.rational_part());
  Int n(static_cast<long long>(std::floor(x.approx())));
  while (x < QuadNum(Rat(n))) n -= 1;
  while (!(x < QuadNum(Rat(n + 1)))) n += 1;
  return n;
}

inline QuadNum sqrt_of(long d) { return QuadNum(Rat(0), Rat(1), d); }

/// Vector over Q(sqrt d); every irrational entry shares the same d.
struct QuadVec {
  long d = 0;
  std::vector<QuadNum> entries;

  std::size_t size() const { return entries.size(); }

  static QuadVec from_parts(long d, const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::Dimension, "QuadVec parts differ in length");
    if (!is_squarefree(d)) throw Error(ErrorKind::Domain, "radicand must be squarefree and > 1");
    QuadVec v;
    v.d = d;
    for (std::size_t i = 0; i < a.size(); ++i) v.entries.emplace_back(a[i], b[i], d);
    return v;
  }

  static QuadVec from_rational(const RatVec& a) {
    QuadVec v;
    for (const auto& x : a) v.entries.emplace_back(x);
    return v;
  }

  RatVec rational_parts() const {
    RatVec out;
    for (const auto& e : entries) out.push_back(e.rational_part());
    return out;
  }
  RatVec irrational_parts() const {
    RatVec out;
    for (const auto& e : entries) out.push_back(e.irrational_part());
    return out;
  }
  bool is_rational() const {
    for (const auto& e : entries)
      if (!e.is_rational()) return false;
    return true;
  }
};

inline std::vector<QuadNum> to_quad(const RatVec& v) {
  std::vector<QuadNum> out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

inline QuadNum max_norm_diff(const std::vector<QuadNum>& x, const RatVec& w) {
  if (x.size() != w.size()) throw Error(ErrorKind::Dimension, "norm: dimension mismatch");
  QuadNum m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    QuadNum d = abs(x[i] - QuadNum(w[i]));
    if (d > m) m = d;
  }
  return m;
}

}  // namespace adjoint
