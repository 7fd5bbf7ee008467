#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "scrip/errors.hpp"

namespace scrip {

/// Exact rational on 64-bit numerator/denominator with 128-bit intermediates.
/// Always kept normalized (gcd 1, positive denominator). Overflow after
/// reduction throws rather than wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("Rational: zero denominator");
    __int128 n = num, d = den;
    normalize(n, d);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return Rational(n, d, raw_tag{});
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return Rational(n, d, raw_tag{});
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num_ * b.num_;
    __int128 d = (__int128)a.den_ * b.den_;
    return Rational(n, d, raw_tag{});
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("Rational: division by zero");
    __int128 n = (__int128)a.num_ * b.den_;
    __int128 d = (__int128)a.den_ * b.num_;
    return Rational(n, d, raw_tag{});
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }

  Rational abs() const { return num_ >= 0 ? *this : Rational(-num_, den_); }

  Rational pow(int e) const {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= *this;
    return r;
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  struct raw_tag {};
  Rational(__int128 n, __int128 d, raw_tag) { normalize(n, d); }

  void normalize(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 g = gcd128(a, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw DomainError("Rational: overflow after reduction");
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace scrip
