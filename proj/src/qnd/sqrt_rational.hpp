#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace qnd {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// sign * sqrt(num/den) with num/den in lowest terms. The squared value of a
// 3j or 6j symbol is rational, so this carries such symbols exactly.
class SqrtRational {
 public:
  SqrtRational() = default;

  static SqrtRational zero() { return SqrtRational(); }

  // value = sign(q) * sqrt(|q|)
  static SqrtRational from_signed_square(const BigRational& q) {
    SqrtRational r;
    int s = q.sign();
    if (s == 0) return r;
    BigRational a = s > 0 ? q : BigRational(-q);
    r.sign_ = s;
    r.num_ = boost::multiprecision::numerator(a);
    r.den_ = boost::multiprecision::denominator(a);
    return r;
  }

  int sign() const { return sign_; }
  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }
  bool is_zero() const { return sign_ == 0; }

  BigRational squared() const { return BigRational(num_, den_); }
  BigRational signed_squared() const {
    BigRational q(num_, den_);
    return sign_ < 0 ? BigRational(-q) : q;
  }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::sqrt(static_cast<double>(BigRational(num_, den_)));
  }

  std::string str() const {
    if (sign_ == 0) return "0";
    std::string s = sign_ < 0 ? "-sqrt(" : "sqrt(";
    return s + num_.str() + "/" + den_.str() + ")";
  }

  friend bool operator==(const SqrtRational& a, const SqrtRational& b) {
    return a.sign_ == b.sign_ && a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  int sign_ = 0;
  BigInt num_ = 0;
  BigInt den_ = 1;
};

}  // namespace qnd
