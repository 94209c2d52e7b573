#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace qnd {

// Angular momentum stored as twice its value, so 9/2 is HalfInt::from_twice(9)
// and equality on quantum numbers is exact integer comparison.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt from_int(int value) { return HalfInt(2 * value); }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * twice_; }

  // Multiplicity 2j+1; only meaningful for magnitudes.
  constexpr int multiplicity() const { return twice_ + 1; }

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) {
    return HalfInt(a.twice_ + b.twice_);
  }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) {
    return HalfInt(a.twice_ - b.twice_);
  }
  constexpr HalfInt operator-() const { return HalfInt(-twice_); }

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

// Thrown for quantum numbers that violate preconditions (as opposed to
// selection-rule zeros, which are legal results).
class bad_quantum_numbers : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qnd
