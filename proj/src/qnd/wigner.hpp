#pragma once

#include "qnd/half_int.hpp"
#include "qnd/sqrt_rational.hpp"

namespace qnd::wig {

// Exact Wigner 3j symbol via the Racah sum in unbounded-integer arithmetic.
// Selection-rule failures (m1+m2+m3 != 0, triangle rule) return zero;
// malformed quantum numbers (|m| > j, inconsistent parity) throw
// bad_quantum_numbers.
SqrtRational wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt m1, HalfInt m2, HalfInt m3);

// Exact Wigner 6j symbol. Triangle-rule failures in any of the four triads
// return zero; malformed inputs throw bad_quantum_numbers.
SqrtRational wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt j4, HalfInt j5, HalfInt j6);

}  // namespace qnd::wig
