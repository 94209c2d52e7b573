#include "qnd/wigner.hpp"

#include <algorithm>
#include <vector>

namespace qnd::wig {
namespace {

// Returned by value: growing the cache reallocates, so references into it
// would dangle across nested factorial() calls in one expression.
BigInt factorial(int n) {
  thread_local std::vector<BigInt> cache{BigInt(1)};
  while (static_cast<int>(cache.size()) <= n) {
    cache.push_back(cache.back() * static_cast<int>(cache.size()));
  }
  return cache[static_cast<std::size_t>(n)];
}

// Triangle coefficient Delta(a,b,c) as an exact rational, from twice-values.
// Caller has checked the triangle rule, so all arguments are non-negative
// even integers in twice-units.
BigRational triangle_coeff(int ta, int tb, int tc) {
  BigInt num = factorial((ta + tb - tc) / 2) * factorial((ta - tb + tc) / 2) *
               factorial((-ta + tb + tc) / 2);
  BigInt den = factorial((ta + tb + tc) / 2 + 1);
  return BigRational(num, den);
}

bool triangle_ok(int ta, int tb, int tc) {
  if ((ta + tb + tc) % 2 != 0) return false;  // non-integer perimeter
  return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

}  // namespace

SqrtRational wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt m1, HalfInt m2, HalfInt m3) {
  const int tj[3] = {j1.twice(), j2.twice(), j3.twice()};
  const int tm[3] = {m1.twice(), m2.twice(), m3.twice()};
  for (int i = 0; i < 3; ++i) {
    if (tj[i] < 0) throw bad_quantum_numbers("wigner3j: negative j");
    if (std::abs(tm[i]) > tj[i]) throw bad_quantum_numbers("wigner3j: |m| > j");
    if ((tj[i] + tm[i]) % 2 != 0) {
      throw bad_quantum_numbers("wigner3j: j and m have different parity");
    }
  }

  if (tm[0] + tm[1] + tm[2] != 0) return SqrtRational::zero();
  if (!triangle_ok(tj[0], tj[1], tj[2])) return SqrtRational::zero();

  // Racah sum: k bounds in twice-units, all divisions below are exact.
  const int t_a = tj[0] + tj[1] - tj[2];  // 2(j1+j2-j3)
  const int t_b = tj[0] - tm[0];          // 2(j1-m1)
  const int t_c = tj[1] + tm[1];          // 2(j2+m2)
  const int t_d = tj[2] - tj[1] + tm[0];  // 2(j3-j2+m1)
  const int t_e = tj[2] - tj[0] - tm[1];  // 2(j3-j1-m2)

  const int k_min = std::max({0, -t_d / 2, -t_e / 2});
  const int k_max = std::min({t_a / 2, t_b / 2, t_c / 2});

  BigRational sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    BigInt den = factorial(k) * factorial(t_a / 2 - k) * factorial(t_b / 2 - k) *
                 factorial(t_c / 2 - k) * factorial(t_d / 2 + k) *
                 factorial(t_e / 2 + k);
    BigRational term(1, den);
    sum += (k % 2 == 0) ? term : -term;
  }
  if (sum.sign() == 0) return SqrtRational::zero();

  // Phase (-1)^(j1-j2-m3); the exponent is an integer here.
  const int phase_twice = tj[0] - tj[1] - tm[2];
  const int phase = ((phase_twice / 2) % 2 == 0) ? 1 : -1;

  BigRational under_sqrt = triangle_coeff(tj[0], tj[1], tj[2]);
  for (int i = 0; i < 3; ++i) {
    under_sqrt *= factorial((tj[i] + tm[i]) / 2);
    under_sqrt *= factorial((tj[i] - tm[i]) / 2);
  }

  BigRational signed_sq = sum * sum * under_sqrt;
  if (phase * sum.sign() < 0) signed_sq = -signed_sq;
  return SqrtRational::from_signed_square(signed_sq);
}

SqrtRational wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt j4, HalfInt j5, HalfInt j6) {
  const int t1 = j1.twice(), t2 = j2.twice(), t3 = j3.twice();
  const int t4 = j4.twice(), t5 = j5.twice(), t6 = j6.twice();
  for (int t : {t1, t2, t3, t4, t5, t6}) {
    if (t < 0) throw bad_quantum_numbers("wigner6j: negative j");
  }
  // The four triads.
  const int triads[4][3] = {
      {t1, t2, t3}, {t1, t5, t6}, {t4, t2, t6}, {t4, t5, t3}};
  for (const auto& tr : triads) {
    if ((tr[0] + tr[1] + tr[2]) % 2 != 0) {
      throw bad_quantum_numbers("wigner6j: triad with half-integer perimeter");
    }
  }
  for (const auto& tr : triads) {
    if (!triangle_ok(tr[0], tr[1], tr[2])) return SqrtRational::zero();
  }

  // Triad perimeters and the three "box" sums, in units of j (integers).
  const int s1 = (t1 + t2 + t3) / 2;
  const int s2 = (t1 + t5 + t6) / 2;
  const int s3 = (t4 + t2 + t6) / 2;
  const int s4 = (t4 + t5 + t3) / 2;
  const int b1 = (t1 + t2 + t4 + t5) / 2;
  const int b2 = (t2 + t3 + t5 + t6) / 2;
  const int b3 = (t3 + t1 + t6 + t4) / 2;

  const int k_min = std::max({s1, s2, s3, s4});
  const int k_max = std::min({b1, b2, b3});

  BigRational sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    BigInt den = factorial(k - s1) * factorial(k - s2) * factorial(k - s3) *
                 factorial(k - s4) * factorial(b1 - k) * factorial(b2 - k) *
                 factorial(b3 - k);
    BigRational term(factorial(k + 1), den);
    sum += (k % 2 == 0) ? term : -term;
  }
  if (sum.sign() == 0) return SqrtRational::zero();

  BigRational under_sqrt = triangle_coeff(t1, t2, t3) *
                           triangle_coeff(t1, t5, t6) *
                           triangle_coeff(t4, t2, t6) *
                           triangle_coeff(t4, t5, t3);

  BigRational signed_sq = sum * sum * under_sqrt;
  if (sum.sign() < 0) signed_sq = -signed_sq;
  return SqrtRational::from_signed_square(signed_sq);
}

}  // namespace qnd::wig
