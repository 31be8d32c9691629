#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <optional>
#include <string>

namespace dimq {

// All group exponents, matrix entries and ring coefficients are exact
// integers. Fixture exponents like 3^12 fit in machine words, but binomial
// coefficients and HNF intermediates do not.
using Int = mpz_class;

inline Int pow_int(const Int &base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int pow3(unsigned long e) { return pow_int(3, e); }

// binomial(n, k) for arbitrary integer n (negative n uses the usual
// extension bin(-n,k) = (-1)^k bin(n+k-1,k), which GMP implements).
inline Int binom(const Int &n, unsigned long k) {
  Int r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

// floor division (GMP fdiv), used for normal-form exponent reduction.
inline Int fdiv_q(const Int &a, const Int &b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// g = s*a + t*b with g >= 0.
inline void ext_gcd(const Int &a, const Int &b, Int &g, Int &s, Int &t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
}

inline Int gcd_int(const Int &a, const Int &b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline bool fits_slong(const Int &v) { return v.fits_slong_p(); }

// If v = +-3^k with k >= 2, return k (used by the fixture serializer).
inline std::optional<unsigned long> pow3_log(const Int &v) {
  Int a = abs(v);
  if (a < 9)
    return std::nullopt;
  unsigned long k = 0;
  while (mpz_divisible_ui_p(a.get_mpz_t(), 3)) {
    a /= 3;
    ++k;
  }
  if (a != 1)
    return std::nullopt;
  return k;
}

inline std::string to_string(const Int &v) { return v.get_str(); }

} // namespace dimq
