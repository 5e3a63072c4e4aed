#pragma once
// Exact rational and integer scalar helpers on top of GMP. Every numeric
// computation in this library runs on these types; doubles appear only in
// human-readable rendering.

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace cinorm {

using Rat = mpq_class;
using Int = mpz_class;

// Parses "p", "-p" or "p/q" in base 10. Rejects malformed input and zero
// denominators; the result is canonicalized.
inline Rat parse_rational(const std::string& text) {
  Rat q;
  if (text.empty() || q.set_str(text, 10) != 0)
    throw ValidationError("invalid rational literal: '" + text + "'");
  if (q.get_den() == 0)
    throw ValidationError("zero denominator in rational: '" + text + "'");
  q.canonicalize();
  return q;
}

inline std::string rational_text(const Rat& r) { return r.get_str(); }

inline Int int_pow(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

// base^exp for integer exp; negative exponents require base != 0.
inline Rat rat_pow(const Rat& base, long exp) {
  if (exp == 0) return 1;
  if (base == 0 && exp < 0) throw ValidationError("zero base with negative exponent");
  const auto e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
  Rat r(int_pow(base.get_num(), e), int_pow(base.get_den(), e));
  r.canonicalize();
  if (exp < 0) r = 1 / r;
  return r;
}

// 2^e as an exact rational (e may be negative).
inline Rat pow2(long e) {
  if (e >= 0) return Rat(Int(1) << static_cast<unsigned long>(e));
  return Rat(1, Int(1) << static_cast<unsigned long>(-e));
}

// Floor of the r-th root of v >= 0.
inline Int root_floor(const Int& v, unsigned long r) {
  if (v < 0) throw ValidationError("root of a negative integer");
  Int out;
  mpz_root(out.get_mpz_t(), v.get_mpz_t(), r);
  return out;
}

inline Int sqrt_floor(const Int& v) { return root_floor(v, 2); }

// Smallest integer s with s*s >= v (v >= 0).
inline Int sqrt_ceil(const Int& v) {
  Int s = sqrt_floor(v);
  if (s * s < v) s += 1;
  return s;
}

inline Int div_ceil(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Smallest integer >= r.
inline Int rat_ceil(const Rat& r) { return div_ceil(r.get_num(), r.get_den()); }

// Largest integer <= r.
inline Rat rat_floor(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return Rat(q);
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// n choose r as an exact integer.
inline Int binomial(unsigned long n, unsigned long r) {
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), n, r);
  return out;
}

}  // namespace cinorm
