#ifndef PERJET_RATIONAL_HPP
#define PERJET_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace perjet {

// Exact rationals are GMP rationals; no floating point is used anywhere.
using Rat = mpq_class;
using Int = mpz_class;

inline bool is_zero(const Rat& a) { return sgn(a) == 0; }

inline unsigned long characteristic(const Rat&) { return 0; }

inline std::string to_string(const Rat& a) { return a.get_str(); }

inline Rat rat_from_string(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) fail(Errc::ParseError, "bad rational literal '" + s + "'");
  r.canonicalize();
  return r;
}

inline Rat inverse(const Rat& a) {
  if (is_zero(a)) fail(Errc::DivisionByZero, "inverse of zero rational");
  return Rat(1) / a;
}

/// p-adic valuation of a nonzero integer.
inline unsigned long padic_valuation(Int n, const Int& p) {
  unsigned long v = 0;
  if (sgn(n) == 0) fail(Errc::DivisionByZero, "valuation of zero");
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  return v;
}

} // namespace perjet

#endif
