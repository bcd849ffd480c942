#ifndef PERJET_FIELD_HPP
#define PERJET_FIELD_HPP

#include <cstdint>
#include <string>

#include "errors.hpp"
#include "prime_field.hpp"
#include "rational.hpp"

namespace perjet {

enum class FieldKind { Rationals, PrimeField };

/// Runtime description of the coefficient field of a chart.
struct CoefficientField {
  FieldKind kind = FieldKind::Rationals;
  std::uint64_t p = 0; // characteristic; 0 for the rationals

  static CoefficientField rationals() { return {FieldKind::Rationals, 0}; }
  static CoefficientField prime(std::uint64_t p) {
    if (p < 2) fail(Errc::ParseError, "field characteristic must be a prime");
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) fail(Errc::ParseError, std::to_string(p) + " is not prime");
    return {FieldKind::PrimeField, p};
  }

  std::uint64_t characteristic() const { return kind == FieldKind::Rationals ? 0 : p; }
};

/// Orders up to r need r! invertible: char 0 or p > r.
inline void require_order_invertible(std::uint64_t characteristic, unsigned r) {
  if (characteristic != 0 && characteristic <= r)
    fail(Errc::CharTooSmall,
         "order " + std::to_string(r) + " needs r! invertible but char = " + std::to_string(characteristic));
}

inline void require_order_invertible(const CoefficientField& f, unsigned r) {
  require_order_invertible(f.characteristic(), r);
}

template <class K> struct ScalarOps;

template <> struct ScalarOps<Rat> {
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_int(long long n) { return Rat(static_cast<long>(n)); }
  static Rat from_int_in(long long n, const Rat&) { return from_int(n); }
  static Rat attach_like(const Rat& v, const Rat&) { return v; }
};

template <> struct ScalarOps<Int> {
  static Int zero() { return Int(0); }
  static Int one() { return Int(1); }
  static Int from_int(long long n) { return Int(static_cast<long>(n)); }
  static Int from_int_in(long long n, const Int&) { return from_int(n); }
  static Int attach_like(const Int& v, const Int&) { return v; }
};

template <> struct ScalarOps<Fp> {
  static Fp zero() { return Fp(0); }
  static Fp one() { return Fp(1); }
  static Fp from_int(long long n) { return Fp(n); }
  static Fp from_int_in(long long n, const Fp& like) {
    return like.attached() ? Fp(n, like.modulus()) : Fp(n);
  }
  static Fp attach_like(const Fp& v, const Fp& sample) {
    return sample.attached() && !v.attached() ? v.attach(sample.modulus()) : v;
  }
};

} // namespace perjet

#endif
