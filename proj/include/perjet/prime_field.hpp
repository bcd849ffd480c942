#ifndef PERJET_PRIME_FIELD_HPP
#define PERJET_PRIME_FIELD_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "errors.hpp"
#include "rational.hpp"

namespace perjet {

/// Element of F_p with runtime modulus. An element constructed from a plain
/// integer starts out "unattached" (p = 0) and adopts a modulus the first time
/// it meets an attached element; this lets generic ring code write K(0), K(1)
/// without threading a field context through every call.
class Fp {
public:
  Fp() : v_(0), p_(0) {}
  Fp(long long n) : v_(n), p_(0) {}
  Fp(long long n, std::uint64_t p) : v_(0), p_(p) { v_ = static_cast<long long>(reduce(n, p)); }

  static Fp from_rat(const Rat& a, std::uint64_t p) {
    Int num = a.get_num(), den = a.get_den();
    Int ip(static_cast<unsigned long>(p));
    if (mpz_divisible_p(den.get_mpz_t(), ip.get_mpz_t()))
      fail(Errc::NonIntegralCoefficient, "denominator of " + a.get_str() + " vanishes mod " + std::to_string(p));
    Int nr = num % ip, dr = den % ip;
    Fp n(nr.get_si(), p), d(dr.get_si(), p);
    return n / d;
  }

  std::uint64_t modulus() const { return p_; }
  bool attached() const { return p_ != 0; }

  /// Reduced value in [0, p); for unattached elements the raw integer.
  std::uint64_t value() const { return static_cast<std::uint64_t>(v_); }
  long long raw() const { return v_; }

  Fp attach(std::uint64_t p) const { return attached() ? *this : Fp(v_, p); }

  friend Fp operator+(const Fp& a, const Fp& b) {
    std::uint64_t p = common_mod(a, b);
    if (p == 0) return Fp(a.v_ + b.v_);
    std::uint64_t s = a.attach(p).value() + b.attach(p).value();
    if (s >= p) s -= p;
    return Fp(static_cast<long long>(s), p);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    std::uint64_t p = common_mod(a, b);
    if (p == 0) return Fp(a.v_ - b.v_);
    std::uint64_t xv = a.attach(p).value(), yv = b.attach(p).value();
    return Fp(static_cast<long long>(xv >= yv ? xv - yv : xv + p - yv), p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    std::uint64_t p = common_mod(a, b);
    if (p == 0) return Fp(a.v_ * b.v_);
    return Fp(static_cast<long long>(mulmod(a.attach(p).value(), b.attach(p).value(), p)), p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * inverse_of(b, a.p_); }
  Fp operator-() const { return Fp(0) - *this; }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  friend bool operator==(const Fp& a, const Fp& b) {
    std::uint64_t p = common_mod(a, b);
    if (p == 0) return a.v_ == b.v_;
    return a.attach(p).value() == b.attach(p).value();
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

private:
  // v_ is the reduced value when attached, otherwise an arbitrary integer.
  long long v_;
  std::uint64_t p_;

  static std::uint64_t common_mod(const Fp& a, const Fp& b) {
    if (a.p_ && b.p_ && a.p_ != b.p_) fail(Errc::ShapeMismatch, "mixed F_p moduli");
    return a.p_ ? a.p_ : b.p_;
  }
  static std::uint64_t reduce(long long n, std::uint64_t p) {
    long long m = n % static_cast<long long>(p);
    if (m < 0) m += static_cast<long long>(p);
    return static_cast<std::uint64_t>(m);
  }
  static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  }
  static Fp inverse_of(const Fp& b, std::uint64_t hint) {
    std::uint64_t p = b.p_ ? b.p_ : hint;
    if (p == 0) {
      if (b.v_ == 1) return Fp(1);
      if (b.v_ == -1) return Fp(-1);
      fail(Errc::DivisionByZero, "division of unattached integers");
    }
    Fp bb = b.attach(p);
    if (bb.value() == 0) fail(Errc::DivisionByZero, "inverse of zero in F_p");
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(p), newr = static_cast<long long>(bb.value());
    while (newr != 0) {
      long long q = r / newr;
      t -= q * newt;
      std::swap(t, newt);
      r -= q * newr;
      std::swap(r, newr);
    }
    return Fp(t, p);
  }
};

inline bool is_zero(const Fp& a) { return a == Fp(0); }
inline unsigned long characteristic(const Fp& a) { return a.modulus(); }
inline std::string to_string(const Fp& a) {
  return a.attached() ? std::to_string(a.value()) : std::to_string(a.raw());
}
inline Fp inverse(const Fp& a) { return Fp(1) / a; }

} // namespace perjet

#endif
