#ifndef PERJET_RATIONAL_FUNCTION_HPP
#define PERJET_RATIONAL_FUNCTION_HPP

#include <string>
#include <vector>

#include "polynomial.hpp"

namespace perjet {

/// Quotient of multivariate polynomials, stored in canonical form:
/// gcd(num, den) = 1 and the denominator is monic in graded-lex order.
/// Equality is therefore syntactic.
template <class K>
class RationalFunction {
public:
  explicit RationalFunction(unsigned nvars = 0)
      : num_(Polynomial<K>(nvars)), den_(Polynomial<K>::constant(nvars, ScalarOps<K>::one())) {}

  RationalFunction(Polynomial<K> num, Polynomial<K> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero_poly()) fail(Errc::DivisionByZero, "zero denominator");
    reduce();
  }

  static RationalFunction from_polynomial(const Polynomial<K>& p) {
    return RationalFunction(p, Polynomial<K>::constant(p.nvars(), ScalarOps<K>::one()));
  }
  static RationalFunction constant(unsigned nvars, const K& c) {
    return from_polynomial(Polynomial<K>::constant(nvars, c));
  }
  static RationalFunction variable(unsigned nvars, unsigned which) {
    return from_polynomial(Polynomial<K>::variable(nvars, which));
  }

  const Polynomial<K>& numerator() const { return num_; }
  const Polynomial<K>& denominator() const { return den_; }
  unsigned nvars() const { return num_.nvars(); }
  bool is_zero_function() const { return num_.is_zero_poly(); }
  bool is_polynomial() const {
    return den_ == Polynomial<K>::constant(num_.nvars(), ScalarOps<K>::one());
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero_function()) fail(Errc::DivisionByZero, "division by zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction operator-() const { return RationalFunction(-num_, den_); }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  RationalFunction derivative(unsigned v) const {
    return RationalFunction(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
  }

  /// Iterated partial derivative by a multi-index.
  RationalFunction derivative_multi(const MultiIndex& q) const {
    RationalFunction r = *this;
    for (unsigned v = 0; v < q.size(); ++v)
      for (unsigned i = 0; i < q[v]; ++i) r = r.derivative(v);
    return r;
  }

  bool has_pole_at(const std::vector<K>& point) const { return is_zero(den_.evaluate(point)); }

  K evaluate(const std::vector<K>& point) const {
    K d = den_.evaluate(point);
    if (is_zero(d)) fail(Errc::PoleAtBasepoint, "denominator vanishes at evaluation point");
    return num_.evaluate(point) / d;
  }

  /// Exact Taylor expansion at a non-pole point, to total degree r.
  TruncatedSeries<K> taylor_at(const std::vector<K>& point, unsigned r) const {
    for (const auto& x : point) require_order_invertible(characteristic(x), r);
    if (has_pole_at(point)) fail(Errc::PoleAtBasepoint, "Taylor expansion at a pole");
    TruncatedSeries<K> n = num_.taylor_at(point, r);
    TruncatedSeries<K> d = den_.taylor_at(point, r);
    return n * d.invert();
  }

  /// Composition with a polynomial map (one polynomial per variable).
  RationalFunction substitute(const std::vector<Polynomial<K>>& args) const {
    Polynomial<K> n = num_.substitute(args), d = den_.substitute(args);
    if (d.is_zero_poly()) fail(Errc::DivisionByZero, "denominator collapses under substitution");
    return RationalFunction(n, d);
  }

  std::string str(const std::vector<std::string>& vars) const {
    if (is_polynomial()) return num_.str(vars);
    return "(" + num_.str(vars) + ")/(" + den_.str(vars) + ")";
  }

private:
  Polynomial<K> num_, den_;

  void reduce() {
    if (num_.is_zero_poly()) {
      den_ = Polynomial<K>::constant(num_.nvars(), ScalarOps<K>::one());
      return;
    }
    if (den_.total_degree() > 0) {
      Polynomial<K> g = gcd(num_, den_);
      if (g.total_degree() > 0) {
        num_ = exact_divide(num_, g);
        den_ = exact_divide(den_, g);
      }
    }
    auto [e, lc] = den_.leading_term();
    if (!(lc == ScalarOps<K>::one())) {
      K s = inverse(lc);
      num_ = s * num_;
      den_ = s * den_;
    }
  }
};

/// Entrywise reduction Q -> F_p of a polynomial. Every coefficient must be
/// p-integral.
inline Polynomial<Fp> reduce_mod_p(const Polynomial<Rat>& p, std::uint64_t prime) {
  Polynomial<Fp> out(p.nvars());
  for (const auto& [e, c] : p.terms()) out.set(e, Fp::from_rat(c, prime));
  return out;
}

inline RationalFunction<Fp> reduce_mod_p(const RationalFunction<Rat>& f, std::uint64_t prime) {
  Polynomial<Fp> n = reduce_mod_p(f.numerator(), prime);
  Polynomial<Fp> d = reduce_mod_p(f.denominator(), prime);
  if (d.is_zero_poly())
    fail(Errc::DenominatorVanishesModP, "denominator reduces to zero mod " + std::to_string(prime));
  return RationalFunction<Fp>(n, d);
}

} // namespace perjet

#endif
