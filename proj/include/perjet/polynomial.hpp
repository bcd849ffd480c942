#ifndef PERJET_POLYNOMIAL_HPP
#define PERJET_POLYNOMIAL_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "field.hpp"
#include "multi_index.hpp"
#include "series.hpp"

namespace perjet {

/// Sparse multivariate polynomial over a field, with a fixed variable count.
/// Zero coefficients are never stored.
template <class K>
class Polynomial {
public:
  using Exp = std::vector<unsigned>;

  explicit Polynomial(unsigned nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(unsigned nvars, const K& c) {
    Polynomial p(nvars);
    if (!is_zero(c)) p.terms_[Exp(nvars, 0)] = c;
    return p;
  }
  static Polynomial variable(unsigned nvars, unsigned which) {
    if (which >= nvars) fail(Errc::DimensionMismatch, "variable index out of range");
    Polynomial p(nvars);
    Exp e(nvars, 0);
    e[which] = 1;
    p.terms_[e] = ScalarOps<K>::one();
    return p;
  }

  unsigned nvars() const { return nvars_; }
  bool is_zero_poly() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Exp, K>& terms() const { return terms_; }

  void set(const Exp& e, const K& c) {
    if (e.size() != nvars_) fail(Errc::DimensionMismatch, "exponent arity");
    if (is_zero(c))
      terms_.erase(e);
    else
      terms_[e] = c;
  }

  K coefficient(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ScalarOps<K>::zero() : it->second;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, degree(e));
    return d;
  }
  unsigned degree_in(unsigned v) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[v]);
    return d;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) {
      auto it = r.terms_.find(e);
      if (it == r.terms_.end())
        r.terms_[e] = c;
      else {
        it->second += c;
        if (is_zero(it->second)) r.terms_.erase(it);
      }
    }
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exp e(a.nvars_);
        for (unsigned v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
        auto it = r.terms_.find(e);
        if (it == r.terms_.end())
          r.terms_[e] = ca * cb;
        else {
          it->second += ca * cb;
          if (is_zero(it->second)) r.terms_.erase(it);
        }
      }
    return r;
  }
  friend Polynomial operator*(const K& c, const Polynomial& a) {
    Polynomial r(a.nvars_);
    if (is_zero(c)) return r;
    for (const auto& [e, x] : a.terms_) r.terms_[e] = c * x;
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
      if (ia->first != ib->first || !(ia->second == ib->second)) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial derivative(unsigned v) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[v] == 0) continue;
      Exp de = e;
      de[v] -= 1;
      K nc = ScalarOps<K>::from_int_in(static_cast<long long>(e[v]), c) * c;
      if (!is_zero(nc)) r.terms_[de] = nc;
    }
    return r;
  }

  K evaluate(const std::vector<K>& point) const {
    if (point.size() != nvars_) fail(Errc::DimensionMismatch, "evaluation point arity");
    K acc = ScalarOps<K>::zero();
    for (const auto& [e, c] : terms_) {
      K t = c;
      for (unsigned v = 0; v < nvars_; ++v)
        for (unsigned i = 0; i < e[v]; ++i) t = t * point[v];
      acc += t;
    }
    return acc;
  }

  /// Substitute polynomials (possibly in a different variable set) for the variables.
  Polynomial substitute(const std::vector<Polynomial>& args) const {
    if (args.size() != nvars_) fail(Errc::DimensionMismatch, "substitution arity");
    unsigned out_vars = args.empty() ? 0 : args[0].nvars();
    Polynomial acc(out_vars);
    for (const auto& [e, c] : terms_) {
      Polynomial t = Polynomial::constant(out_vars, c);
      for (unsigned v = 0; v < nvars_; ++v)
        for (unsigned i = 0; i < e[v]; ++i) t *= args[v];
      acc += t;
    }
    return acc;
  }

  /// Exact Taylor expansion around `point`, truncated to total degree r:
  /// expand p(point + u) in the shifted variables u.
  TruncatedSeries<K> taylor_at(const std::vector<K>& point, unsigned r) const {
    if (point.size() != nvars_) fail(Errc::DimensionMismatch, "expansion point arity");
    TruncatedSeries<K> acc(nvars_, r);
    std::vector<TruncatedSeries<K>> shifted;
    shifted.reserve(nvars_);
    for (unsigned v = 0; v < nvars_; ++v)
      shifted.push_back(TruncatedSeries<K>::constant(nvars_, r, point[v]) + TruncatedSeries<K>::variable(nvars_, r, v));
    for (const auto& [e, c] : terms_) {
      TruncatedSeries<K> t = TruncatedSeries<K>::constant(nvars_, r, c);
      for (unsigned v = 0; v < nvars_; ++v)
        for (unsigned i = 0; i < e[v]; ++i) t *= shifted[v];
      acc += t;
    }
    return acc;
  }

  /// Leading term in graded-lex order (largest total degree, ties by lex on exponents).
  std::pair<Exp, K> leading_term() const {
    if (terms_.empty()) fail(Errc::DivisionByZero, "leading term of zero");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
      if (grlex_less(best->first, it->first)) best = it;
    return {best->first, best->second};
  }

  static bool grlex_less(const Exp& a, const Exp& b) {
    unsigned da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a < b; // lex on exponent vectors
  }

  /// Exact division; fails if the division has a remainder.
  friend Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero_poly()) fail(Errc::DivisionByZero, "division by zero polynomial");
    Polynomial rem = a, quot(a.nvars_);
    auto [lbe, lbc] = b.leading_term();
    while (!rem.is_zero_poly()) {
      auto [lre, lrc] = rem.leading_term();
      Exp q(a.nvars_);
      for (unsigned v = 0; v < a.nvars_; ++v) {
        if (lre[v] < lbe[v]) fail(Errc::DivisionByZero, "inexact polynomial division");
        q[v] = lre[v] - lbe[v];
      }
      Polynomial m(a.nvars_);
      m.terms_[q] = lrc / lbc;
      quot += m;
      rem -= m * b;
    }
    return quot;
  }

  std::string str(const std::vector<std::string>& vars) const {
    if (terms_.empty()) return "0";
    // print in descending graded-lex order
    std::vector<const std::pair<const Exp, K>*> ts;
    for (const auto& t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [](auto* x, auto* y) { return grlex_less(y->first, x->first); });
    std::string s;
    for (auto* t : ts) {
      if (!s.empty()) s += " + ";
      std::string mono;
      for (unsigned v = 0; v < nvars_; ++v) {
        if (t->first[v] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += vars[v];
        if (t->first[v] > 1) mono += "^" + std::to_string(t->first[v]);
      }
      std::string c = perjet::to_string(t->second);
      if (mono.empty())
        s += c;
      else if (c == "1")
        s += mono;
      else if (c == "-1")
        s += "-" + mono;
      else
        s += c + "*" + mono;
    }
    return s;
  }

private:
  unsigned nvars_;
  std::map<Exp, K> terms_;

  void check(const Polynomial& o) const {
    if (nvars_ != o.nvars_) fail(Errc::DimensionMismatch, "mixed variable counts");
  }
};

namespace detail {

/// View a polynomial as univariate in variable v with polynomial coefficients.
template <class K>
std::vector<Polynomial<K>> coeffs_in(const Polynomial<K>& p, unsigned v) {
  std::vector<Polynomial<K>> out(p.degree_in(v) + 1, Polynomial<K>(p.nvars()));
  for (const auto& [e, c] : p.terms()) {
    auto e2 = e;
    unsigned k = e2[v];
    e2[v] = 0;
    Polynomial<K> m(p.nvars());
    m.set(e2, c);
    out[k] += m;
  }
  return out;
}

template <class K>
Polynomial<K> from_coeffs_in(const std::vector<Polynomial<K>>& cs, unsigned v, unsigned nvars) {
  Polynomial<K> out(nvars);
  Polynomial<K> x = Polynomial<K>::variable(nvars, v);
  Polynomial<K> xe = Polynomial<K>::constant(nvars, ScalarOps<K>::one());
  for (unsigned k = 0; k < cs.size(); ++k) {
    out += cs[k] * xe;
    xe *= x;
  }
  return out;
}

template <class K> Polynomial<K> gcd_poly(const Polynomial<K>& a, const Polynomial<K>& b);

/// gcd of the univariate-in-v coefficient list (the content).
template <class K>
Polynomial<K> content_in(const Polynomial<K>& p, unsigned v) {
  auto cs = coeffs_in(p, v);
  Polynomial<K> g(p.nvars());
  for (const auto& c : cs)
    if (!c.is_zero_poly()) g = g.is_zero_poly() ? c : gcd_poly(g, c);
  return g;
}

/// Pseudo-remainder of a by b in the variable v.
template <class K>
Polynomial<K> pseudo_rem(const Polynomial<K>& a, const Polynomial<K>& b, unsigned v) {
  unsigned db = b.degree_in(v);
  auto bc = coeffs_in(b, v);
  Polynomial<K> lb = bc[db];
  Polynomial<K> rem = a;
  Polynomial<K> xv = Polynomial<K>::variable(a.nvars(), v);
  while (!rem.is_zero_poly() && rem.degree_in(v) >= db) {
    unsigned dr = rem.degree_in(v);
    auto rc = coeffs_in(rem, v);
    Polynomial<K> xpow = Polynomial<K>::constant(a.nvars(), ScalarOps<K>::one());
    for (unsigned i = 0; i < dr - db; ++i) xpow *= xv;
    rem = lb * rem - rc[dr] * xpow * b;
  }
  return rem;
}

/// Normalize so the graded-lex leading coefficient is 1.
template <class K>
Polynomial<K> monic(const Polynomial<K>& p) {
  if (p.is_zero_poly()) return p;
  auto [e, c] = p.leading_term();
  return inverse(c) * p;
}

template <class K>
Polynomial<K> gcd_poly(const Polynomial<K>& a, const Polynomial<K>& b) {
  if (a.is_zero_poly()) return monic(b);
  if (b.is_zero_poly()) return monic(a);
  if (a.total_degree() == 0 || b.total_degree() == 0)
    return Polynomial<K>::constant(a.nvars(), ScalarOps<K>::one());
  if (a == b) return monic(a);
  // pick the main variable: the highest-index variable occurring in either
  int v = -1;
  for (unsigned i = a.nvars(); i-- > 0;)
    if (a.degree_in(i) > 0 || b.degree_in(i) > 0) {
      v = static_cast<int>(i);
      break;
    }
  if (v < 0) return Polynomial<K>::constant(a.nvars(), ScalarOps<K>::one()); // both constants
  unsigned mv = static_cast<unsigned>(v);

  Polynomial<K> ca = content_in(a, mv), cb = content_in(b, mv);
  Polynomial<K> pa = exact_divide(a, ca), pb = exact_divide(b, cb);
  // primitive PRS on the primitive parts
  Polynomial<K> f = pa, g = pb;
  if (f.degree_in(mv) < g.degree_in(mv)) std::swap(f, g);
  while (!g.is_zero_poly()) {
    Polynomial<K> r = pseudo_rem(f, g, mv);
    if (!r.is_zero_poly()) r = exact_divide(r, content_in(r, mv));
    f = g;
    g = r;
  }
  Polynomial<K> cg = gcd_poly(ca, cb);
  return monic(cg * f);
}

} // namespace detail

template <class K>
Polynomial<K> gcd(const Polynomial<K>& a, const Polynomial<K>& b) {
  return detail::gcd_poly(a, b);
}

} // namespace perjet

#endif
