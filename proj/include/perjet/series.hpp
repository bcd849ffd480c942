#ifndef PERJET_SERIES_HPP
#define PERJET_SERIES_HPP

#include <memory>
#include <string>
#include <vector>

#include "field.hpp"
#include "multi_index.hpp"

namespace perjet {

/// Element of the Weil algebra A^d_r = K[t_1..t_d]/(t_1..t_d)^{r+1}.
/// Dense storage keyed by the graded-lex enumeration of multi-indices.
template <class K>
class TruncatedSeries {
public:
  TruncatedSeries() : table_(IndexTable::get(1, 0)), coeff_(1, ScalarOps<K>::zero()) {}

  TruncatedSeries(unsigned d, unsigned r)
      : table_(IndexTable::get(d, r)), coeff_(table_->size(), ScalarOps<K>::zero()) {}

  static TruncatedSeries constant(unsigned d, unsigned r, const K& c) {
    TruncatedSeries s(d, r);
    s.coeff_[0] = c;
    return s;
  }

  static TruncatedSeries variable(unsigned d, unsigned r, unsigned which) {
    if (which >= d) fail(Errc::DimensionMismatch, "variable index out of range");
    TruncatedSeries s(d, r);
    if (r >= 1) {
      MultiIndex q(d, 0);
      q[which] = 1;
      s.coeff_[s.table_->position(q)] = ScalarOps<K>::one();
    }
    return s;
  }

  unsigned dim() const { return table_->dim(); }
  unsigned order() const { return table_->order(); }
  std::size_t size() const { return coeff_.size(); }
  const IndexTable& table() const { return *table_; }

  const K& operator[](std::size_t i) const { return coeff_[i]; }
  K& operator[](std::size_t i) { return coeff_[i]; }

  const K& coefficient(const MultiIndex& q) const { return coeff_[table_->position(q)]; }
  void set_coefficient(const MultiIndex& q, const K& c) { coeff_[table_->position(q)] = c; }

  const K& constant_term() const { return coeff_[0]; }

  bool is_zero_series() const {
    for (const auto& c : coeff_)
      if (!is_zero(c)) return false;
    return true;
  }

  bool same_shape(const TruncatedSeries& o) const { return dim() == o.dim() && order() == o.order(); }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_shape(b);
    TruncatedSeries r = a;
    for (std::size_t i = 0; i < r.coeff_.size(); ++i) r.coeff_[i] += b.coeff_[i];
    return r;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_shape(b);
    TruncatedSeries r = a;
    for (std::size_t i = 0; i < r.coeff_.size(); ++i) r.coeff_[i] -= b.coeff_[i];
    return r;
  }
  TruncatedSeries operator-() const {
    TruncatedSeries r = *this;
    for (auto& c : r.coeff_) c = -c;
    return r;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_shape(b);
    const unsigned d = a.dim(), r = a.order();
    TruncatedSeries out(d, r);
    const auto& idx = a.table_->indices();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (is_zero(a.coeff_[i])) continue;
      unsigned ga = degree(idx[i]);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (degree(idx[j]) + ga > r) continue;
        if (is_zero(b.coeff_[j])) continue;
        MultiIndex q(d);
        for (unsigned v = 0; v < d; ++v) q[v] = idx[i][v] + idx[j][v];
        out.coeff_[out.table_->position(q)] += a.coeff_[i] * b.coeff_[j];
      }
    }
    return out;
  }

  friend TruncatedSeries operator*(const K& c, const TruncatedSeries& a) {
    TruncatedSeries r = a;
    for (auto& x : r.coeff_) x = c * x;
    return r;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = *this + o; }
  TruncatedSeries& operator-=(const TruncatedSeries& o) { return *this = *this - o; }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.coeff_.size(); ++i)
      if (!(a.coeff_[i] == b.coeff_[i])) return false;
    return true;
  }
  friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

  /// Multiplicative inverse; the constant term must be a unit.
  TruncatedSeries invert() const {
    if (is_zero(constant_term())) fail(Errc::NotAUnit, "series with zero constant term");
    const unsigned d = dim(), r = order();
    K c0inv = inverse(constant_term());
    // a = c0 (1 - n) with n nilpotent; 1/a = (1 + n + ... + n^r) / c0.
    TruncatedSeries n(d, r);
    for (std::size_t i = 1; i < coeff_.size(); ++i) n.coeff_[i] = -(coeff_[i] * c0inv);
    TruncatedSeries acc = constant(d, r, ScalarOps<K>::one());
    TruncatedSeries pw = constant(d, r, ScalarOps<K>::one());
    for (unsigned k = 1; k <= r; ++k) {
      pw = pw * n;
      acc += pw;
    }
    return c0inv * acc;
  }

  /// Image under the ring morphism A^d_r -> A^d_{r'} for r' <= r.
  TruncatedSeries truncate(unsigned rp) const {
    if (rp > order()) fail(Errc::OrderMismatch, "cannot truncate upward");
    TruncatedSeries out(dim(), rp);
    for (std::size_t i = 0; i < out.coeff_.size(); ++i) out.coeff_[i] = coefficient(out.table_->at(i));
    return out;
  }

  /// The canonical representative in A^d_{r'} for r' >= r: higher
  /// coefficients are zero.
  TruncatedSeries extend(unsigned rp) const {
    if (rp < order()) fail(Errc::OrderMismatch, "cannot extend downward");
    TruncatedSeries out(dim(), rp);
    for (std::size_t i = 0; i < coeff_.size(); ++i) out.set_coefficient(table_->at(i), coeff_[i]);
    return out;
  }

  /// Formal partial derivative with respect to t_which, reduced to order r-1.
  TruncatedSeries derivative(unsigned which) const {
    if (which >= dim()) fail(Errc::DimensionMismatch, "derivative variable out of range");
    if (order() == 0) return TruncatedSeries(dim(), 0);
    unsigned r = order() - 1;
    TruncatedSeries out(dim(), r);
    for (std::size_t i = 0; i < out.size(); ++i) {
      MultiIndex q = out.table_->at(i);
      q[which] += 1;
      out.coeff_[i] = ScalarOps<K>::from_int(static_cast<long long>(q[which])) * coefficient(q);
    }
    return out;
  }

  std::string str(const std::vector<std::string>& vars) const {
    std::string s;
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      if (is_zero(coeff_[i])) continue;
      if (!s.empty()) s += " + ";
      s += "(" + perjet::to_string(coeff_[i]) + ")";
      const MultiIndex& q = table_->at(i);
      for (unsigned v = 0; v < q.size(); ++v) {
        if (q[v] == 0) continue;
        s += "*" + vars[v];
        if (q[v] > 1) s += "^" + std::to_string(q[v]);
      }
    }
    return s.empty() ? "0" : s;
  }

private:
  std::shared_ptr<const IndexTable> table_;
  std::vector<K> coeff_;

  void check_shape(const TruncatedSeries& o) const {
    if (!same_shape(o)) fail(Errc::ShapeMismatch, "series shapes differ");
  }
};

/// Formal composition outer(inner_1, ..., inner_k) truncated to the inner
/// shape. The inner series must have zero constant term; the outer order must
/// be at least the inner order.
template <class K>
TruncatedSeries<K> series_substitute(const TruncatedSeries<K>& outer,
                                     const std::vector<TruncatedSeries<K>>& inner) {
  if (inner.empty()) fail(Errc::DimensionMismatch, "substitution needs at least one inner series");
  if (outer.dim() != inner.size()) fail(Errc::ShapeMismatch, "outer arity != number of inner series");
  const unsigned d = inner[0].dim(), r = inner[0].order();
  for (const auto& s : inner) {
    if (s.dim() != d || s.order() != r) fail(Errc::ShapeMismatch, "inner series shapes differ");
    if (!is_zero(s.constant_term())) fail(Errc::NonzeroConstantTerm, "inner series must vanish at the origin");
  }
  if (outer.order() < r) fail(Errc::OrderMismatch, "outer order below target order");

  TruncatedSeries<K> acc(d, r);
  // Powers of the inner tuple, built degree by degree over the outer index set.
  // Each outer monomial contributes coeff * prod inner_v^{e_v}.
  const auto& idx = outer.table().indices();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (is_zero(outer[i])) continue;
    const MultiIndex& q = idx[i];
    if (degree(q) > r) continue; // inner series are nilpotent of index r+1
    TruncatedSeries<K> term = TruncatedSeries<K>::constant(d, r, outer[i]);
    for (unsigned v = 0; v < q.size(); ++v)
      for (unsigned e = 0; e < q[v]; ++e) term = term * inner[v];
    acc += term;
  }
  return acc;
}

enum class SeriesOp { Add, Mul, InvertFirst };

template <class K>
TruncatedSeries<K> series_arithmetic(const TruncatedSeries<K>& a, const TruncatedSeries<K>& b, SeriesOp op) {
  for (std::size_t i = 0; i < a.size(); ++i) require_order_invertible(characteristic(a[i]), a.order());
  for (std::size_t i = 0; i < b.size(); ++i) require_order_invertible(characteristic(b[i]), b.order());
  switch (op) {
    case SeriesOp::Add: return a + b;
    case SeriesOp::Mul: return a * b;
    case SeriesOp::InvertFirst: return a.invert();
  }
  fail(Errc::ShapeMismatch, "unknown series op");
}

} // namespace perjet

#endif
