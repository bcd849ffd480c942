#ifndef PERJET_JET_HPP
#define PERJET_JET_HPP

#include <map>
#include <vector>

#include "matrix.hpp"
#include "rational_function.hpp"
#include "series.hpp"

namespace perjet {

/// Order-r jet of a map from the d-dimensional infinitesimal disk into a
/// k-coordinate chart: one truncated series per chart coordinate. The
/// basepoint is kept explicitly and always equals the constant terms.
template <class K>
class Jet {
public:
  Jet(unsigned d, unsigned r, std::vector<TruncatedSeries<K>> coords)
      : d_(d), r_(r), coords_(std::move(coords)) {
    for (const auto& s : coords_)
      if (s.dim() != d_ || s.order() != r_) fail(Errc::ShapeMismatch, "jet coordinate shape");
    for (const auto& s : coords_) basepoint_.push_back(s.constant_term());
  }

  static Jet constant(unsigned d, unsigned r, const std::vector<K>& point) {
    std::vector<TruncatedSeries<K>> cs;
    cs.reserve(point.size());
    for (const auto& x : point) cs.push_back(TruncatedSeries<K>::constant(d, r, x));
    return Jet(d, r, std::move(cs));
  }

  unsigned dim() const { return d_; }
  unsigned order() const { return r_; }
  unsigned chart_dim() const { return static_cast<unsigned>(coords_.size()); }
  const std::vector<TruncatedSeries<K>>& coords() const { return coords_; }
  const TruncatedSeries<K>& coord(unsigned i) const { return coords_[i]; }
  const std::vector<K>& basepoint() const { return basepoint_; }

  /// Offsets j - s: the same series with constant terms removed.
  std::vector<TruncatedSeries<K>> offsets() const {
    auto out = coords_;
    for (auto& s : out) s.set_coefficient(MultiIndex(d_, 0), ScalarOps<K>::zero());
    return out;
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.d_ == b.d_ && a.r_ == b.r_ && a.coords_ == b.coords_;
  }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

private:
  unsigned d_, r_;
  std::vector<TruncatedSeries<K>> coords_;
  std::vector<K> basepoint_;
};

struct JetClass {
  bool constant = false;
  bool nondegenerate = false;
};

/// Constant iff every non-constant coefficient vanishes. Non-degenerate iff
/// the d first-order coefficient vectors are linearly independent; order-0
/// jets count as non-degenerate by convention.
template <class K>
JetClass jet_classify(const Jet<K>& j) {
  JetClass out;
  out.constant = true;
  for (const auto& s : j.coords())
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!is_zero(s[i])) out.constant = false;
  if (j.order() == 0) {
    out.nondegenerate = true;
    return out;
  }
  Matrix<K> first(j.chart_dim(), j.dim(), ScalarOps<K>::zero());
  for (unsigned i = 0; i < j.chart_dim(); ++i)
    for (unsigned l = 0; l < j.dim(); ++l) {
      MultiIndex q(j.dim(), 0);
      q[l] = 1;
      first(i, l) = j.coord(i).coefficient(q);
    }
  out.nondegenerate = rank(first) == j.dim();
  return out;
}

/// g composed with j by Taylor-shifting g to j's basepoint and substituting
/// the offset series (the direct route).
template <class K>
Jet<K> jet_compose_map(const std::vector<RationalFunction<K>>& g, const Jet<K>& j) {
  unsigned r = j.order();
  if (!j.basepoint().empty()) require_order_invertible(characteristic(j.basepoint()[0]), r);
  auto offsets = j.offsets();
  std::vector<TruncatedSeries<K>> out;
  out.reserve(g.size());
  for (const auto& gi : g) {
    if (gi.nvars() != j.chart_dim()) fail(Errc::ShapeMismatch, "map arity vs jet chart");
    TruncatedSeries<K> shifted = gi.taylor_at(j.basepoint(), r); // PoleAtBasepoint when undefined
    out.push_back(series_substitute(shifted, offsets));
  }
  return Jet<K>(j.dim(), r, std::move(out));
}

namespace detail {

/// One term of a formal derivative expression: a coefficient times a partial
/// derivative of g (by `gexp`) evaluated at the basepoint, times derivatives
/// of the jet coordinates (each factor a pair (coordinate, multi-index)).
template <class K>
struct ChainTerm {
  MultiIndex gexp;
  std::vector<std::pair<unsigned, MultiIndex>> factors;
  K coeff;
};

template <class K>
std::map<std::pair<MultiIndex, std::vector<std::pair<unsigned, MultiIndex>>>, K> normalize_terms(
    const std::vector<ChainTerm<K>>& terms) {
  std::map<std::pair<MultiIndex, std::vector<std::pair<unsigned, MultiIndex>>>, K> merged;
  for (auto t : terms) {
    std::sort(t.factors.begin(), t.factors.end());
    merged[{t.gexp, t.factors}] += t.coeff;
  }
  return merged;
}

} // namespace detail

/// The chain-rule route: derivatives of g∘j at 0 are built by formally
/// differentiating the composite with the multivariate chain rule, then
/// instantiating the symbols with derivatives of g at the basepoint and
/// derivatives of the jet coordinates. Must agree with jet_compose_map.
template <class K>
Jet<K> jet_compose_chain_rule(const std::vector<RationalFunction<K>>& g, const Jet<K>& j) {
  using detail::ChainTerm;
  const unsigned d = j.dim(), r = j.order(), k = j.chart_dim();
  if (!j.basepoint().empty()) require_order_invertible(characteristic(j.basepoint()[0]), r);

  // Derivatives of the jet coordinates at 0: q! * coefficient.
  const K sample = j.basepoint().empty() ? ScalarOps<K>::zero() : j.basepoint()[0];
  auto coord_deriv = [&](unsigned i, const MultiIndex& q) -> K {
    if (degree(q) > r) return ScalarOps<K>::zero();
    K fact = ScalarOps<K>::from_int_in(static_cast<long long>(multinomial_denominator(q)), sample);
    return fact * j.coord(i).coefficient(q);
  };

  std::vector<TruncatedSeries<K>> out;
  for (const auto& gj : g) {
    if (gj.nvars() != k) fail(Errc::ShapeMismatch, "map arity vs jet chart");
    if (gj.has_pole_at(j.basepoint())) fail(Errc::PoleAtBasepoint, "composition at a pole");

    // Derivatives of g at the basepoint, memoized per multi-index.
    std::map<MultiIndex, K> gder;
    auto g_at = [&](const MultiIndex& q) -> K {
      auto it = gder.find(q);
      if (it != gder.end()) return it->second;
      K v = gj.derivative_multi(q).evaluate(j.basepoint());
      gder[q] = v;
      return v;
    };

    TruncatedSeries<K> series(d, r);
    series.set_coefficient(MultiIndex(d, 0), gj.evaluate(j.basepoint()));

    // The value expression for the current derivative order, as formal terms.
    std::vector<ChainTerm<K>> expr = {{MultiIndex(k, 0), {}, ScalarOps<K>::one()}};
    // Walk derivative orders: differentiate all terms by t_l and record any
    // multi-index whose canonical peel order matches.
    // We enumerate multi-indices q by peeling the smallest coordinate first;
    // expr is rebuilt per q along its canonical path.
    std::map<MultiIndex, std::vector<ChainTerm<K>>> exprs;
    exprs[MultiIndex(d, 0)] = expr;
    for (const auto& q : series.table().indices()) {
      if (degree(q) == 0) continue;
      // peel the first nonzero coordinate
      unsigned l = 0;
      while (q[l] == 0) ++l;
      MultiIndex prev = q;
      prev[l] -= 1;
      const auto& base = exprs.at(prev);
      std::vector<ChainTerm<K>> next;
      for (const auto& term : base) {
        // d/dt_l of (partial^gexp g)(j(t)) -> sum over chart slots
        for (unsigned i = 0; i < k; ++i) {
          ChainTerm<K> t = term;
          t.gexp[i] += 1;
          MultiIndex e(d, 0);
          e[l] = 1;
          t.factors.emplace_back(i, e);
          next.push_back(std::move(t));
        }
        // product rule across jet-coordinate factors
        for (std::size_t fi = 0; fi < term.factors.size(); ++fi) {
          ChainTerm<K> t = term;
          t.factors[fi].second[l] += 1;
          next.push_back(std::move(t));
        }
      }
      exprs[q] = next;

      // Evaluate: sum coeff * g-derivative * jet-coordinate derivatives.
      K val = ScalarOps<K>::zero();
      for (const auto& [key, c] : detail::normalize_terms(next)) {
        if (is_zero(c)) continue;
        K t = c * g_at(key.first);
        for (const auto& [i, e] : key.second) t = t * coord_deriv(i, e);
        val += t;
      }
      K fact = ScalarOps<K>::from_int_in(static_cast<long long>(multinomial_denominator(q)), sample);
      series.set_coefficient(q, val / fact);
    }
    out.push_back(std::move(series));
  }
  return Jet<K>(d, r, std::move(out));
}

/// Precompose j with an algebra map D^d_r -> D^{d'}_{r'} given by d' series
/// with zero constant term (the images of the source coordinates).
template <class K>
Jet<K> jet_reparametrize(const std::vector<TruncatedSeries<K>>& v, const Jet<K>& j) {
  if (v.empty()) fail(Errc::DimensionMismatch, "empty reparametrization");
  if (v.size() != j.dim()) fail(Errc::ShapeMismatch, "reparametrization arity vs jet dimension");
  unsigned r = v[0].order();
  if (j.order() > r) fail(Errc::OrderMismatch, "reparametrization requires r' <= r");
  for (const auto& s : v) {
    if (!is_zero(s.constant_term())) fail(Errc::NonzeroConstantTerm, "reparametrization must fix the origin");
    if (s.order() != r || s.dim() != v[0].dim()) fail(Errc::ShapeMismatch, "reparametrization shapes");
  }
  std::vector<TruncatedSeries<K>> out;
  out.reserve(j.chart_dim());
  // substitute into the zero-padded representative; v being an algebra map
  // D^d_r -> D^{d'}_{r'} makes the choice of lift immaterial
  for (const auto& c : j.coords()) out.push_back(series_substitute(c.extend(r), v));
  return Jet<K>(v[0].dim(), r, std::move(out));
}

} // namespace perjet

#endif
