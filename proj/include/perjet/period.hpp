#ifndef PERJET_PERIOD_HPP
#define PERJET_PERIOD_HPP

#include <functional>
#include <vector>

#include "connection.hpp"
#include "flag_jet.hpp"
#include "jet.hpp"
#include "lie.hpp"

namespace perjet {

/// Identification of the fibre at s with K^m by a flat basis: the value f0 of
/// the flat-frame solution at s.
template <class K>
struct FrameAssignment {
  std::vector<K> basepoint;
  Matrix<K> frame; // f0, invertible
};

/// The jet-level period map on explicit frames: solve the flat frame at
/// (s, f0, r), compose the solution with the jet, and invert over A^d_r.
/// The result (f ∘ j)^{-1} represents the flag jet through the q map with the
/// chart's jump indices.
template <class K>
FlagJet<K> eval_eta(const ConnectionChart<K>& chart, const Jet<K>& j, const FrameAssignment<K>& frame,
                    unsigned r) {
  if (j.chart_dim() != chart.n()) fail(Errc::ShapeMismatch, "jet lives in a different chart");
  if (j.order() != r) fail(Errc::OrderMismatch, "jet order vs requested order");
  if (j.basepoint() != frame.basepoint) fail(Errc::BasepointMismatch, "jet and frame basepoints differ");

  auto limp = solve_limp(chart, frame.basepoint, frame.frame, r);
  auto offsets = j.offsets();
  Matrix<TruncatedSeries<K>> fj(chart.m(), chart.m(), TruncatedSeries<K>(j.dim(), r));
  for (unsigned i = 0; i < chart.m(); ++i)
    for (unsigned k = 0; k < chart.m(); ++k) fj(i, k) = series_substitute(limp.solution(i, k), offsets);
  return FlagJet<K>(chart.flag_shape, series_matrix_inverse(fj));
}

/// Torsor equivariance: eta at the frame f0·g equals g^{-1} acting on eta at
/// f0. Both sides are computed independently and compared with
/// flag_jet_equal.
template <class K>
bool equivariance_check(const ConnectionChart<K>& chart, const Jet<K>& j, const FrameAssignment<K>& frame,
                        unsigned r, const Matrix<K>& g) {
  FrameAssignment<K> moved{frame.basepoint, frame.frame * g};
  auto lhs = eval_eta(chart, j, moved, r);
  auto rhs = eval_eta(chart, j, frame, r).acted_by(field_inverse(g));
  return flag_jet_equal(lhs, rhs);
}

/// Entrywise reduction of a rational chart mod p. Downstream use at order r
/// still requires p > r (checked at the use site).
inline ConnectionChart<Fp> reduce_chart_mod_p(const ConnectionChart<Rat>& chart, std::uint64_t p) {
  ConnectionChart<Fp> out;
  out.field = CoefficientField::prime(p);
  out.coordinates = chart.coordinates;
  out.flag_shape = chart.flag_shape;
  for (const auto& cl : chart.connection) {
    Matrix<RationalFunction<Fp>> red(cl.rows(), cl.cols(), RationalFunction<Fp>(chart.n()));
    for (std::size_t i = 0; i < cl.rows(); ++i)
      for (std::size_t j = 0; j < cl.cols(); ++j) red(i, j) = reduce_mod_p(cl(i, j), p);
    out.connection.push_back(std::move(red));
  }
  if (chart.polarization) {
    Matrix<Fp> q(chart.m(), chart.m(), Fp(0, p));
    for (unsigned i = 0; i < chart.m(); ++i)
      for (unsigned j = 0; j < chart.m(); ++j) q(i, j) = Fp::from_rat((*chart.polarization)(i, j), p);
    out.polarization = q;
  }
  for (const auto& [idx, t] : chart.flat_tensors) {
    Tensor<RationalFunction<Fp>> red(idx, chart.m(), RationalFunction<Fp>(chart.n()));
    for (std::size_t k = 0; k < t.data().size(); ++k) red.data()[k] = reduce_mod_p(t.data()[k], p);
    out.flat_tensors.emplace_back(idx, std::move(red));
  }
  return out;
}

inline Fp reduce_mod_p(const Rat& a, std::uint64_t p) { return Fp::from_rat(a, p); }

inline Matrix<Fp> reduce_mod_p(const Matrix<Rat>& m, std::uint64_t p) {
  Matrix<Fp> out(m.rows(), m.cols(), Fp(0, p));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Fp::from_rat(m(i, j), p);
  return out;
}

inline TruncatedSeries<Fp> reduce_mod_p(const TruncatedSeries<Rat>& s, std::uint64_t p) {
  TruncatedSeries<Fp> out(s.dim(), s.order());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = Fp::from_rat(s[i], p);
  return out;
}

inline Jet<Fp> reduce_mod_p(const Jet<Rat>& j, std::uint64_t p) {
  std::vector<TruncatedSeries<Fp>> cs;
  for (const auto& c : j.coords()) cs.push_back(reduce_mod_p(c, p));
  return Jet<Fp>(j.dim(), j.order(), std::move(cs));
}

inline FlagJet<Fp> reduce_mod_p(const FlagJet<Rat>& fj, std::uint64_t p) {
  const auto& rep = fj.representative();
  Matrix<TruncatedSeries<Fp>> out(rep.rows(), rep.cols(), TruncatedSeries<Fp>(fj.dim(), fj.order()));
  for (std::size_t i = 0; i < rep.rows(); ++i)
    for (std::size_t j = 0; j < rep.cols(); ++j) out(i, j) = reduce_mod_p(rep(i, j), p);
  return FlagJet<Fp>(fj.shape(), std::move(out));
}

/// Pullback of a chart along a polynomial map g : chart' -> chart between
/// coordinate sets: C'_l = sum_k (dg_k/dz'_l) C_k ∘ g.
template <class K>
ConnectionChart<K> pullback_chart(const ConnectionChart<K>& chart, const std::vector<Polynomial<K>>& g,
                                  std::vector<std::string> new_coords) {
  if (g.size() != chart.n()) fail(Errc::ShapeMismatch, "pullback map arity");
  unsigned np = g.empty() ? 0 : g[0].nvars();
  if (new_coords.size() != np) fail(Errc::ShapeMismatch, "coordinate names vs map variables");
  ConnectionChart<K> out = ConnectionChart<K>::zero(chart.field, std::move(new_coords), chart.flag_shape);
  for (unsigned l = 0; l < np; ++l) {
    Matrix<RationalFunction<K>> acc(chart.m(), chart.m(), RationalFunction<K>(np));
    for (unsigned k = 0; k < chart.n(); ++k) {
      auto jac = RationalFunction<K>::from_polynomial(g[k].derivative(l));
      for (unsigned i = 0; i < chart.m(); ++i)
        for (unsigned jj = 0; jj < chart.m(); ++jj) acc(i, jj) += jac * chart.c(k)(i, jj).substitute(g);
    }
    out.connection[l] = std::move(acc);
  }
  for (const auto& [idx, t] : chart.flat_tensors) {
    Tensor<RationalFunction<K>> moved(idx, chart.m(), RationalFunction<K>(np));
    for (std::size_t k = 0; k < t.data().size(); ++k) moved.data()[k] = t.data()[k].substitute(g);
    out.flat_tensors.emplace_back(idx, std::move(moved));
  }
  out.polarization = chart.polarization;
  return out;
}

/// Membership of a flag jet in the tensor-defined locus: every u must lie in
/// F(t)^mid identically over A^d_r. In the moving basis given by the
/// representative the filtration is the constant standard flag, so the test
/// checks that all below-mid coordinates of the transported tensor vanish as
/// series.
template <class K>
bool orbit_membership_jet(const FlagJet<K>& fj, const std::vector<Tensor<K>>& tensors) {
  const FlagShape& sh = fj.shape();
  const unsigned m = sh.m, d = fj.dim(), r = fj.order();
  // column levels of the standard flag of the chart shape
  std::vector<int> lv;
  for (int p = sh.w; p >= 0; --p)
    for (unsigned k = 0; k < sh.hodge_number(p); ++k) lv.push_back(p);

  auto minv = series_matrix_inverse(fj.representative());
  auto mt = [&](std::size_t i, std::size_t j) { return fj.representative()(j, i); };

  for (const auto& u : tensors) {
    if (u.rank() != m) fail(Errc::ShapeMismatch, "tensor rank vs flag jet rank");
    long w_ind = static_cast<long>(sh.w) * (static_cast<long>(u.index().a) - static_cast<long>(u.index().b));
    bool odd = (w_ind % 2) != 0;
    long mid = odd ? 0 : w_ind / 2;

    // transport u to the moving basis: covariant slots by M^{-1}, dual slots
    // by M^T; coefficients become series
    Tensor<TruncatedSeries<K>> moved(u.index(), m, TruncatedSeries<K>(d, r));
    u.for_each_slot([&](const std::vector<unsigned>& e, const K& c) {
      if (is_zero(c)) return;
      // distribute over slots
      std::vector<unsigned> target(u.index().slots(), 0);
      std::function<void(unsigned, const TruncatedSeries<K>&)> rec = [&](unsigned s,
                                                                         const TruncatedSeries<K>& acc) {
        if (s == u.index().slots()) {
          moved.data()[moved.flat(target)] += acc;
          return;
        }
        bool dual = s >= u.index().a;
        for (unsigned i = 0; i < m; ++i) {
          const TruncatedSeries<K>& factor = dual ? mt(i, e[s]) : minv(i, e[s]);
          if (factor.is_zero_series()) continue;
          target[s] = i;
          rec(s + 1, acc * factor);
        }
      };
      rec(0, TruncatedSeries<K>::constant(d, r, c));
    });

    std::size_t pos = 0;
    bool ok = true;
    moved.for_each_slot([&](const std::vector<unsigned>& slots, const TruncatedSeries<K>&) {
      long lev = monomial_level(slots, u.index(), lv);
      if ((odd || lev < mid) && !moved.data()[pos].is_zero_series()) ok = false;
      ++pos;
    });
    if (!ok) return false;
  }
  return true;
}

} // namespace perjet

#endif
