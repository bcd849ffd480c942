#ifndef PERJET_CHART_SUPPORT_HPP
#define PERJET_CHART_SUPPORT_HPP

#include <perjet/connection.hpp>

#include "gen_support.hpp"

/// Flat chart built as a gauge transform of the zero connection: pick an
/// invertible polynomial frame f(z) = A (I + N(z)) with N strictly
/// triangular, and read the connection off d_l f = -C_l^T f. The exact
/// solution f is returned alongside, so solve_limp has a closed-form oracle.
template <class K>
struct GaugeChart {
  perjet::ConnectionChart<K> chart;
  perjet::Matrix<perjet::Polynomial<K>> frame;     // exact flat-frame solution
  perjet::Matrix<perjet::Polynomial<K>> frame_inv; // exact inverse
};

template <class K, class MakeScalar>
GaugeChart<K> random_gauge_chart(TestRng& rng, unsigned n, unsigned m, perjet::CoefficientField field,
                                 MakeScalar make, unsigned max_deg = 2) {
  using namespace perjet;
  using P = Polynomial<K>;
  const P zero(n);
  const P one = P::constant(n, ScalarOps<K>::one());

  Matrix<P> nil(m, m, zero);
  bool upper = rng.next() % 2 == 0;
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j)
      if ((upper && j > i) || (!upper && j < i))
        nil(i, j) = random_polynomial<K>(rng, n, max_deg, 2, make);

  Matrix<P> ident(m, m, zero);
  for (unsigned i = 0; i < m; ++i) ident(i, i) = one;

  Matrix<P> u = ident + nil;
  Matrix<P> uinv = ident, pw = ident;
  for (unsigned k = 1; k < m; ++k) {
    pw = pw * nil;
    if (k % 2 == 0)
      uinv = uinv + pw;
    else
      uinv = uinv - pw;
  }

  auto a = random_invertible<K>(rng, m, make);
  auto ainv = field_inverse(a);
  Matrix<P> ap(m, m, zero), ainvp(m, m, zero);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) {
      ap(i, j) = P::constant(n, a(i, j));
      ainvp(i, j) = P::constant(n, ainv(i, j));
    }

  Matrix<P> f = ap * u;
  Matrix<P> finv = uinv * ainvp;

  GaugeChart<K> out;
  out.frame = f;
  out.frame_inv = finv;
  unsigned w = 1 + rng.next() % 2;
  std::vector<unsigned> hodge(w + 1, 0);
  for (unsigned left = m, i = 0; i <= w; ++i) {
    unsigned take = (i == w) ? left : 1 + rng.next() % std::max(1u, left - (w - i));
    hodge[i] = take;
    left -= take;
  }
  std::vector<std::string> coords;
  for (unsigned l = 0; l < n; ++l) coords.push_back("z" + std::to_string(l + 1));
  out.chart = ConnectionChart<K>::zero(field, coords, FlagShape(m, static_cast<int>(w), hodge));
  for (unsigned l = 0; l < n; ++l) {
    Matrix<P> df(m, m, zero);
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) df(i, j) = f(i, j).derivative(l);
    Matrix<P> g = df * finv; // d_l f · f^{-1}
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j)
        out.chart.connection[l](i, j) = -RationalFunction<K>::from_polynomial(g(j, i)); // C_l = -G^T
  }
  return out;
}

/// Evaluate a polynomial matrix at a point.
template <class K>
perjet::Matrix<K> eval_poly_matrix(const perjet::Matrix<perjet::Polynomial<K>>& m, const std::vector<K>& s) {
  perjet::Matrix<K> out(m.rows(), m.cols(), perjet::ScalarOps<K>::zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).evaluate(s);
  return out;
}

/// Taylor expansion of a polynomial matrix at a point, to total order r.
template <class K>
perjet::Matrix<perjet::TruncatedSeries<K>> taylor_poly_matrix(const perjet::Matrix<perjet::Polynomial<K>>& m,
                                                              const std::vector<K>& s, unsigned r) {
  unsigned n = static_cast<unsigned>(s.size());
  perjet::Matrix<perjet::TruncatedSeries<K>> out(m.rows(), m.cols(), perjet::TruncatedSeries<K>(n, r));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).taylor_at(s, r);
  return out;
}

/// Series solution oracle for p2 y'' + p1 y' + p0 y = 0 at an ordinary point:
/// coefficients of the polynomials are given in the local variable u, and the
/// recursion determines a_{k+2} from the lower coefficients.
inline perjet::TruncatedSeries<perjet::Rat> ode_series_solution(const perjet::Polynomial<perjet::Rat>& p2,
                                                                const perjet::Polynomial<perjet::Rat>& p1,
                                                                const perjet::Polynomial<perjet::Rat>& p0,
                                                                perjet::Rat y0, perjet::Rat y1, unsigned r) {
  using namespace perjet;
  using S = TruncatedSeries<Rat>;
  Rat lead = p2.evaluate({Rat(0)});
  if (is_zero(lead)) fail(Errc::PoleAtBasepoint, "ODE oracle needs an ordinary point");
  S y(1, r);
  y.set_coefficient({0}, y0);
  if (r >= 1) y.set_coefficient({1}, y1);
  auto residual_coeff = [&](const S& cur, unsigned k) {
    // coefficient of u^k in p2 cur'' + p1 cur' + p0 cur, all truncated enough
    unsigned big = k + 2;
    S c2 = p2.taylor_at({Rat(0)}, big), c1 = p1.taylor_at({Rat(0)}, big), c0 = p0.taylor_at({Rat(0)}, big);
    S yy = cur;
    S y1s = yy.derivative(0);
    S y2s = y1s.derivative(0);
    Rat acc(0);
    for (unsigned i = 0; i <= k; ++i) {
      acc += c2.coefficient({i}) * y2s.coefficient({k - i});
      acc += c1.coefficient({i}) * y1s.coefficient({k - i});
      acc += c0.coefficient({i}) * yy.coefficient({k - i});
    }
    return acc;
  };
  for (unsigned k = 0; k + 2 <= r; ++k) {
    // with a_{k+2} unknown (currently 0), the residual at u^k is linear in it
    Rat c = residual_coeff(y, k);
    Rat denom = lead * Rat(static_cast<long>((k + 2) * (k + 1)));
    y.set_coefficient({k + 2}, -c / denom);
  }
  return y;
}

#endif
