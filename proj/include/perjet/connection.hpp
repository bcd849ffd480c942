#ifndef PERJET_CONNECTION_HPP
#define PERJET_CONNECTION_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "field.hpp"
#include "flag.hpp"
#include "matrix.hpp"
#include "rational_function.hpp"
#include "tensor.hpp"

namespace perjet {

/// Filtered rank-m bundle with flat connection on an affine chart. The
/// trivializing frame is filtration-compatible by fiat (F^k is spanned by the
/// first j_k frame sections), and the connection acts by
/// nabla v^i = sum_j c_ij ⊗ v^j with c_ij = sum_l c_ijl dz_l.
template <class K>
struct ConnectionChart {
  CoefficientField field;
  std::vector<std::string> coordinates;      // z_1 .. z_n
  FlagShape flag_shape;                      // rank m, weight, Hodge numbers
  std::vector<Matrix<RationalFunction<K>>> connection; // C_l = [c_ijl], one per coordinate
  std::optional<Matrix<K>> polarization;
  std::vector<std::pair<TensorIndex, Tensor<RationalFunction<K>>>> flat_tensors;

  unsigned n() const { return static_cast<unsigned>(coordinates.size()); }
  unsigned m() const { return flag_shape.m; }

  const Matrix<RationalFunction<K>>& c(unsigned l) const { return connection[l]; }

  void validate() const {
    if (connection.size() != coordinates.size()) fail(Errc::ShapeMismatch, "one connection matrix per coordinate");
    for (const auto& cl : connection)
      if (cl.rows() != m() || cl.cols() != m()) fail(Errc::ShapeMismatch, "connection matrix rank");
    if (polarization && (polarization->rows() != m() || polarization->cols() != m()))
      fail(Errc::ShapeMismatch, "polarization rank");
    for (const auto& [idx, t] : flat_tensors)
      if (t.rank() != m()) fail(Errc::ShapeMismatch, "flat tensor rank");
  }

  /// Zero connection on given coordinates.
  static ConnectionChart zero(CoefficientField f, std::vector<std::string> coords, FlagShape shape) {
    ConnectionChart ch;
    ch.field = f;
    ch.coordinates = std::move(coords);
    ch.flag_shape = std::move(shape);
    unsigned nn = static_cast<unsigned>(ch.coordinates.size());
    RationalFunction<K> z(nn);
    for (unsigned l = 0; l < nn; ++l)
      ch.connection.push_back(Matrix<RationalFunction<K>>(ch.flag_shape.m, ch.flag_shape.m, z));
    return ch;
  }
};

template <class K>
struct CurvatureWitness {
  unsigned l1, l2, i, j;
  RationalFunction<K> entry;
};

/// Coordinate form of the curvature tensor: flat iff for all l1 < l2, i', j
///   sum_i (c_{i'i,l2} c_{ij,l1} - c_{i'i,l1} c_{ij,l2})
///     + d_{l1} c_{i'j,l2} - d_{l2} c_{i'j,l1} = 0
/// as rational functions; in matrix form C_{l2} C_{l1} - C_{l1} C_{l2}
///   + d_{l1} C_{l2} - d_{l2} C_{l1}.
template <class K>
std::optional<CurvatureWitness<K>> curvature_witness(const ConnectionChart<K>& chart) {
  for (unsigned l1 = 0; l1 < chart.n(); ++l1)
    for (unsigned l2 = l1 + 1; l2 < chart.n(); ++l2) {
      const auto& c1 = chart.c(l1);
      const auto& c2 = chart.c(l2);
      for (unsigned i = 0; i < chart.m(); ++i)
        for (unsigned j = 0; j < chart.m(); ++j) {
          RationalFunction<K> acc(chart.n());
          for (unsigned k = 0; k < chart.m(); ++k) acc += c2(i, k) * c1(k, j) - c1(i, k) * c2(k, j);
          acc += c2(i, j).derivative(l1) - c1(i, j).derivative(l2);
          if (!acc.is_zero_function()) return CurvatureWitness<K>{l1, l2, i, j, acc};
        }
    }
  return std::nullopt;
}

template <class K>
bool curvature_is_flat(const ConnectionChart<K>& chart) {
  return !curvature_witness(chart).has_value();
}

namespace detail {

/// Evaluated derivatives of the connection matrices at the basepoint,
/// memoized per (coordinate, multi-index).
template <class K>
class ConnectionDerivatives {
public:
  ConnectionDerivatives(const ConnectionChart<K>& chart, std::vector<K> point)
      : chart_(chart), point_(std::move(point)) {}

  /// Value at the basepoint of d^q C_l, rows/cols as in the chart.
  const Matrix<K>& at(unsigned l, const MultiIndex& q) {
    auto key = std::make_pair(l, q);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Matrix<K> m(chart_.m(), chart_.m(), ScalarOps<K>::zero());
    for (unsigned i = 0; i < chart_.m(); ++i)
      for (unsigned j = 0; j < chart_.m(); ++j) {
        auto d = chart_.c(l)(i, j).derivative_multi(q);
        if (d.has_pole_at(point_)) fail(Errc::PoleAtBasepoint, "connection has a pole at the basepoint");
        m(i, j) = d.evaluate(point_);
      }
    return memo_.emplace(key, std::move(m)).first->second;
  }

private:
  const ConnectionChart<K>& chart_;
  std::vector<K> point_;
  std::map<std::pair<unsigned, MultiIndex>, Matrix<K>> memo_;
};

} // namespace detail

namespace detail {

/// Derivative of the formal flat-frame solution along an explicit sequence of
/// coordinate indices, evaluated at (s, f0). Peels the last coordinate of the
/// sequence and expands d_prefix(-C_l^T f) by the Leibniz rule, substituting
/// lower-order values recursively. Memoized by exact subsequence so distinct
/// orderings perform genuinely distinct computations.
template <class K>
Matrix<K> xi_recurse(ConnectionDerivatives<K>& cd, unsigned n, unsigned m, const Matrix<K>& f0,
                     const std::vector<unsigned>& seq, std::map<std::vector<unsigned>, Matrix<K>>& memo) {
  auto it = memo.find(seq);
  if (it != memo.end()) return it->second;
  if (seq.empty()) return memo.emplace(seq, f0).first->second;
  unsigned l = seq.back();
  std::vector<unsigned> prefix(seq.begin(), seq.end() - 1);
  std::size_t np = prefix.size();
  Matrix<K> acc(m, m, ScalarOps<K>::zero());
  for (std::size_t mask = 0; mask < (std::size_t(1) << np); ++mask) {
    MultiIndex qa(n, 0);
    std::vector<unsigned> rest;
    for (std::size_t b = 0; b < np; ++b) {
      if (mask & (std::size_t(1) << b))
        qa[prefix[b]] += 1;
      else
        rest.push_back(prefix[b]);
    }
    acc = acc + cd.at(l, qa).transpose() * xi_recurse(cd, n, m, f0, rest, memo);
  }
  return memo.emplace(seq, -acc).first->second;
}

template <class K>
void require_flat(const ConnectionChart<K>& chart) {
  if (auto w = curvature_witness(chart))
    fail(Errc::NotFlat, "connection is not flat: curvature (" + std::to_string(w->l1) + "," +
                            std::to_string(w->l2) + ") entry (" + std::to_string(w->i) + "," +
                            std::to_string(w->j) + ") nonzero");
}

} // namespace detail

/// Value at (s, f0) of the flat-frame derivative along an explicit coordinate
/// sequence. For flat charts the result is independent of the ordering.
template <class K>
Matrix<K> xi_eval_ordered(const ConnectionChart<K>& chart, const std::vector<K>& s, const Matrix<K>& f0,
                          const std::vector<unsigned>& order_seq) {
  require_order_invertible(chart.field, static_cast<unsigned>(order_seq.size()));
  if (s.size() != chart.n()) fail(Errc::DimensionMismatch, "basepoint arity");
  detail::require_flat(chart);
  detail::ConnectionDerivatives<K> cd(chart, s);
  std::map<std::vector<unsigned>, Matrix<K>> memo;
  return detail::xi_recurse(cd, chart.n(), chart.m(), f0, order_seq, memo);
}

/// Canonical ordering: the multi-index read as a sorted coordinate sequence.
template <class K>
Matrix<K> xi_eval(const ConnectionChart<K>& chart, const std::vector<K>& s, const Matrix<K>& f0,
                  const MultiIndex& q) {
  if (q.size() != chart.n()) fail(Errc::DimensionMismatch, "multi-index arity");
  std::vector<unsigned> seq;
  for (unsigned l = 0; l < q.size(); ++l)
    for (unsigned e = 0; e < q[l]; ++e) seq.push_back(l);
  return xi_eval_ordered(chart, s, f0, seq);
}

/// Formal flat frame of order r at a rational basepoint, framed by the
/// initial value f(s) = f0.
template <class K>
struct FramedLimp {
  ConnectionChart<K> chart;
  std::vector<K> basepoint;
  Matrix<K> initial_frame;
  unsigned order = 0;
  Matrix<TruncatedSeries<K>> solution; // shape (n, r), entries in shifted coordinates
};

/// Unique order-r solution of d_l f = -C_l^T f with f(s) = f0. The (z-s)^q
/// coefficient is xi_q(s, f0) divided by the multinomial q_1! ... q_d!.
template <class K>
FramedLimp<K> solve_limp(const ConnectionChart<K>& chart, const std::vector<K>& s, const Matrix<K>& f0,
                         unsigned r) {
  require_order_invertible(chart.field, r);
  if (f0.rows() != chart.m() || f0.cols() != chart.m()) fail(Errc::ShapeMismatch, "frame rank");
  if (s.size() != chart.n()) fail(Errc::DimensionMismatch, "basepoint arity");
  if (is_zero(det(f0))) fail(Errc::SingularFrame, "initial frame must be invertible");
  detail::require_flat(chart);
  const unsigned n = chart.n(), m = chart.m();
  const K sample = ScalarOps<K>::from_int_in(1, s.empty() ? f0(0, 0) : s[0]);

  detail::ConnectionDerivatives<K> cd(chart, s);
  std::map<std::vector<unsigned>, Matrix<K>> memo;
  Matrix<TruncatedSeries<K>> f(m, m, TruncatedSeries<K>(n, r));
  auto table = IndexTable::get(n, r);
  for (const auto& q : table->indices()) {
    std::vector<unsigned> seq;
    for (unsigned l = 0; l < q.size(); ++l)
      for (unsigned e = 0; e < q[l]; ++e) seq.push_back(l);
    Matrix<K> xi = detail::xi_recurse(cd, n, m, f0, seq, memo);
    K fact = ScalarOps<K>::from_int_in(static_cast<long long>(multinomial_denominator(q)), sample);
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) {
        K c = xi(i, j) / fact;
        auto series = f(i, j);
        series.set_coefficient(q, c);
        f(i, j) = series;
      }
  }
  return FramedLimp<K>{chart, s, f0, r, std::move(f)};
}

struct FlatFrameWitness {
  unsigned coordinate, row, col;
  MultiIndex at;
};

/// Check d_l f = -C_l^T f to order r-1 in every coordinate, with C_l
/// Taylor-expanded at the basepoint. Diagnostic: returns the first failure.
template <class K>
std::optional<FlatFrameWitness> verify_flat_frame(const FramedLimp<K>& limp) {
  const auto& chart = limp.chart;
  const unsigned n = chart.n(), m = chart.m(), r = limp.order;
  if (r == 0) return std::nullopt;
  for (unsigned l = 0; l < n; ++l) {
    // C_l^T expanded at s to order r-1
    Matrix<TruncatedSeries<K>> clt(m, m, TruncatedSeries<K>(n, r - 1));
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) clt(i, j) = chart.c(l)(j, i).taylor_at(limp.basepoint, r - 1);
    Matrix<TruncatedSeries<K>> dfl(m, m, TruncatedSeries<K>(n, r - 1));
    Matrix<TruncatedSeries<K>> ftrunc(m, m, TruncatedSeries<K>(n, r - 1));
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) {
        dfl(i, j) = limp.solution(i, j).derivative(l);
        ftrunc(i, j) = limp.solution(i, j).truncate(r - 1);
      }
    Matrix<TruncatedSeries<K>> rhs = clt * ftrunc;
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) {
        auto diff = dfl(i, j) + rhs(i, j);
        for (std::size_t k = 0; k < diff.size(); ++k)
          if (!is_zero(diff[k])) return FlatFrameWitness{l, i, j, diff.table().at(k)};
      }
  }
  return std::nullopt;
}

} // namespace perjet

#endif
