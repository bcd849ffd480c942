#ifndef PERJET_FLAG_JET_HPP
#define PERJET_FLAG_JET_HPP

#include <vector>

#include "flag.hpp"
#include "jet.hpp"

namespace perjet {

/// Order-r family of flags over the d-dimensional disk, represented by a
/// matrix over A^d_r invertible at the closed point. F^k at every
/// infinitesimal parameter is the span of the first j_k columns.
template <class K>
class FlagJet {
public:
  FlagJet(FlagShape shape, Matrix<TruncatedSeries<K>> rep) : shape_(std::move(shape)), rep_(std::move(rep)) {
    if (rep_.rows() != shape_.m || rep_.cols() != shape_.m)
      fail(Errc::DimensionMismatch, "representative vs shape rank");
    Matrix<K> c0(shape_.m, shape_.m, ScalarOps<K>::zero());
    for (unsigned i = 0; i < shape_.m; ++i)
      for (unsigned j = 0; j < shape_.m; ++j) c0(i, j) = rep_(i, j).constant_term();
    if (is_zero(det(c0))) fail(Errc::SingularMatrix, "representative not invertible over A^d_r");
  }

  const FlagShape& shape() const { return shape_; }
  const Matrix<TruncatedSeries<K>>& representative() const { return rep_; }
  unsigned dim() const { return rep_(0, 0).dim(); }
  unsigned order() const { return rep_(0, 0).order(); }

  /// The flag at the closed point t = 0.
  Flag<K> central_flag() const {
    Matrix<K> c0(shape_.m, shape_.m, ScalarOps<K>::zero());
    for (unsigned i = 0; i < shape_.m; ++i)
      for (unsigned j = 0; j < shape_.m; ++j) c0(i, j) = rep_(i, j).constant_term();
    return flag_from_matrix(c0, shape_);
  }

  /// Left action of a constant invertible matrix.
  FlagJet acted_by(const Matrix<K>& g) const {
    return FlagJet(shape_, to_series_matrix(g, dim(), order()) * rep_);
  }

private:
  FlagShape shape_;
  Matrix<TruncatedSeries<K>> rep_;
};

/// Equality in the fibre of the q map: b^{-1} a must be block-upper-triangular
/// over A^d_r with respect to the jump blocks (column spans agree at every
/// step over the Weil algebra).
template <class K>
bool flag_jet_equal(const FlagJet<K>& a, const FlagJet<K>& b) {
  if (a.shape() != b.shape()) fail(Errc::ShapeMismatch, "flag jets of different shape");
  if (a.dim() != b.dim() || a.order() != b.order()) fail(Errc::ShapeMismatch, "flag jets of different disk shape");
  auto t = series_matrix_inverse(b.representative()) * a.representative();
  const FlagShape& sh = a.shape();
  for (unsigned c = 0; c < sh.m; ++c) {
    // smallest jump index >= c+1: the block that owns column c
    unsigned block_end = sh.m;
    for (int p = sh.w; p >= 0; --p)
      if (sh.jump(p) >= c + 1) {
        block_end = sh.jump(p);
        break;
      }
    for (unsigned r = block_end; r < sh.m; ++r)
      if (!t(r, c).is_zero_series()) return false;
  }
  return true;
}

/// Precompose the flag family with an algebra map of disks.
template <class K>
FlagJet<K> reparametrize_flag_jet(const std::vector<TruncatedSeries<K>>& v, const FlagJet<K>& fj) {
  unsigned m = fj.shape().m;
  if (v.empty() || v.size() != fj.dim()) fail(Errc::ShapeMismatch, "reparametrization arity");
  unsigned r = v[0].order();
  if (fj.order() > r) fail(Errc::OrderMismatch, "reparametrization requires r' <= r");
  Matrix<TruncatedSeries<K>> out(m, m, TruncatedSeries<K>(v[0].dim(), r));
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) out(i, j) = series_substitute(fj.representative()(i, j).extend(r), v);
  return FlagJet<K>(fj.shape(), std::move(out));
}

} // namespace perjet

#endif
