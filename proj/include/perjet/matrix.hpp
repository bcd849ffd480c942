#ifndef PERJET_MATRIX_HPP
#define PERJET_MATRIX_HPP

#include <string>
#include <vector>

#include "field.hpp"
#include "series.hpp"

namespace perjet {

/// Dense matrix over any commutative ring element type.
template <class T>
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, const T& zero = T())
      : rows_(rows), cols_(cols), data_(rows * cols, zero) {}

  static Matrix identity(std::size_t n, const T& zero = T(), const T& one = T(1)) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(Errc::ShapeMismatch, "matrix product shapes");
    T zero = a.data_.empty() ? (b.data_.empty() ? T() : zero_like(b.data_[0])) : zero_like(a.data_[0]);
    Matrix r(a.rows_, b.cols_, zero);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const T& c, const Matrix& a) {
    Matrix r = a;
    for (auto& x : r.data_) x = c * x;
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.data_) x = -x;
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix transpose() const {
    Matrix r(cols_, rows_, data_.empty() ? T() : zero_like(data_[0]));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    std::vector<T> r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) fail(Errc::ShapeMismatch, "matrix-vector shapes");
    std::vector<T> r(rows_, data_.empty() ? T() : zero_like(data_[0]));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

private:
  std::size_t rows_, cols_;
  std::vector<T> data_;

  static T zero_like(const T& t) { return t - t; }
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::ShapeMismatch, "matrix shapes differ");
  }
};

/// Row-reduce in place over a field; returns the pivot columns.
/// Rows beyond the rank are zeroed. Fully reduced (RREF).
template <class K>
std::vector<std::size_t> rref(Matrix<K>& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && is_zero(m(piv, col))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    K inv = inverse(m(row, col));
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = inv * m(row, j);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      K f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class K>
std::size_t rank(Matrix<K> m) {
  return rref(m).size();
}

template <class K>
K det(Matrix<K> m) {
  if (m.rows() != m.cols()) fail(Errc::ShapeMismatch, "determinant of non-square matrix");
  K d = ScalarOps<K>::one();
  for (std::size_t col = 0, row = 0; col < m.cols(); ++col, ++row) {
    std::size_t piv = row;
    while (piv < m.rows() && is_zero(m(piv, col))) ++piv;
    if (piv == m.rows()) return ScalarOps<K>::zero();
    if (piv != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
      d = -d;
    }
    d = d * m(row, col);
    K inv = inverse(m(row, col));
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      if (is_zero(m(i, col))) continue;
      K f = inv * m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
  }
  return d;
}

template <class K>
Matrix<K> field_inverse(const Matrix<K>& a) {
  if (a.rows() != a.cols()) fail(Errc::ShapeMismatch, "inverse of non-square matrix");
  std::size_t n = a.rows();
  Matrix<K> aug(n, 2 * n, ScalarOps<K>::zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = ScalarOps<K>::one();
  }
  auto piv = rref(aug);
  if (piv.size() != n || piv.back() != n - 1) fail(Errc::SingularMatrix, "matrix is not invertible");
  Matrix<K> inv(n, n, ScalarOps<K>::zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Basis of the right kernel, as columns. Free-variable entries are minted in
/// the same field as the matrix entries.
template <class K>
std::vector<std::vector<K>> kernel_basis(Matrix<K> m) {
  std::size_t n = m.cols();
  K sample = ScalarOps<K>::zero();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) sample = ScalarOps<K>::attach_like(sample, m(i, j));
  auto pivots = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<K>> basis;
  for (std::size_t fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<K> v(n, ScalarOps<K>::attach_like(ScalarOps<K>::zero(), sample));
    v[fc] = ScalarOps<K>::attach_like(ScalarOps<K>::one(), sample);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solve a x = b; fails if inconsistent. Returns one solution.
template <class K>
std::vector<K> solve(const Matrix<K>& a, const std::vector<K>& b) {
  if (b.size() != a.rows()) fail(Errc::ShapeMismatch, "solve shapes");
  Matrix<K> aug(a.rows(), a.cols() + 1, ScalarOps<K>::zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == a.cols()) fail(Errc::SingularMatrix, "inconsistent linear system");
  std::vector<K> x(a.cols(), ScalarOps<K>::zero());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, a.cols());
  return x;
}

/// Inverse of a matrix of truncated series whose constant part is invertible
/// over the coefficient field: A = A0 (I - N) with N nilpotent, so
/// A^{-1} = (I + N + ... + N^r) A0^{-1}.
template <class K>
Matrix<TruncatedSeries<K>> series_matrix_inverse(const Matrix<TruncatedSeries<K>>& a) {
  if (a.rows() != a.cols()) fail(Errc::ShapeMismatch, "inverse of non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return a;
  unsigned d = a(0, 0).dim(), r = a(0, 0).order();
  TruncatedSeries<K> zero(d, r), one = TruncatedSeries<K>::constant(d, r, ScalarOps<K>::one());

  Matrix<K> a0(n, n, ScalarOps<K>::zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a0(i, j) = a(i, j).constant_term();
  Matrix<K> a0inv = field_inverse(a0); // throws SingularMatrix when not a unit

  Matrix<TruncatedSeries<K>> a0inv_s(n, n, zero), ident(n, n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    ident(i, i) = one;
    for (std::size_t j = 0; j < n; ++j) a0inv_s(i, j) = TruncatedSeries<K>::constant(d, r, a0inv(i, j));
  }
  Matrix<TruncatedSeries<K>> nilp = ident - a0inv_s * a;
  Matrix<TruncatedSeries<K>> acc = ident, pw = ident;
  for (unsigned k = 1; k <= r; ++k) {
    pw = pw * nilp;
    acc = acc + pw;
  }
  return acc * a0inv_s;
}

template <class K>
Matrix<TruncatedSeries<K>> to_series_matrix(const Matrix<K>& a, unsigned d, unsigned r) {
  Matrix<TruncatedSeries<K>> out(a.rows(), a.cols(), TruncatedSeries<K>(d, r));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = TruncatedSeries<K>::constant(d, r, a(i, j));
  return out;
}

} // namespace perjet

#endif
