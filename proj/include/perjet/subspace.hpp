#ifndef PERJET_SUBSPACE_HPP
#define PERJET_SUBSPACE_HPP

#include <vector>

#include "matrix.hpp"

namespace perjet {

/// Linear subspace of K^m in canonical form: the reduced row echelon basis,
/// one generator per row. Equality of subspaces is equality of the forms.
template <class K>
class Subspace {
public:
  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace span(std::size_t ambient, const std::vector<std::vector<K>>& gens) {
    Subspace s(ambient);
    if (gens.empty()) return s;
    Matrix<K> m(gens.size(), ambient, ScalarOps<K>::zero());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].size() != ambient) fail(Errc::DimensionMismatch, "generator length");
      for (std::size_t j = 0; j < ambient; ++j) m(i, j) = gens[i][j];
    }
    std::size_t rk = rref(m).size();
    s.basis_ = Matrix<K>(rk, ambient, ScalarOps<K>::zero());
    for (std::size_t i = 0; i < rk; ++i)
      for (std::size_t j = 0; j < ambient; ++j) s.basis_(i, j) = m(i, j);
    return s;
  }

  static Subspace full(std::size_t ambient) {
    std::vector<std::vector<K>> gens;
    for (std::size_t i = 0; i < ambient; ++i) {
      std::vector<K> e(ambient, ScalarOps<K>::zero());
      e[i] = ScalarOps<K>::one();
      gens.push_back(std::move(e));
    }
    return span(ambient, gens);
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }

  std::vector<std::vector<K>> basis() const {
    std::vector<std::vector<K>> b;
    for (std::size_t i = 0; i < basis_.rows(); ++i) b.push_back(basis_.row(i));
    return b;
  }

  bool contains(const std::vector<K>& v) const {
    if (v.size() != ambient_) fail(Errc::DimensionMismatch, "vector length");
    Matrix<K> m(basis_.rows() + 1, ambient_, ScalarOps<K>::zero());
    for (std::size_t i = 0; i < basis_.rows(); ++i)
      for (std::size_t j = 0; j < ambient_; ++j) m(i, j) = basis_(i, j);
    for (std::size_t j = 0; j < ambient_; ++j) m(basis_.rows(), j) = v[j];
    return rank(std::move(m)) == dim();
  }

  bool contains(const Subspace& o) const {
    for (std::size_t i = 0; i < o.basis_.rows(); ++i)
      if (!contains(o.basis_.row(i))) return false;
    return true;
  }

  friend Subspace operator+(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_) fail(Errc::DimensionMismatch, "mixed ambients");
    auto gens = a.basis();
    for (auto& r : b.basis()) gens.push_back(r);
    return span(a.ambient_, gens);
  }

  /// Intersection via the kernel of [A^T | -B^T].
  friend Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_) fail(Errc::DimensionMismatch, "mixed ambients");
    if (a.dim() == 0 || b.dim() == 0) return Subspace(a.ambient_);
    Matrix<K> m(a.ambient_, a.dim() + b.dim(), ScalarOps<K>::zero());
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t i = 0; i < a.ambient_; ++i) m(i, j) = a.basis_(j, i);
    for (std::size_t j = 0; j < b.dim(); ++j)
      for (std::size_t i = 0; i < a.ambient_; ++i) m(i, a.dim() + j) = -b.basis_(j, i);
    auto null = kernel_basis(std::move(m));
    std::vector<std::vector<K>> gens;
    for (const auto& v : null) {
      std::vector<K> w(a.ambient_, ScalarOps<K>::zero());
      for (std::size_t j = 0; j < a.dim(); ++j)
        for (std::size_t i = 0; i < a.ambient_; ++i) w[i] += v[j] * a.basis_(j, i);
      gens.push_back(std::move(w));
    }
    return span(a.ambient_, gens);
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

private:
  std::size_t ambient_;
  Matrix<K> basis_;
};

} // namespace perjet

#endif
