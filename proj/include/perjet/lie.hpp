#ifndef PERJET_LIE_HPP
#define PERJET_LIE_HPP

#include <vector>

#include "flag.hpp"
#include "subspace.hpp"
#include "tensor.hpp"

namespace perjet {

template <class K>
std::vector<K> flatten(const Matrix<K>& m) {
  std::vector<K> v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

template <class K>
Matrix<K> unflatten(const std::vector<K>& v, std::size_t rows, std::size_t cols) {
  Matrix<K> m(rows, cols, ScalarOps<K>::zero());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
  return m;
}

/// Weight-space decomposition of End(K^m) under the adjoint cocharacter of a
/// conjugate pair: End^i maps H^{p,w-p} into H^{p-i,w-p+i}. Held in the
/// graded basis, where membership is a support condition on matrix entries.
template <class K>
class EndGrading {
public:
  explicit EndGrading(const ConjugatePair<K>& pair)
      : w_(pair.flag.weight()), p_(graded_basis(pair)), pinv_(field_inverse(p_)) {
    for (int p = w_; p >= 0; --p)
      for (unsigned k = 0; k < pair.flag.shape().hodge_number(p); ++k) levels_.push_back(p);
  }

  int weight() const { return w_; }
  unsigned rank() const { return static_cast<unsigned>(levels_.size()); }
  const Matrix<K>& basis_matrix() const { return p_; }
  const Matrix<K>& basis_inverse() const { return pinv_; }
  const std::vector<int>& column_levels() const { return levels_; }

  /// Exponent of the cocharacter on each graded-basis column: z^p for odd
  /// weight, z^{p-w/2} for even weight.
  std::vector<int> beta_exponents() const {
    std::vector<int> e;
    for (int lv : levels_) e.push_back(w_ % 2 != 0 ? lv : lv - w_ / 2);
    return e;
  }

  /// dim End^i = number of entry positions (row, col) with
  /// level(row) = level(col) - i.
  unsigned dim_component(int i) const {
    unsigned c = 0;
    for (unsigned r = 0; r < rank(); ++r)
      for (unsigned s = 0; s < rank(); ++s)
        if (levels_[r] == levels_[s] - i) ++c;
    return c;
  }

  /// Basis of End^i as matrices in the original coordinates.
  std::vector<Matrix<K>> component_basis(int i) const {
    std::vector<Matrix<K>> out;
    unsigned m = rank();
    for (unsigned r = 0; r < m; ++r)
      for (unsigned s = 0; s < m; ++s) {
        if (levels_[r] != levels_[s] - i) continue;
        Matrix<K> e(m, m, ScalarOps<K>::zero());
        e(r, s) = ScalarOps<K>::one();
        out.push_back(p_ * e * pinv_);
      }
    return out;
  }

  /// Coordinate subspace of End^i in the graded basis, flattened row-major.
  Subspace<K> component_subspace_adapted(int i) const {
    unsigned m = rank();
    std::vector<std::vector<K>> gens;
    for (unsigned r = 0; r < m; ++r)
      for (unsigned s = 0; s < m; ++s) {
        if (levels_[r] != levels_[s] - i) continue;
        std::vector<K> v(m * m, ScalarOps<K>::zero());
        v[r * m + s] = ScalarOps<K>::one();
        gens.push_back(std::move(v));
      }
    return Subspace<K>::span(m * m, gens);
  }

  Matrix<K> to_adapted(const Matrix<K>& x) const { return pinv_ * x * p_; }
  Matrix<K> from_adapted(const Matrix<K>& x) const { return p_ * x * pinv_; }

private:
  int w_;
  Matrix<K> p_, pinv_;
  std::vector<int> levels_;
};

/// Lie subalgebra of gl_m given by a basis, optionally with its decomposition
/// under an adjoint cocharacter grading.
template <class K>
struct GradedLieAlgebra {
  std::vector<Matrix<K>> basis;
  int w = 0;                                   // grading indices run -w..w
  std::vector<std::vector<Matrix<K>>> graded;  // index i+w
  std::vector<unsigned> hodge;                 // h^{-w}..h^{w}, index i+w

  unsigned dim() const { return static_cast<unsigned>(basis.size()); }
  unsigned hodge_number(int i) const {
    if (i < -w || i > w) return 0;
    return hodge[static_cast<std::size_t>(i + w)];
  }
};

/// Basis of {xi in End(K^m) : xi . u = 0 for all u in U}, where xi acts as a
/// derivation on each tensor (negative transpose on dual slots).
template <class K>
std::vector<Matrix<K>> stabilizer_algebra(unsigned m, const std::vector<Tensor<K>>& tensors) {
  std::size_t rows = 0;
  for (const auto& t : tensors) {
    if (t.rank() != m) fail(Errc::DimensionMismatch, "tensor rank");
    rows += t.data().size();
  }
  Matrix<K> cond(rows == 0 ? 1 : rows, m * m, ScalarOps<K>::zero());
  std::size_t row0 = 0;
  for (const auto& t : tensors) {
    for (unsigned a = 0; a < m; ++a)
      for (unsigned b = 0; b < m; ++b) {
        Matrix<K> e(m, m, ScalarOps<K>::zero());
        e(a, b) = ScalarOps<K>::one();
        auto img = derivation_action(e, t);
        for (std::size_t k = 0; k < img.data().size(); ++k) cond(row0 + k, a * m + b) = img.data()[k];
      }
    row0 += t.data().size();
  }
  std::vector<Matrix<K>> out;
  for (const auto& v : kernel_basis(cond)) out.push_back(unflatten(v, m, m));
  return out;
}

/// Decompose the span of `basis` into graded pieces g^i = g ∩ End^i.
/// Fails with NotGraded when the pieces do not fill the algebra (the defining
/// tensors were not fixed by the cocharacter).
template <class K>
GradedLieAlgebra<K> adjoint_hodge_numbers(const std::vector<Matrix<K>>& basis, const EndGrading<K>& grading) {
  GradedLieAlgebra<K> out;
  out.basis = basis;
  out.w = grading.weight();
  unsigned m = grading.rank();

  std::vector<std::vector<K>> flat;
  for (const auto& b : basis) flat.push_back(flatten(grading.to_adapted(b)));
  auto g_ad = Subspace<K>::span(m * m, flat);

  unsigned total = 0;
  for (int i = -out.w; i <= out.w; ++i) {
    auto piece = intersect(g_ad, grading.component_subspace_adapted(i));
    std::vector<Matrix<K>> mats;
    for (const auto& v : piece.basis()) mats.push_back(grading.from_adapted(unflatten(v, m, m)));
    out.hodge.push_back(static_cast<unsigned>(piece.dim()));
    out.graded.push_back(std::move(mats));
    total += static_cast<unsigned>(piece.dim());
  }
  if (total != g_ad.dim())
    fail(Errc::NotGraded, "graded pieces fill " + std::to_string(total) + " of " +
                              std::to_string(g_ad.dim()) + " dimensions");
  return out;
}

template <class K>
struct KillingResult {
  Matrix<K> gram;
  bool nondegenerate = false;
  std::vector<Matrix<K>> radical; // basis of the radical when degenerate
};

/// Gram matrix of B(x,y) = tr(ad x ∘ ad y) in the intrinsic adjoint
/// representation of the span of `basis`. The basis must be closed under the
/// bracket.
template <class K>
KillingResult<K> killing_form(const std::vector<Matrix<K>>& basis) {
  std::size_t g = basis.size();
  if (g == 0) return {Matrix<K>(0, 0), true, {}};
  std::size_t m = basis[0].rows();

  Matrix<K> bmat(m * m, g, ScalarOps<K>::zero());
  for (std::size_t k = 0; k < g; ++k) {
    auto v = flatten(basis[k]);
    for (std::size_t i = 0; i < m * m; ++i) bmat(i, k) = v[i];
  }

  // ad x_k as a g x g matrix: [x_k, x_j] expressed in the basis
  std::vector<Matrix<K>> ad(g, Matrix<K>(g, g, ScalarOps<K>::zero()));
  for (std::size_t k = 0; k < g; ++k)
    for (std::size_t j = 0; j < g; ++j) {
      Matrix<K> br = basis[k] * basis[j] - basis[j] * basis[k];
      std::vector<K> coeffs;
      try {
        coeffs = solve(bmat, flatten(br));
      } catch (const Error&) {
        fail(Errc::NotClosedUnderBracket, "basis is not closed under the bracket");
      }
      // verify (solve returns some solution of a consistent system only)
      auto back = bmat.apply(coeffs);
      if (back != flatten(br)) fail(Errc::NotClosedUnderBracket, "basis is not closed under the bracket");
      for (std::size_t i = 0; i < g; ++i) ad[k](i, j) = coeffs[i];
    }

  KillingResult<K> out{Matrix<K>(g, g, ScalarOps<K>::zero()), false, {}};
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      Matrix<K> prod = ad[i] * ad[j];
      K tr = ScalarOps<K>::zero();
      for (std::size_t t = 0; t < g; ++t) tr += prod(t, t);
      out.gram(i, j) = tr;
    }
  out.nondegenerate = rank(out.gram) == g;
  if (!out.nondegenerate)
    for (const auto& v : kernel_basis(out.gram)) {
      Matrix<K> rad(m, m, ScalarOps<K>::zero());
      for (std::size_t k = 0; k < g; ++k) rad = rad + v[k] * basis[k];
      out.radical.push_back(std::move(rad));
    }
  return out;
}

namespace detail_lie {

/// Projection End(K^m) -> ⊕_p Hom(F^p, K^m/F^p) in the graded basis of the
/// pair (which is adapted to F): coordinates are the entries (row >= j_p,
/// col < j_p) of the adapted matrix, concatenated over the proper steps p.
template <class K>
std::vector<K> tangent_coordinates(const EndGrading<K>& grading, const FlagShape& shape, const Matrix<K>& xi) {
  Matrix<K> ad = grading.to_adapted(xi);
  std::vector<K> out;
  for (int p = shape.w; p >= 0; --p) {
    unsigned jp = shape.jump(p);
    if (jp == 0 || jp == shape.m) continue;
    for (unsigned r = jp; r < shape.m; ++r)
      for (unsigned c = 0; c < jp; ++c) out.push_back(ad(r, c));
  }
  return out;
}

template <class K>
std::size_t tangent_dim(const FlagShape& shape) {
  std::size_t n = 0;
  for (int p = shape.w; p >= 0; --p) {
    unsigned jp = shape.jump(p);
    if (jp == 0 || jp == shape.m) continue;
    n += static_cast<std::size_t>(shape.m - jp) * jp;
  }
  return n;
}

} // namespace detail_lie

template <class K>
struct OrbitTangent {
  Subspace<K> from_grading;       // image of ⊕_{i>0} g^i
  Subspace<K> from_linearization; // image of {xi in a : xi(u) in F^mid for all u}
  unsigned e = 0;                 // sum of the positive adjoint Hodge numbers
  bool equal = false;
};

/// Both routes to the tangent space of the tensor-defined locus at the flag:
/// (a) the image of the positive part of the graded stabilizer of U, and
/// (b) the direct linearization inside the stabilizer of Q alone. Their
/// equality is the tangent-level form of the orbit comparison.
template <class K>
OrbitTangent<K> orbit_tangent(const ConjugatePair<K>& pair, const Matrix<K>& q,
                              const std::vector<Tensor<K>>& tensors) {
  const Flag<K>& f = pair.flag;
  unsigned m = f.rank();
  const K probe = ScalarOps<K>::from_int_in(2, q(0, 0));
  if (characteristic(probe) == 2) fail(Errc::Char2, "orbit analysis needs characteristic != 2");

  bool has_q = false;
  auto qt = form_as_tensor(q);
  for (const auto& t : tensors)
    if (t.index() == qt.index() && t == qt) has_q = true;
  if (!has_q) fail(Errc::PreconditionViolated, "the polarization must be among the defining tensors");
  for (const auto& t : tensors)
    if (!in_fmid(f, t) || !in_fmid(pair.conjugate, t))
      fail(Errc::PreconditionViolated, "tensors must lie in F^mid of both filtrations");

  EndGrading<K> grading(pair);

  // route (a): positive graded part of the stabilizer of all tensors
  auto stab = stabilizer_algebra(m, tensors);
  auto graded = adjoint_hodge_numbers(stab, grading);
  std::vector<std::vector<K>> gens_a;
  unsigned e = 0;
  for (int i = 1; i <= graded.w; ++i) {
    e += graded.hodge_number(i);
    for (const auto& x : graded.graded[static_cast<std::size_t>(i + graded.w)])
      gens_a.push_back(detail_lie::tangent_coordinates(grading, f.shape(), x));
  }
  auto route_a = Subspace<K>::span(detail_lie::tangent_dim<K>(f.shape()), gens_a);

  // route (b): {xi in a = Lie Aut(Q) : xi(u) in F^mid for all u}
  auto amb = stabilizer_algebra<K>(m, std::vector<Tensor<K>>{qt});
  // linear conditions on the amb-coefficients: the coordinates of xi(u) below
  // the mid level in the flag-adapted basis vanish (all of them when the
  // induced weight is odd, since then F^mid = 0)
  auto adapted_inv = grading.basis_inverse();
  auto lv = grading.column_levels();
  std::vector<std::vector<K>> rows;
  for (const auto& u : tensors) {
    long w_ind = static_cast<long>(f.weight()) *
                 (static_cast<long>(u.index().a) - static_cast<long>(u.index().b));
    bool odd = (w_ind % 2) != 0;
    long mid = odd ? 0 : w_ind / 2;
    Tensor<K> probe_t(u.index(), m);
    std::size_t flat_size = probe_t.data().size();
    std::vector<Tensor<K>> images;
    images.reserve(amb.size());
    for (const auto& a : amb) images.push_back(tensor_transport(adapted_inv, derivation_action(a, u)));
    // identify constrained flat positions once
    std::vector<bool> constrained(flat_size, false);
    std::size_t fpos = 0;
    probe_t.for_each_slot([&](const std::vector<unsigned>& slots, const K&) {
      long lev = monomial_level(slots, u.index(), lv);
      constrained[fpos] = odd || lev < mid;
      ++fpos;
    });
    for (std::size_t fp = 0; fp < flat_size; ++fp) {
      if (!constrained[fp]) continue;
      std::vector<K> row(amb.size(), ScalarOps<K>::zero());
      for (std::size_t k = 0; k < amb.size(); ++k) row[k] = images[k].data()[fp];
      rows.push_back(std::move(row));
    }
  }
  Matrix<K> cond(rows.empty() ? 1 : rows.size(), amb.size(), ScalarOps<K>::zero());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < amb.size(); ++k) cond(i, k) = rows[i][k];
  std::vector<std::vector<K>> gens_b;
  for (const auto& coeffs : kernel_basis(cond)) {
    Matrix<K> xi(m, m, ScalarOps<K>::zero());
    for (std::size_t k = 0; k < amb.size(); ++k) xi = xi + coeffs[k] * amb[k];
    gens_b.push_back(detail_lie::tangent_coordinates(grading, f.shape(), xi));
  }
  auto route_b = Subspace<K>::span(detail_lie::tangent_dim<K>(f.shape()), gens_b);

  return OrbitTangent<K>{route_a, route_b, e, route_a == route_b};
}

struct NumericInvariants {
  int level = 0;
  unsigned e = 0;
  bool symmetric = true;
};

/// level = max i with h^i != 0 (at least 0), e = sum of positive h^i,
/// symmetric iff h^i = h^{-i} for all i.
template <class K>
NumericInvariants numeric_invariants(const GradedLieAlgebra<K>& g) {
  NumericInvariants out;
  for (int i = 1; i <= g.w; ++i) {
    if (g.hodge_number(i) != 0) out.level = i;
    out.e += g.hodge_number(i);
    if (g.hodge_number(i) != g.hodge_number(-i)) out.symmetric = false;
  }
  return out;
}

/// Period dimension of the ambient polarized group: e for Lie Aut(Q).
template <class K>
unsigned period_dimension(const ConjugatePair<K>& pair, const Matrix<K>& q) {
  EndGrading<K> grading(pair);
  auto amb = stabilizer_algebra<K>(pair.flag.rank(), std::vector<Tensor<K>>{form_as_tensor(q)});
  auto graded = adjoint_hodge_numbers(amb, grading);
  return numeric_invariants(graded).e;
}

} // namespace perjet

#endif
