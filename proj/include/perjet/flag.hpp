#ifndef PERJET_FLAG_HPP
#define PERJET_FLAG_HPP

#include <numeric>
#include <vector>

#include "matrix.hpp"
#include "subspace.hpp"

namespace perjet {

/// Combinatorial type of a GLF filtration on K^m of weight w: Hodge numbers
/// h^w, ..., h^0 listed from the highest filtration step down, summing to m.
/// The jump indices are the partial sums, so F^k is spanned by the first j_k
/// columns of an adapted matrix.
struct FlagShape {
  unsigned m = 0;
  int w = 0;
  std::vector<unsigned> hodge; // hodge[i] = h^{w-i}, i = 0..w

  FlagShape() = default;
  FlagShape(unsigned rank, int weight, std::vector<unsigned> numbers)
      : m(rank), w(weight), hodge(std::move(numbers)) {
    if (w < 0 || hodge.size() != static_cast<std::size_t>(w) + 1)
      fail(Errc::ShapeMismatch, "need one Hodge number per step w..0");
    unsigned total = std::accumulate(hodge.begin(), hodge.end(), 0u);
    if (total != m) fail(Errc::ShapeMismatch, "Hodge numbers must sum to the rank");
  }

  unsigned hodge_number(int p) const {
    if (p < 0 || p > w) return 0;
    return hodge[static_cast<std::size_t>(w - p)];
  }

  /// j_p = dim F^p = sum of h^q for q >= p.
  unsigned jump(int p) const {
    if (p > w) return 0;
    if (p < 0) p = 0;
    unsigned s = 0;
    for (int q = w; q >= p; --q) s += hodge_number(q);
    return s;
  }

  /// Shape of an opposed conjugate flag: Hodge numbers reversed.
  FlagShape reversed() const {
    auto rev = hodge;
    std::reverse(rev.begin(), rev.end());
    return FlagShape(m, w, rev);
  }

  friend bool operator==(const FlagShape& a, const FlagShape& b) {
    return a.m == b.m && a.w == b.w && a.hodge == b.hodge;
  }
  friend bool operator!=(const FlagShape& a, const FlagShape& b) { return !(a == b); }
};

/// A flag F^w ⊇ F^{w-1} ⊇ ... ⊇ F^0 = K^m with the step dimensions of its
/// shape. Steps outside [0, w] are implicitly 0 and K^m.
template <class K>
class Flag {
public:
  Flag(FlagShape shape, std::vector<Subspace<K>> steps) : shape_(std::move(shape)), steps_(std::move(steps)) {
    if (steps_.size() != static_cast<std::size_t>(shape_.w) + 1)
      fail(Errc::ShapeMismatch, "one subspace per filtration step w..0");
    for (int p = shape_.w; p >= 0; --p) {
      const auto& s = step(p);
      if (s.ambient() != shape_.m) fail(Errc::DimensionMismatch, "step ambient dimension");
      if (s.dim() != shape_.jump(p)) fail(Errc::ShapeMismatch, "step dimension vs Hodge numbers");
      if (p < shape_.w && !s.contains(step(p + 1))) fail(Errc::ShapeMismatch, "filtration is not nested");
    }
  }

  const FlagShape& shape() const { return shape_; }
  unsigned rank() const { return shape_.m; }
  int weight() const { return shape_.w; }

  /// F^p; p > w gives 0 and p < 0 gives K^m.
  Subspace<K> step(int p) const {
    if (p > shape_.w) return Subspace<K>(shape_.m);
    if (p < 0) return Subspace<K>::full(shape_.m);
    return steps_[static_cast<std::size_t>(shape_.w - p)];
  }

  /// Filtration level of a vector: the largest p with v in F^p; w+1 if v = 0.
  int level_of(const std::vector<K>& v) const {
    for (int p = shape_.w; p >= 0; --p)
      if (step(p).contains(v)) return p;
    fail(Errc::DimensionMismatch, "vector outside F^0 = K^m");
  }

  /// Adapted basis: columns ordered so F^p is spanned by the first j_p.
  Matrix<K> adapted_basis() const {
    Matrix<K> out(shape_.m, shape_.m, ScalarOps<K>::zero());
    std::vector<std::vector<K>> chosen;
    unsigned col = 0;
    for (int p = shape_.w; p >= 0; --p) {
      for (const auto& cand : step(p).basis()) {
        auto probe = chosen;
        probe.push_back(cand);
        if (Subspace<K>::span(shape_.m, probe).dim() == probe.size()) {
          chosen.push_back(cand);
          for (unsigned i = 0; i < shape_.m; ++i) out(i, col) = cand[i];
          ++col;
        }
      }
    }
    if (col != shape_.m) fail(Errc::ShapeMismatch, "could not complete adapted basis");
    return out;
  }

  friend bool operator==(const Flag& a, const Flag& b) {
    return a.shape_ == b.shape_ && a.steps_ == b.steps_;
  }
  friend bool operator!=(const Flag& a, const Flag& b) { return !(a == b); }

private:
  FlagShape shape_;
  std::vector<Subspace<K>> steps_; // index i = step w-i
};

/// The q map on points: F^k = span of the first j_k columns of M.
template <class K>
Flag<K> flag_from_matrix(const Matrix<K>& m, const FlagShape& shape) {
  if (m.rows() != shape.m || m.cols() != shape.m) fail(Errc::DimensionMismatch, "matrix vs shape rank");
  if (is_zero(det(m))) fail(Errc::SingularMatrix, "flag representative must be invertible");
  std::vector<Subspace<K>> steps;
  for (int p = shape.w; p >= 0; --p) {
    std::vector<std::vector<K>> gens;
    for (unsigned c = 0; c < shape.jump(p); ++c) gens.push_back(m.column(c));
    steps.push_back(Subspace<K>::span(shape.m, gens));
  }
  return Flag<K>(shape, std::move(steps));
}

/// The standard coordinate flag of a shape.
template <class K>
Flag<K> standard_flag(const FlagShape& shape) {
  return flag_from_matrix(Matrix<K>::identity(shape.m, ScalarOps<K>::zero(), ScalarOps<K>::one()), shape);
}

/// F^p ⊕ F_c^{w-p+1} = K^m for all p.
template <class K>
bool is_opposed(const Flag<K>& f, const Flag<K>& fc) {
  if (f.rank() != fc.rank() || f.weight() != fc.weight())
    fail(Errc::ShapeMismatch, "opposedness needs equal rank and weight");
  for (int p = 0; p <= f.weight() + 1; ++p) {
    auto a = f.step(p);
    auto b = fc.step(f.weight() - p + 1);
    if (a.dim() + b.dim() != f.rank()) return false;
    if ((a + b).dim() != f.rank()) return false;
  }
  return true;
}

/// Opposed pair together with the summands H^{p,w-p} = F^p ∩ F_c^{w-p}.
template <class K>
struct ConjugatePair {
  Flag<K> flag;
  Flag<K> conjugate;
  std::vector<Subspace<K>> summands; // index i: H^{w-i, i}, i = 0..w

  const Subspace<K>& summand(int p) const { // H^{p, w-p}
    if (p < 0 || p > flag.weight()) fail(Errc::ShapeMismatch, "summand index");
    return summands[static_cast<std::size_t>(flag.weight() - p)];
  }
};

template <class K>
ConjugatePair<K> conjugate_decomposition(const Flag<K>& f, const Flag<K>& fc) {
  if (!is_opposed(f, fc)) fail(Errc::NotOpposed, "filtrations are not opposed");
  std::vector<Subspace<K>> summands;
  unsigned total = 0;
  for (int p = f.weight(); p >= 0; --p) {
    auto h = intersect(f.step(p), fc.step(f.weight() - p));
    total += h.dim();
    summands.push_back(std::move(h));
  }
  if (total != f.rank()) fail(Errc::NotOpposed, "summands do not decompose K^m");
  return ConjugatePair<K>{f, fc, std::move(summands)};
}

/// Basis adapted to the conjugate decomposition: columns grouped by p
/// descending, h^p columns spanning H^{p,w-p}.
template <class K>
Matrix<K> graded_basis(const ConjugatePair<K>& pair) {
  unsigned m = pair.flag.rank();
  Matrix<K> out(m, m, ScalarOps<K>::zero());
  unsigned col = 0;
  for (int p = pair.flag.weight(); p >= 0; --p)
    for (const auto& v : pair.summand(p).basis()) {
      for (unsigned i = 0; i < m; ++i) out(i, col) = v[i];
      ++col;
    }
  if (col != m) fail(Errc::NotOpposed, "graded basis incomplete");
  return out;
}

} // namespace perjet

#endif
