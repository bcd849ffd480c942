#ifndef PERJET_TENSOR_HPP
#define PERJET_TENSOR_HPP

#include <optional>
#include <vector>

#include "flag.hpp"
#include "matrix.hpp"

namespace perjet {

/// Type of the space V^{a,b} = V^{⊗a} ⊗ (V*)^{⊗b}.
struct TensorIndex {
  unsigned a = 0, b = 0;

  unsigned slots() const { return a + b; }
  std::size_t ambient_dim(unsigned m) const {
    std::size_t n = 1;
    for (unsigned s = 0; s < slots(); ++s) n *= m;
    return n;
  }
  friend bool operator==(const TensorIndex& x, const TensorIndex& y) { return x.a == y.a && x.b == y.b; }
};

/// Dense element of V^{a,b}. Slot order: the a covariant slots first, then the
/// b dual slots; the flat index is lexicographic in the slot indices.
template <class K>
class Tensor {
public:
  Tensor(TensorIndex idx, unsigned m)
      : idx_(idx), m_(m), data_(idx.ambient_dim(m), ScalarOps<K>::zero()) {}
  Tensor(TensorIndex idx, unsigned m, const K& zero) : idx_(idx), m_(m), data_(idx.ambient_dim(m), zero) {}
  Tensor(TensorIndex idx, unsigned m, std::vector<K> data) : idx_(idx), m_(m), data_(std::move(data)) {
    if (data_.size() != idx_.ambient_dim(m_)) fail(Errc::DimensionMismatch, "tensor coefficient count");
  }

  const TensorIndex& index() const { return idx_; }
  unsigned rank() const { return m_; }
  const std::vector<K>& data() const { return data_; }
  std::vector<K>& data() { return data_; }

  std::size_t flat(const std::vector<unsigned>& slots) const {
    std::size_t f = 0;
    for (unsigned s : slots) f = f * m_ + s;
    return f;
  }
  const K& at(const std::vector<unsigned>& slots) const { return data_[flat(slots)]; }
  void set(const std::vector<unsigned>& slots, const K& v) { data_[flat(slots)] = v; }

  bool is_zero_tensor() const {
    for (const auto& c : data_)
      if (!is_zero(c)) return false;
    return true;
  }

  friend Tensor operator+(const Tensor& x, const Tensor& y) {
    x.check(y);
    Tensor r = x;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += y.data_[i];
    return r;
  }
  friend Tensor operator*(const K& c, const Tensor& x) {
    Tensor r = x;
    for (auto& v : r.data_) v = c * v;
    return r;
  }
  friend bool operator==(const Tensor& x, const Tensor& y) {
    return x.idx_ == y.idx_ && x.m_ == y.m_ && x.data_ == y.data_;
  }

  /// Tensor product: covariant slots concatenate, dual slots concatenate.
  friend Tensor tensor_product(const Tensor& x, const Tensor& y) {
    if (x.m_ != y.m_) fail(Errc::DimensionMismatch, "mixed ranks");
    TensorIndex idx{x.idx_.a + y.idx_.a, x.idx_.b + y.idx_.b};
    Tensor out(idx, x.m_);
    std::vector<unsigned> sx(x.idx_.slots()), sy(y.idx_.slots()), so(idx.slots());
    x.for_each_slot([&](const std::vector<unsigned>& ex, const K& cx) {
      if (is_zero(cx)) return;
      y.for_each_slot([&](const std::vector<unsigned>& ey, const K& cy) {
        if (is_zero(cy)) return;
        std::vector<unsigned> eo(idx.slots());
        for (unsigned s = 0; s < x.idx_.a; ++s) eo[s] = ex[s];
        for (unsigned s = 0; s < y.idx_.a; ++s) eo[x.idx_.a + s] = ey[s];
        for (unsigned s = 0; s < x.idx_.b; ++s) eo[x.idx_.a + y.idx_.a + s] = ex[x.idx_.a + s];
        for (unsigned s = 0; s < y.idx_.b; ++s) eo[x.idx_.a + y.idx_.a + x.idx_.b + s] = ey[y.idx_.a + s];
        out.data_[out.flat(eo)] += cx * cy;
      });
    });
    return out;
  }

  template <class F>
  void for_each_slot(F&& fn) const {
    std::vector<unsigned> slots(idx_.slots(), 0);
    for (std::size_t f = 0; f < data_.size(); ++f) {
      std::size_t rem = f;
      for (unsigned s = idx_.slots(); s-- > 0;) {
        slots[s] = static_cast<unsigned>(rem % m_);
        rem /= m_;
      }
      fn(slots, data_[f]);
    }
  }

private:
  TensorIndex idx_;
  unsigned m_;
  std::vector<K> data_;

  void check(const Tensor& o) const {
    if (!(idx_ == o.idx_) || m_ != o.m_) fail(Errc::DimensionMismatch, "tensor shapes differ");
  }
};

/// A bilinear form Q seen as an element of V^{0,2}: Q = sum Q_ij e*_i ⊗ e*_j.
template <class K>
Tensor<K> form_as_tensor(const Matrix<K>& q) {
  unsigned m = static_cast<unsigned>(q.rows());
  Tensor<K> t(TensorIndex{0, 2}, m);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) t.set({i, j}, q(i, j));
  return t;
}

template <class K>
Tensor<K> vector_as_tensor(const std::vector<K>& v) {
  unsigned m = static_cast<unsigned>(v.size());
  Tensor<K> t(TensorIndex{1, 0}, m);
  for (unsigned i = 0; i < m; ++i) t.set({i}, v[i]);
  return t;
}

/// Apply g slotwise: g on covariant slots, g^{-T} on dual slots.
template <class K>
Tensor<K> tensor_transport(const Matrix<K>& g, const Tensor<K>& t) {
  unsigned m = t.rank();
  if (g.rows() != m || g.cols() != m) fail(Errc::DimensionMismatch, "transport matrix rank");
  Matrix<K> ginvt = field_inverse(g).transpose();
  Tensor<K> out(t.index(), m);
  t.for_each_slot([&](const std::vector<unsigned>& e, const K& c) {
    if (is_zero(c)) return;
    // distribute c * prod over slots of the matrix column e[s]
    std::vector<unsigned> target(t.index().slots(), 0);
    distribute(t, g, ginvt, e, c, 0, target, out);
  });
  return out;
}

namespace detail_tensor {
// nothing; kept for potential expansion
}

template <class K>
void distribute(const Tensor<K>& t, const Matrix<K>& g, const Matrix<K>& ginvt,
                const std::vector<unsigned>& e, const K& c, unsigned s, std::vector<unsigned>& target,
                Tensor<K>& out) {
  if (s == t.index().slots()) {
    out.data()[out.flat(target)] += c;
    return;
  }
  const Matrix<K>& mat = s < t.index().a ? g : ginvt;
  for (unsigned i = 0; i < t.rank(); ++i) {
    K f = mat(i, e[s]);
    if (is_zero(f)) continue;
    target[s] = i;
    K cf = c * f;
    distribute(t, g, ginvt, e, cf, s + 1, target, out);
  }
}

/// Derivation action of xi ∈ End(K^m): sum over covariant slots of xi applied
/// there, minus xi^T on each dual slot.
template <class K>
Tensor<K> derivation_action(const Matrix<K>& xi, const Tensor<K>& t) {
  unsigned m = t.rank();
  Tensor<K> out(t.index(), m);
  t.for_each_slot([&](const std::vector<unsigned>& e, const K& c) {
    if (is_zero(c)) return;
    for (unsigned s = 0; s < t.index().slots(); ++s) {
      bool dual = s >= t.index().a;
      for (unsigned i = 0; i < m; ++i) {
        // covariant slot: (xi v)_i = xi_{i,e_s} v_{e_s};
        // dual slot: (-xi^T phi)_i = -xi_{e_s,i} phi_{e_s}
        K f = dual ? -xi(e[s], i) : xi(i, e[s]);
        if (is_zero(f)) continue;
        auto e2 = e;
        e2[s] = i;
        out.data()[out.flat(e2)] += f * c;
      }
    }
  });
  return out;
}

/// Filtration levels of the adapted basis vectors of a flag: lv[i] is the
/// largest p with column i of the adapted matrix in F^p.
template <class K>
std::vector<int> adapted_levels(const Flag<K>& f) {
  std::vector<int> lv(f.rank());
  unsigned col = 0;
  for (int p = f.weight(); p >= 0; --p)
    for (unsigned k = 0; k < f.shape().hodge_number(p); ++k) lv[col++] = p;
  return lv;
}

/// Level of a monomial slot tuple under the induced filtration: covariant
/// slots contribute lv, dual slots contribute -lv (F^i V* annihilates
/// F^{-i+1} V).
inline long monomial_level(const std::vector<unsigned>& slots, const TensorIndex& idx,
                           const std::vector<int>& lv) {
  long s = 0;
  for (unsigned k = 0; k < idx.a; ++k) s += lv[slots[k]];
  for (unsigned k = 0; k < idx.b; ++k) s -= lv[slots[idx.a + k]];
  return s;
}

struct InducedStep {
  bool zero = false;  // the zero tensor lies in every step
  long step = 0;      // largest i with v ∈ F^i(V^{a,b}) otherwise
  bool in_fmid = false;
};

/// Largest induced-filtration step containing v, and membership in F^mid.
/// The induced weight of V^{a,b} is w(a-b); F^mid is the middle step for even
/// induced weight and 0 for odd induced weight.
template <class K>
InducedStep induced_filtration_and_fmid(const Flag<K>& f, const Tensor<K>& v) {
  if (v.rank() != f.rank()) fail(Errc::DimensionMismatch, "tensor rank vs flag rank");
  Matrix<K> adapted = f.adapted_basis();
  Matrix<K> inv = field_inverse(adapted);
  // coordinates of v in the adapted basis: covariant slots transform by P^{-1},
  // dual slots by P^T; that is tensor_transport with g = P^{-1}.
  Tensor<K> vv = tensor_transport(inv, v);
  auto lv = adapted_levels(f);

  InducedStep out;
  long w_ind = static_cast<long>(f.weight()) * (static_cast<long>(v.index().a) - static_cast<long>(v.index().b));
  bool first = true;
  long minlev = 0;
  vv.for_each_slot([&](const std::vector<unsigned>& slots, const K& c) {
    if (is_zero(c)) return;
    long lev = monomial_level(slots, v.index(), lv);
    if (first || lev < minlev) minlev = lev;
    first = false;
  });
  if (first) {
    out.zero = true;
    out.in_fmid = true;
    return out;
  }
  out.step = minlev;
  if (w_ind % 2 != 0)
    out.in_fmid = false; // F^mid = 0 in odd induced weight
  else
    out.in_fmid = minlev >= w_ind / 2;
  return out;
}

/// Membership v ∈ F^mid(V^{a,b}).
template <class K>
bool in_fmid(const Flag<K>& f, const Tensor<K>& v) {
  return induced_filtration_and_fmid(f, v).in_fmid;
}

/// Polarization condition Q(F^p, F^{w-p+1}) = 0 for all p. Q must be
/// nondegenerate and either symmetric or alternating. Equivalent to
/// Q ∈ F^mid of the induced filtration on V^{0,2}.
template <class K>
bool is_polarized(const Flag<K>& f, const Matrix<K>& q) {
  if (q.rows() != f.rank() || q.cols() != f.rank()) fail(Errc::DimensionMismatch, "form rank vs flag rank");
  if (is_zero(det(q))) fail(Errc::DegenerateForm, "polarization must be nondegenerate");
  bool symmetric = q == q.transpose();
  bool alternating = q == -q.transpose();
  if (!symmetric && !alternating) fail(Errc::DegenerateForm, "polarization must be symmetric or alternating");
  for (int p = 0; p <= f.weight() + 1; ++p) {
    auto a = f.step(p).basis();
    auto b = f.step(f.weight() - p + 1).basis();
    for (const auto& u : a)
      for (const auto& v : b) {
        K acc = ScalarOps<K>::zero();
        for (unsigned i = 0; i < f.rank(); ++i)
          for (unsigned j = 0; j < f.rank(); ++j) acc += u[i] * q(i, j) * v[j];
        if (!is_zero(acc)) return false;
      }
  }
  return true;
}

} // namespace perjet

#endif
