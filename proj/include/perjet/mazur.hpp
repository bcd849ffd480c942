#ifndef PERJET_MAZUR_HPP
#define PERJET_MAZUR_HPP

#include <algorithm>
#include <vector>

#include "flag.hpp"
#include "matrix.hpp"
#include "prime_field.hpp"
#include "rational.hpp"

namespace perjet {

/// Free module over Z/p^k with a Frobenius matrix; input to the Mazur
/// filtration extraction. Precision k must exceed the weight so divisibility
/// by p^i is decidable for all i <= w.
struct FrobeniusModule {
  std::uint64_t p = 0;
  unsigned precision = 0; // k: arithmetic in Z/p^k
  unsigned rank = 0;
  int weight = 0;
  Matrix<Int> frobenius;
  FlagShape expected_shape;

  Int modulus() const {
    Int m = 1;
    for (unsigned i = 0; i < precision; ++i) m *= Int(static_cast<unsigned long>(p));
    return m;
  }
};

namespace detail_mazur {

inline Int normalize_mod(const Int& x, const Int& mod) {
  Int r = x % mod;
  if (sgn(r) < 0) r += mod;
  return r;
}

/// p-adic valuation capped at the precision; the zero class has valuation k.
inline unsigned val_capped(const Int& x, std::uint64_t p, unsigned k, const Int& mod) {
  Int r = normalize_mod(x, mod);
  if (sgn(r) == 0) return k;
  unsigned v = 0;
  Int ip(static_cast<unsigned long>(p));
  while (mpz_divisible_p(r.get_mpz_t(), ip.get_mpz_t())) {
    r /= ip;
    ++v;
    if (v >= k) break;
  }
  return v;
}

/// Inverse of a p-unit mod p^k by Hensel-free extended Euclid on Z.
inline Int unit_inverse(const Int& u, const Int& mod) {
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
  if (g != 1) fail(Errc::DivisionByZero, "not a unit mod p^k");
  return normalize_mod(s, mod);
}

struct Diagonalization {
  std::vector<unsigned> valuations; // a_l, capped at k
  Matrix<Int> u;                    // frobenius = u * diag(p^a) * v
  Matrix<Int> v_inv;                // inverse of v
};

/// Smith-style diagonalization over the chain ring Z/p^k: pivot on the entry
/// of least valuation, clear its row and column, repeat. Returns U and V^{-1}
/// with phi = U diag(p^{a_l}) V, both invertible mod p^k.
inline Diagonalization diagonalize(const FrobeniusModule& mod) {
  const unsigned m = mod.rank, k = mod.precision;
  const Int modulus = mod.modulus();
  const Int ip(static_cast<unsigned long>(mod.p));

  Matrix<Int> a = mod.frobenius;
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) a(i, j) = normalize_mod(a(i, j), modulus);

  Matrix<Int> u = Matrix<Int>::identity(m, Int(0), Int(1));
  Matrix<Int> vinv = Matrix<Int>::identity(m, Int(0), Int(1));

  // We maintain a = R * phi * C with R, C products of elementary matrices;
  // u accumulates R^{-1} (so phi = u * a * C^{-1}), vinv accumulates C.
  auto row_swap = [&](unsigned i, unsigned j) {
    for (unsigned c = 0; c < m; ++c) std::swap(a(i, c), a(j, c));
    for (unsigned c = 0; c < m; ++c) std::swap(u(c, i), u(c, j)); // u <- u * swap
  };
  auto col_swap = [&](unsigned i, unsigned j) {
    for (unsigned r2 = 0; r2 < m; ++r2) std::swap(a(r2, i), a(r2, j));
    for (unsigned r2 = 0; r2 < m; ++r2) std::swap(vinv(r2, i), vinv(r2, j)); // vinv <- vinv * swap
  };
  auto row_axpy = [&](unsigned dst, unsigned src, const Int& c) {
    // a_dst += c * a_src; u <- u * E^{-1} means u_col_src -= c * u_col_dst
    for (unsigned col = 0; col < m; ++col) a(dst, col) = normalize_mod(a(dst, col) + c * a(src, col), modulus);
    for (unsigned r2 = 0; r2 < m; ++r2) u(r2, src) = normalize_mod(u(r2, src) - c * u(r2, dst), modulus);
  };
  auto col_axpy = [&](unsigned dst, unsigned src, const Int& c) {
    for (unsigned r2 = 0; r2 < m; ++r2) a(r2, dst) = normalize_mod(a(r2, dst) + c * a(r2, src), modulus);
    for (unsigned r2 = 0; r2 < m; ++r2) vinv(r2, dst) = normalize_mod(vinv(r2, dst) + c * vinv(r2, src), modulus);
  };
  auto row_scale = [&](unsigned i, const Int& unit) {
    Int inv = unit_inverse(unit, modulus);
    for (unsigned c = 0; c < m; ++c) a(i, c) = normalize_mod(a(i, c) * unit, modulus);
    for (unsigned r2 = 0; r2 < m; ++r2) u(r2, i) = normalize_mod(u(r2, i) * inv, modulus);
  };

  std::vector<unsigned> vals(m, k);
  for (unsigned t = 0; t < m; ++t) {
    unsigned best_i = t, best_j = t, best_v = k;
    for (unsigned i = t; i < m; ++i)
      for (unsigned j = t; j < m; ++j) {
        unsigned v = val_capped(a(i, j), mod.p, k, modulus);
        if (v < best_v) {
          best_v = v;
          best_i = i;
          best_j = j;
        }
      }
    if (best_v >= k) break; // remaining block is zero mod p^k
    if (best_i != t) row_swap(t, best_i);
    if (best_j != t) col_swap(t, best_j);
    vals[t] = best_v;

    // scale the pivot to exactly p^v
    Int pv = 1;
    for (unsigned e = 0; e < best_v; ++e) pv *= ip;
    Int unit = a(t, t) / pv; // p-unit by minimality of the valuation
    row_scale(t, unit_inverse(unit, modulus));

    for (unsigned i = t + 1; i < m; ++i) {
      if (sgn(normalize_mod(a(i, t), modulus)) == 0) continue;
      Int c = -(a(i, t) / pv); // divisible: val >= pivot val
      row_axpy(i, t, c);
    }
    for (unsigned j = t + 1; j < m; ++j) {
      if (sgn(normalize_mod(a(t, j), modulus)) == 0) continue;
      Int c = -(a(t, j) / pv);
      col_axpy(j, t, c);
    }
  }
  return Diagonalization{vals, u, vinv};
}

inline Fp to_fp(const Int& x, std::uint64_t p) {
  Int r = x % Int(static_cast<unsigned long>(p));
  return Fp(r.get_si(), p);
}

/// Integer determinant by Laplace expansion; ranks here are tiny.
inline Int det_int(const Matrix<Int>& a) {
  std::size_t n = a.rows();
  if (n == 0) return Int(1);
  if (n == 1) return a(0, 0);
  Int acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(a(0, j)) == 0) continue;
    Matrix<Int> minor(n - 1, n - 1, Int(0));
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    Int term = a(0, j) * det_int(minor);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

} // namespace detail_mazur

struct MazurFiltrations {
  Flag<Fp> hodge;
  Flag<Fp> conjugate;
  std::vector<unsigned> valuations; // elementary divisor exponents
  unsigned det_valuation = 0;       // capped at the precision
  bool det_consistent = false;      // det valuation == sum of i * h^i
};

/// Mazur's formulas: F^i = phi^{-1}(p^i H) mod p and
/// F_c^{w-i} = (Im(phi) ∩ p^i H)/p^i mod p. With phi = U diag(p^{a_l}) V,
/// F^i is spanned mod p by the columns of V^{-1} with a_l >= i and F_c^{w-i}
/// by the columns of U with a_l <= i.
inline MazurFiltrations mazur_filtrations(const FrobeniusModule& mod) {
  if (mod.weight < 0) fail(Errc::ShapeMismatch, "negative weight");
  if (mod.precision < static_cast<unsigned>(mod.weight) + 1)
    fail(Errc::PrecisionTooLow, "need precision k >= w + 1");
  if (mod.frobenius.rows() != mod.rank || mod.frobenius.cols() != mod.rank)
    fail(Errc::ShapeMismatch, "frobenius rank");

  auto diag = detail_mazur::diagonalize(mod);
  const unsigned m = mod.rank;
  const int w = mod.weight;

  // computed Hodge numbers: h^i = #{l : a_l = i}
  std::vector<unsigned> hodge(static_cast<std::size_t>(w) + 1, 0);
  for (unsigned v : diag.valuations) {
    if (v > static_cast<unsigned>(w))
      fail(Errc::ShapeMismatch, "elementary divisor exponent " + std::to_string(v) + " exceeds the weight");
    hodge[static_cast<std::size_t>(w - static_cast<int>(v))] += 1;
  }
  FlagShape shape(m, w, hodge);
  if (!(shape == mod.expected_shape))
    fail(Errc::ShapeMismatch, "computed Hodge numbers differ from the expected shape");

  auto col_span = [&](const Matrix<Int>& mat, auto&& keep) {
    std::vector<std::vector<Fp>> gens;
    for (unsigned l = 0; l < m; ++l) {
      if (!keep(diag.valuations[l])) continue;
      std::vector<Fp> v;
      for (unsigned i = 0; i < m; ++i) v.push_back(detail_mazur::to_fp(mat(i, l), mod.p));
      gens.push_back(std::move(v));
    }
    return Subspace<Fp>::span(m, gens);
  };

  std::vector<Subspace<Fp>> fsteps, csteps;
  for (int i = w; i >= 0; --i)
    fsteps.push_back(col_span(diag.v_inv, [&](unsigned a) { return a >= static_cast<unsigned>(i); }));
  // conjugate: F_c^{w-i} spanned by U-columns with a_l <= i, i.e. step q has
  // columns with a_l <= w - q
  for (int q = w; q >= 0; --q)
    csteps.push_back(col_span(diag.u, [&](unsigned a) { return a <= static_cast<unsigned>(w - q); }));

  auto rev = hodge;
  std::reverse(rev.begin(), rev.end());
  unsigned dv = detail_mazur::val_capped(detail_mazur::det_int(mod.frobenius), mod.p, mod.precision, mod.modulus());
  unsigned expect_dv = 0;
  for (unsigned a : diag.valuations) expect_dv += a;
  // only decidable up to the working precision
  bool consistent = dv == std::min(expect_dv, mod.precision);
  return MazurFiltrations{Flag<Fp>(shape, fsteps), Flag<Fp>(FlagShape(m, w, rev), csteps), diag.valuations,
                          dv, consistent};
}

/// Ordinariness of a positive-characteristic point: the Hodge and conjugate
/// filtrations are opposed. Characteristic-zero inputs count as ordinary by
/// convention; callers working over Q should consult this constant instead of
/// calling is_ordinary.
inline constexpr bool kCharZeroIsOrdinary = true;

inline bool is_ordinary(const Flag<Fp>& f, const Flag<Fp>& fc) { return is_opposed(f, fc); }

enum class EigvecVerdict {
  Ok,
  NotAnEigenvector,
  ZeroReduction,
  ContainmentFails, // a corollary violation: genuine eigenvector outside F^k or F_c^k
};

inline const char* to_string(EigvecVerdict v) {
  switch (v) {
    case EigvecVerdict::Ok: return "ok";
    case EigvecVerdict::NotAnEigenvector: return "not an eigenvector";
    case EigvecVerdict::ZeroReduction: return "zero reduction";
    case EigvecVerdict::ContainmentFails: return "containment fails";
  }
  return "?";
}

/// For w = 2k' and phi v = p^{k'} v in Z/p^k, the reduction of v mod p must
/// lie in both F^{k'} and F_c^{k'}. The overload with explicit filtrations is
/// the test oracle: feeding it filtrations from tampered data exposes a
/// corollary violation that honest inputs can never produce (the containment
/// follows from the defining formulas themselves).
inline EigvecVerdict frobenius_eigvec_check(const FrobeniusModule& mod, const MazurFiltrations& filts,
                                            const std::vector<Int>& v, unsigned power) {
  if (mod.weight != static_cast<int>(2 * power)) fail(Errc::ShapeMismatch, "need weight w = 2k'");
  if (mod.precision <= static_cast<unsigned>(mod.weight)) fail(Errc::PrecisionTooLow, "need precision > w");
  if (v.size() != mod.rank) fail(Errc::DimensionMismatch, "vector length");
  const Int modulus = mod.modulus();

  std::vector<Fp> vp;
  bool zero = true;
  for (const auto& x : v) {
    auto r = detail_mazur::to_fp(x, mod.p);
    if (!is_zero(r)) zero = false;
    vp.push_back(r);
  }
  if (zero) return EigvecVerdict::ZeroReduction;

  Int scale = 1;
  for (unsigned e = 0; e < power; ++e) scale *= Int(static_cast<unsigned long>(mod.p));
  auto img = mod.frobenius.apply(v);
  for (unsigned i = 0; i < mod.rank; ++i)
    if (sgn(detail_mazur::normalize_mod(img[i] - scale * v[i], modulus)) != 0)
      return EigvecVerdict::NotAnEigenvector;

  bool in_f = filts.hodge.step(static_cast<int>(power)).contains(vp);
  bool in_fc = filts.conjugate.step(static_cast<int>(power)).contains(vp);
  return (in_f && in_fc) ? EigvecVerdict::Ok : EigvecVerdict::ContainmentFails;
}

inline EigvecVerdict frobenius_eigvec_check(const FrobeniusModule& mod, const std::vector<Int>& v,
                                            unsigned power) {
  if (mod.weight != static_cast<int>(2 * power)) fail(Errc::ShapeMismatch, "need weight w = 2k'");
  if (mod.precision <= static_cast<unsigned>(mod.weight)) fail(Errc::PrecisionTooLow, "need precision > w");
  return frobenius_eigvec_check(mod, mazur_filtrations(mod), v, power);
}

} // namespace perjet

#endif
