#include <catch2/catch.hpp>

#include <perjet/tensor.hpp>

#include "test_support.hpp"

using namespace perjet;

namespace {

Matrix<Rat> alt2() {
  Matrix<Rat> q(2, 2, Rat(0));
  q(0, 1) = Rat(1);
  q(1, 0) = Rat(-1);
  return q;
}

} // namespace

TEST_CASE("dual filtration convention") {
  // V weight 1, F^1 = span(e1): F^0(V*) = span(e2*), F^{-1}(V*) = V*
  FlagShape sh(2, 1, {1, 1});
  auto f = standard_flag<Rat>(sh);

  Tensor<Rat> e2dual(TensorIndex{0, 1}, 2);
  e2dual.set({1}, Rat(1));
  auto r = induced_filtration_and_fmid(f, e2dual);
  CHECK(r.step == 0);

  Tensor<Rat> e1dual(TensorIndex{0, 1}, 2);
  e1dual.set({0}, Rat(1));
  r = induced_filtration_and_fmid(f, e1dual);
  CHECK(r.step == -1);
}

TEST_CASE("polarization membership in F^mid") {
  // alternating Q on K^2, any h=(1,1) flag: Q in F^mid always
  FlagShape sh(2, 1, {1, 1});
  TestRng rng(3);
  for (int iter = 0; iter < 10; ++iter) {
    auto m = random_invertible<Rat>(rng, 2, [](TestRng& g) { return random_rat(g, 3); });
    auto f = flag_from_matrix(m, sh);
    CHECK(in_fmid(f, form_as_tensor(alt2())));
  }

  // m=3, w=2, h=(1,1,1), Q = antidiag(1,1,1): Q in F^mid of the standard flag
  FlagShape sh3(3, 2, {1, 1, 1});
  auto f3 = standard_flag<Rat>(sh3);
  Matrix<Rat> q3(3, 3, Rat(0));
  q3(0, 2) = q3(1, 1) = q3(2, 0) = Rat(1);
  CHECK(in_fmid(f3, form_as_tensor(q3)));

  // symmetric Q = I with F^1 = span(e1): Q(e1,e1) = 1, not in F^mid
  auto fid = standard_flag<Rat>(sh);
  CHECK(!in_fmid(fid, form_as_tensor(Matrix<Rat>::identity(2, Rat(0), Rat(1)))));
}

TEST_CASE("induced step is superadditive under tensor product") {
  TestRng rng(91);
  FlagShape sh(3, 2, {1, 1, 1});
  for (int iter = 0; iter < 40; ++iter) {
    auto m = random_invertible<Rat>(rng, 3, [](TestRng& g) { return random_rat(g, 2); });
    auto f = flag_from_matrix(m, sh);
    auto mk = [&](TensorIndex idx) {
      Tensor<Rat> t(idx, 3);
      for (auto& c : t.data()) c = random_rat(rng, 2);
      return t;
    };
    TensorIndex ia{1, static_cast<unsigned>(rng.next() % 2)};
    TensorIndex ib{static_cast<unsigned>(rng.next() % 2), 1};
    auto u = mk(ia), v = mk(ib);
    auto su = induced_filtration_and_fmid(f, u);
    auto sv = induced_filtration_and_fmid(f, v);
    auto sp = induced_filtration_and_fmid(f, tensor_product(u, v));
    if (!su.zero && !sv.zero && !sp.zero) CHECK(sp.step >= su.step + sv.step);
  }
}

TEST_CASE("transport respects induced levels") {
  // transporting flag and tensor by the same g preserves the induced step
  TestRng rng(17);
  FlagShape sh(2, 1, {1, 1});
  for (int iter = 0; iter < 25; ++iter) {
    auto g = random_invertible<Rat>(rng, 2, [](TestRng& r2) { return random_rat(r2, 3); });
    auto f = standard_flag<Rat>(sh);
    auto fg = flag_from_matrix(g, sh);
    Tensor<Rat> t(TensorIndex{1, 1}, 2);
    for (auto& c : t.data()) c = random_rat(rng, 3);
    auto before = induced_filtration_and_fmid(f, t);
    auto after = induced_filtration_and_fmid(fg, tensor_transport(g, t));
    CHECK(before.zero == after.zero);
    if (!before.zero) CHECK(before.step == after.step);
  }
}

TEST_CASE("derivation action kills invariant tensors of the stabilizer") {
  // xi = E12 acting on Q alternating: derivation action vanishes iff xi in sp2
  auto q = form_as_tensor(alt2());
  Matrix<Rat> e12(2, 2, Rat(0));
  e12(0, 1) = Rat(1);
  auto dq = derivation_action(e12, q);
  // E12 is in sl2 = sp2, so it kills Q
  CHECK(dq.is_zero_tensor());

  Matrix<Rat> diag(2, 2, Rat(0));
  diag(0, 0) = Rat(1);
  diag(1, 1) = Rat(1);
  CHECK(!derivation_action(diag, q).is_zero_tensor()); // identity scales Q by -2
}

TEST_CASE("is_polarized agrees with membership of Q in F^mid") {
  TestRng rng(271);
  // m=2 alternating: every h=(1,1) flag is polarized
  FlagShape sh(2, 1, {1, 1});
  for (int iter = 0; iter < 10; ++iter) {
    auto f = flag_from_matrix(random_invertible<Rat>(rng, 2, [](TestRng& g) { return random_rat(g, 3); }), sh);
    CHECK(is_polarized(f, alt2()));
  }

  // m=3 weight-2 example with antidiagonal symmetric form
  FlagShape sh3(3, 2, {1, 1, 1});
  Matrix<Rat> q3(3, 3, Rat(0));
  q3(0, 2) = q3(1, 1) = q3(2, 0) = Rat(1);
  CHECK(is_polarized(standard_flag<Rat>(sh3), q3));

  // symmetric Q = I with F^1 = span(e1): fails
  CHECK(!is_polarized(standard_flag<Rat>(sh), Matrix<Rat>::identity(2, Rat(0), Rat(1))));

  // equivalence with Q in F^mid on random flags and forms
  for (int iter = 0; iter < 30; ++iter) {
    bool use3 = rng.next() % 2 == 0;
    FlagShape shape = use3 ? sh3 : sh;
    auto f = flag_from_matrix(
        random_invertible<Rat>(rng, shape.m, [](TestRng& g) { return random_rat(g, 2); }), shape);
    // random symmetric or alternating nondegenerate form
    Matrix<Rat> q(shape.m, shape.m, Rat(0));
    bool alt = !use3 && rng.next() % 2 == 0;
    do {
      auto raw = random_matrix<Rat>(rng, shape.m, shape.m, [](TestRng& g) { return random_rat(g, 2); });
      q = alt ? raw - raw.transpose() : raw + raw.transpose();
    } while (is_zero(det(q)));
    CHECK(is_polarized(f, q) == in_fmid(f, form_as_tensor(q)));
  }

  // degenerate and non-(anti)symmetric forms are rejected
  CHECK_THROWS_MATCHES(is_polarized(standard_flag<Rat>(sh), Matrix<Rat>(2, 2, Rat(0))), Error,
                       ErrcIs(Errc::DegenerateForm));
  Matrix<Rat> skewless(2, 2, Rat(0));
  skewless(0, 0) = Rat(1);
  skewless(0, 1) = Rat(1);
  skewless(1, 1) = Rat(1);
  CHECK_THROWS_MATCHES(is_polarized(standard_flag<Rat>(sh), skewless), Error, ErrcIs(Errc::DegenerateForm));
}
