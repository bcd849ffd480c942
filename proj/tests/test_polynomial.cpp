#include <catch2/catch.hpp>

#include <perjet/rational_function.hpp>

#include "test_support.hpp"

using namespace perjet;

namespace {

RationalFunction<Rat> rf(const Polynomial<Rat>& n, const Polynomial<Rat>& d) {
  return RationalFunction<Rat>(n, d);
}

} // namespace

TEST_CASE("gcd reduction gives canonical rational functions") {
  TestRng rng(31337);
  for (int iter = 0; iter < 40; ++iter) {
    unsigned nv = 1 + rng.next() % 2;
    auto a = random_polynomial<Rat>(rng, nv, 2, 3, [](TestRng& g) { return random_rat(g, 4); });
    auto b = random_polynomial<Rat>(rng, nv, 2, 3, [](TestRng& g) { return random_rat(g, 4); });
    auto c = random_polynomial<Rat>(rng, nv, 2, 3, [](TestRng& g) { return random_rat(g, 4); });
    if (b.is_zero_poly() || c.is_zero_poly()) continue;
    // a*c / b*c must reduce to the same canonical form as a / b
    CHECK(rf(a * c, b * c) == rf(a, b));
  }
}

TEST_CASE("rational function field axioms on random elements") {
  TestRng rng(55);
  for (int iter = 0; iter < 25; ++iter) {
    unsigned nv = 1 + rng.next() % 2;
    auto mk = [&](TestRng& g) {
      auto n = random_polynomial<Rat>(g, nv, 2, 2, [](TestRng& h) { return random_rat(h, 3); });
      auto d = random_polynomial<Rat>(g, nv, 1, 2, [](TestRng& h) { return random_rat(h, 3); });
      if (d.is_zero_poly()) d = Polynomial<Rat>::constant(nv, 1);
      return RationalFunction<Rat>(n, d);
    };
    auto x = mk(rng), y = mk(rng), z = mk(rng);
    CHECK((x + y) * z == x * z + y * z);
    CHECK(x * y == y * x);
    if (!y.is_zero_function()) CHECK(x / y * y == x);
  }
}

TEST_CASE("taylor_at matches the symbolic differentiation oracle") {
  // 1/(1-z) at 0, r=2 -> 1 + z + z^2
  auto z = Polynomial<Rat>::variable(1, 0);
  auto one = Polynomial<Rat>::constant(1, 1);
  RationalFunction<Rat> f(one, one - z);
  auto s = f.taylor_at({Rat(0)}, 2);
  CHECK(s.coefficient({0}) == 1);
  CHECK(s.coefficient({1}) == 1);
  CHECK(s.coefficient({2}) == 1);

  // 1/z at 0 is a pole
  RationalFunction<Rat> g(one, z);
  CHECK_THROWS_MATCHES(g.taylor_at({Rat(0)}, 1), Error, ErrcIs(Errc::PoleAtBasepoint));

  // 1/(l - l^2) at l=2, r=1 -> -1/2 + (3/4) u   (g(2) = -1/2, g'(2) = 3/4)
  RationalFunction<Rat> h(one, z - z * z);
  auto t = h.taylor_at({Rat(2)}, 1);
  CHECK(t.coefficient({0}) == Rat(-1, 2));
  CHECK(t.coefficient({1}) == Rat(3, 4));

  // generic check against derivative-based coefficients: coeff_q = f^{(q)}(s)/q!
  TestRng rng(777);
  for (int iter = 0; iter < 15; ++iter) {
    auto n = random_polynomial<Rat>(rng, 2, 2, 3, [](TestRng& g2) { return random_rat(g2, 3); });
    auto d = random_polynomial<Rat>(rng, 2, 1, 2, [](TestRng& g2) { return random_rat(g2, 2); });
    if (d.is_zero_poly()) continue;
    RationalFunction<Rat> q(n, d);
    std::vector<Rat> pt = {random_rat(rng, 2), random_rat(rng, 2)};
    if (q.has_pole_at(pt)) continue;
    auto series = q.taylor_at(pt, 3);
    for (const auto& mi : series.table().indices()) {
      Rat expect = q.derivative_multi(mi).evaluate(pt) / Rat(static_cast<long>(multinomial_denominator(mi)));
      CHECK(series.coefficient(mi) == expect);
    }
  }
}

TEST_CASE("taylor_at is multiplicative at common non-pole points") {
  TestRng rng(4242);
  for (int iter = 0; iter < 20; ++iter) {
    auto mk = [&](TestRng& g) {
      auto n = random_polynomial<Rat>(g, 1, 3, 3, [](TestRng& h) { return random_rat(h, 3); });
      auto d = random_polynomial<Rat>(g, 1, 2, 2, [](TestRng& h) { return random_rat(h, 2); });
      if (d.is_zero_poly()) d = Polynomial<Rat>::constant(1, 1);
      return RationalFunction<Rat>(n, d);
    };
    auto f = mk(rng), g = mk(rng);
    std::vector<Rat> pt = {random_rat(rng, 3)};
    if (f.has_pole_at(pt) || g.has_pole_at(pt)) continue;
    CHECK((f * g).taylor_at(pt, 3) == f.taylor_at(pt, 3) * g.taylor_at(pt, 3));
  }
}

TEST_CASE("reduction mod p of rational functions") {
  auto z = Polynomial<Rat>::variable(1, 0);
  auto one = Polynomial<Rat>::constant(1, 1);
  RationalFunction<Rat> f(one, z - z * z);
  auto fp = reduce_mod_p(f, 5);
  CHECK(fp.evaluate({Fp(2, 5)}) == Fp(1, 5) / (Fp(2, 5) - Fp(4, 5)));

  RationalFunction<Rat> bad(Polynomial<Rat>::constant(1, Rat(1, 5)), one);
  CHECK_THROWS_MATCHES(reduce_mod_p(bad, 5), Error, ErrcIs(Errc::NonIntegralCoefficient));

  // 1/(5z) canonicalizes to (1/5)/z, so the 5 shows up as a non-integral
  // numerator coefficient rather than a vanishing denominator.
  RationalFunction<Rat> bad_den(one, Polynomial<Rat>::constant(1, 5) * z);
  CHECK_THROWS_MATCHES(reduce_mod_p(bad_den, 5), Error, ErrcIs(Errc::NonIntegralCoefficient));
}

TEST_CASE("CharTooSmall guard") {
  CHECK_THROWS_MATCHES(require_order_invertible(CoefficientField::prime(3), 3), Error,
                       ErrcIs(Errc::CharTooSmall));
  CHECK_NOTHROW(require_order_invertible(CoefficientField::prime(5), 3));
  CHECK_NOTHROW(require_order_invertible(CoefficientField::rationals(), 100));

  // order-r operations over F_p with p <= r never return a value
  auto zp = Polynomial<Fp>::variable(1, 0);
  auto onep = Polynomial<Fp>::constant(1, Fp(1, 3));
  RationalFunction<Fp> fp3(onep, onep + zp);
  CHECK_THROWS_MATCHES(fp3.taylor_at({Fp(0, 3)}, 3), Error, ErrcIs(Errc::CharTooSmall));
  CHECK_NOTHROW(fp3.taylor_at({Fp(0, 3)}, 2));

  using SF = perjet::TruncatedSeries<Fp>;
  SF a = SF::constant(1, 5, Fp(1, 3));
  CHECK_THROWS_MATCHES(series_arithmetic(a, a, SeriesOp::Mul), Error, ErrcIs(Errc::CharTooSmall));
}
