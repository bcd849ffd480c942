#include <catch2/catch.hpp>

#include <perjet/jet.hpp>

#include "test_support.hpp"

using namespace perjet;

namespace {

using S = TruncatedSeries<Rat>;
using RF = RationalFunction<Rat>;

RF poly_rf(const Polynomial<Rat>& p) { return RF::from_polynomial(p); }

std::vector<RF> random_poly_map(TestRng& rng, unsigned from_vars, unsigned to_vars, unsigned deg) {
  std::vector<RF> g;
  for (unsigned i = 0; i < to_vars; ++i)
    g.push_back(poly_rf(random_polynomial<Rat>(rng, from_vars, deg, 4, [](TestRng& r) { return random_rat(r, 3); })));
  return g;
}

Jet<Rat> random_jet(TestRng& rng, unsigned d, unsigned r, unsigned k) {
  std::vector<S> cs;
  for (unsigned i = 0; i < k; ++i) cs.push_back(random_series(rng, d, r, [](TestRng& g) { return random_rat(g, 3); }));
  return Jet<Rat>(d, r, std::move(cs));
}

} // namespace

TEST_CASE("jet composition pinned examples") {
  // identity map leaves the jet unchanged
  TestRng rng(5);
  auto j = random_jet(rng, 2, 3, 2);
  std::vector<RF> ident = {RF::variable(2, 0), RF::variable(2, 1)};
  CHECK(jet_compose_map(ident, j) == j);

  // g(x) = x^2 on x(t) = 1 + t at r = 2 -> 1 + 2t + t^2
  auto x = Polynomial<Rat>::variable(1, 0);
  S xt = S::constant(1, 2, 1) + S::variable(1, 2, 0);
  Jet<Rat> j1(1, 2, {xt});
  auto out = jet_compose_map({poly_rf(x * x)}, j1);
  CHECK(out.coord(0) == xt * xt);

  // g(x,y) = xy on j = (t1, t2) -> t1 t2
  auto gx = Polynomial<Rat>::variable(2, 0) * Polynomial<Rat>::variable(2, 1);
  Jet<Rat> j2(2, 2, {S::variable(2, 2, 0), S::variable(2, 2, 1)});
  auto out2 = jet_compose_map({poly_rf(gx)}, j2);
  CHECK(out2.coord(0) == S::variable(2, 2, 0) * S::variable(2, 2, 1));
}

TEST_CASE("chain-rule route agrees with direct substitution") {
  TestRng rng(99);
  for (int iter = 0; iter < 30; ++iter) {
    unsigned d = 1 + rng.next() % 2, r = rng.next() % 5, k = 1 + rng.next() % 2, l = 1 + rng.next() % 2;
    auto j = random_jet(rng, d, r, k);
    auto g = random_poly_map(rng, k, l, 3);
    CHECK(jet_compose_map(g, j) == jet_compose_chain_rule(g, j));
  }
  // also through rational maps with denominators
  for (int iter = 0; iter < 15; ++iter) {
    unsigned d = 1 + rng.next() % 2, r = rng.next() % 4;
    auto j = random_jet(rng, d, r, 1);
    auto num = random_polynomial<Rat>(rng, 1, 2, 3, [](TestRng& g2) { return random_rat(g2, 3); });
    auto den = random_polynomial<Rat>(rng, 1, 2, 2, [](TestRng& g2) { return random_rat(g2, 2); });
    if (den.is_zero_poly()) continue;
    RF f(num, den);
    if (f.has_pole_at(j.basepoint())) continue;
    CHECK(jet_compose_map({f}, j) == jet_compose_chain_rule({f}, j));
  }
}

TEST_CASE("jet composition is functorial") {
  TestRng rng(123);
  for (int iter = 0; iter < 25; ++iter) {
    unsigned d = 1 + rng.next() % 2, r = rng.next() % 5;
    auto j = random_jet(rng, d, r, 2);
    auto h = random_poly_map(rng, 2, 2, 2);
    auto g = random_poly_map(rng, 2, 2, 2);
    // g∘h as polynomial map composition
    std::vector<Polynomial<Rat>> hp;
    for (auto& f : h) hp.push_back(f.numerator()); // h is polynomial by construction
    std::vector<RF> gh;
    for (auto& f : g) gh.push_back(f.substitute(hp));
    CHECK(jet_compose_map(gh, j) == jet_compose_map(g, jet_compose_map(h, j)));
  }
}

TEST_CASE("jet reparametrization") {
  // v: t -> (t, 0) restricts a 2-parameter jet along the first axis
  TestRng rng(6);
  auto j = random_jet(rng, 2, 3, 2);
  std::vector<S> v = {S::variable(1, 3, 0), S(1, 3)};
  auto restricted = jet_reparametrize(v, j);
  CHECK(restricted.dim() == 1);
  for (unsigned i = 0; i < 2; ++i)
    for (unsigned deg = 0; deg <= 3; ++deg)
      CHECK(restricted.coord(i).coefficient({deg}) == j.coord(i).coefficient({deg, 0}));

  // v: t -> t^2 on a + bt + ct^2 gives a + bt^2
  S poly(1, 2);
  poly.set_coefficient({0}, 7);
  poly.set_coefficient({1}, 3);
  poly.set_coefficient({2}, -2);
  Jet<Rat> j1(1, 2, {poly});
  S t2 = S::variable(1, 2, 0) * S::variable(1, 2, 0);
  auto rep = jet_reparametrize({t2}, j1);
  S expect(1, 2);
  expect.set_coefficient({0}, 7);
  expect.set_coefficient({2}, 3);
  CHECK(rep.coord(0) == expect);

  // v = 0 gives the constant jet at the basepoint
  auto zero_rep = jet_reparametrize({S(1, 3), S(1, 3)}, random_jet(rng, 2, 3, 2));
  CHECK(jet_classify(zero_rep).constant);

  // contravariant functoriality: (v∘v')* = v'* ∘ v*
  for (int iter = 0; iter < 20; ++iter) {
    auto jj = random_jet(rng, 2, 3, 2);
    auto mk_inner = [&](TestRng& g) {
      auto s = random_series(g, 2, 3, [](TestRng& h) { return random_rat(h, 2); });
      s.set_coefficient({0, 0}, 0);
      return s;
    };
    std::vector<S> v1 = {mk_inner(rng), mk_inner(rng)};
    std::vector<S> v2 = {mk_inner(rng), mk_inner(rng)};
    // v1∘v2 computed by substitution
    std::vector<S> comp = {series_substitute(v1[0], v2), series_substitute(v1[1], v2)};
    CHECK(jet_reparametrize(comp, jj) == jet_reparametrize(v2, jet_reparametrize(v1, jj)));
  }
}

TEST_CASE("jet classification") {
  // constant jet
  auto c = Jet<Rat>::constant(2, 2, {Rat(3), Rat(-1)});
  auto cls = jet_classify(c);
  CHECK(cls.constant);
  CHECK(!cls.nondegenerate);

  // independent linear parts
  Jet<Rat> good(2, 2, {S::variable(2, 2, 0), S::variable(2, 2, 1)});
  cls = jet_classify(good);
  CHECK(!cls.constant);
  CHECK(cls.nondegenerate);

  // dependent linear parts
  S a = S::variable(2, 2, 0) + Rat(2) * S::variable(2, 2, 1);
  Jet<Rat> bad(2, 2, {a, S(2, 2)});
  cls = jet_classify(bad);
  CHECK(!cls.constant);
  CHECK(!cls.nondegenerate);

  // r = 0 jets are nondegenerate by convention
  CHECK(jet_classify(Jet<Rat>::constant(2, 0, {Rat(1)})).nondegenerate);

  // constancy is preserved by any composition
  TestRng rng(8);
  for (int iter = 0; iter < 10; ++iter) {
    auto g = random_poly_map(rng, 2, 2, 3);
    CHECK(jet_classify(jet_compose_map(g, c)).constant);
  }
}

TEST_CASE("composition rejects poles and small characteristic") {
  auto x = Polynomial<Rat>::variable(1, 0);
  RF f(Polynomial<Rat>::constant(1, 1), x);
  Jet<Rat> j0(1, 2, {S::variable(1, 2, 0)}); // basepoint 0
  CHECK_THROWS_MATCHES(jet_compose_map({f}, j0), Error, ErrcIs(Errc::PoleAtBasepoint));

  using SF = TruncatedSeries<Fp>;
  SF tp = SF::variable(1, 3, 0);
  SF cp = SF::constant(1, 3, Fp(1, 3));
  Jet<Fp> jp(1, 3, {cp + tp});
  RationalFunction<Fp> idp = RationalFunction<Fp>::variable(1, 0);
  CHECK_THROWS_MATCHES(jet_compose_map<Fp>({idp}, jp), Error, ErrcIs(Errc::CharTooSmall));
}
