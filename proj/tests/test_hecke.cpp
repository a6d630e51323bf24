#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "klcells/hecke.hpp"

using namespace klcells;

namespace {

LaurentPoly v(int n) { return LaurentPoly::v_power(n); }

LaurentPoly one() { return LaurentPoly::from_int(1); }

// random T-basis element supported on lengths <= max_len
HeckeElt random_elt(const BallTable& ball, std::mt19937_64& rng, int max_len) {
  int cap = 0;
  while (cap < ball.size() && ball.length(cap) <= max_len) ++cap;
  std::uniform_int_distribution<int> pick(0, cap - 1);
  std::uniform_int_distribution<int> exp(-3, 3);
  std::uniform_int_distribution<int> coeff(-2, 2);
  HeckeElt h(Basis::T);
  for (int i = 0; i < 3; ++i)
    h.add_term(pick(rng), LaurentPoly::monomial(Coeff(coeff(rng)), exp(rng)));
  return h;
}

}  // namespace

TEST_CASE("generator products in the standard basis") {
  BallTable ball(g2_affine_system(5, 1), 5);
  int s2 = ball.parse_word("s2");

  HeckeElt sq = t_mul(ball, HeckeElt::unit(Basis::T, s2),
                      HeckeElt::unit(Basis::T, s2));
  HeckeElt expect(Basis::T);
  expect.add_term(0, one());
  expect.add_term(s2, v(1) - v(-1));
  CHECK(sq == expect);

  CHECK(t_mul(ball, HeckeElt::unit(Basis::T, ball.parse_word("s1")),
              HeckeElt::unit(Basis::T, ball.parse_word("s3"))) ==
        HeckeElt::unit(Basis::T, ball.parse_word("s1.s3")));

  HeckeElt p = t_mul(ball, HeckeElt::unit(Basis::T, s2),
                     HeckeElt::unit(Basis::T, ball.parse_word("s2.s3")));
  HeckeElt expect2(Basis::T);
  expect2.add_term(ball.parse_word("s3"), one());
  expect2.add_term(ball.parse_word("s2.s3"), v(1) - v(-1));
  CHECK(p == expect2);
}

TEST_CASE("structure constants") {
  BallTable ball(g2_affine_system(5, 1), 6);
  int s2 = ball.parse_word("s2");
  int x = ball.parse_word("s1.s2");
  int y = ball.parse_word("s3.s2");  // lengths add: l(xy) = 4
  int xy = ball.mul(x, y);
  CHECK(ball.length(xy) == 4);
  CHECK(structure_f(ball, x, y, xy) == one());
  CHECK(structure_f(ball, s2, s2, 0) == one());
  CHECK(structure_f(ball, s2, s2, s2) == v(1) - v(-1));
}

TEST_CASE("bar involution on the algebra") {
  BallTable ball(g2_affine_system(5, 1), 9);
  CHECK(bar_involution(ball, HeckeElt::unit(Basis::T, 0)) ==
        HeckeElt::unit(Basis::T, 0));

  int s2 = ball.parse_word("s2");
  HeckeElt expect(Basis::T);
  expect.add_term(s2, one());
  expect.add_term(0, -(v(1) - v(-1)));
  CHECK(bar_involution(ball, HeckeElt::unit(Basis::T, s2)) == expect);

  std::mt19937_64 rng(4451);
  for (int trial = 0; trial < 30; ++trial) {
    HeckeElt h = random_elt(ball, rng, 4);
    CHECK(bar_involution(ball, bar_involution(ball, h)) == h);
  }
}

TEST_CASE("bar is a ring homomorphism") {
  BallTable ball(g2_affine_system(5, 1), 9);
  std::mt19937_64 rng(90210);
  for (int trial = 0; trial < 20; ++trial) {
    HeckeElt a = random_elt(ball, rng, 3), b = random_elt(ball, rng, 3);
    CHECK(bar_involution(ball, t_mul(ball, a, b)) ==
          t_mul(ball, bar_involution(ball, a), bar_involution(ball, b)));
  }
}

TEST_CASE("associativity on random triples") {
  BallTable ball(g2_affine_system(5, 1), 9);
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 15; ++trial) {
    HeckeElt a = random_elt(ball, rng, 3), b = random_elt(ball, rng, 3),
             c = random_elt(ball, rng, 3);
    CHECK(t_mul(ball, t_mul(ball, a, b), c) ==
          t_mul(ball, a, t_mul(ball, b, c)));
  }
}

TEST_CASE("inverse rows multiply back to the identity") {
  BallTable ball(g2_affine_system(5, 1), 6);
  for (int w = 0; w < ball.size(); ++w) {
    if (ball.length(w) > 3) break;
    HeckeElt prod =
        t_mul(ball, inv_t(ball, ball.invert(w)), HeckeElt::unit(Basis::T, w));
    CHECK(prod == HeckeElt::unit(Basis::T, 0));
  }
}

TEST_CASE("parabolic degree bounds") {
  BallTable ball(g2_affine_system(5, 1), 7);
  CHECK(compute_bound(ball, 0) == 0);
  CHECK(compute_bound(ball, 0b100) == 1);  // {s3}
  CHECK(compute_bound(ball, 0b110) == 3);  // {s2,s3}

  // for dihedral parabolics the bound equals L of the longest element
  CHECK(compute_bound(ball, 0b101) == 6);  // {s1,s3}, L(s1s3) = 5 + 1
  BallTable big(g2_affine_system(5, 1), 6);
  CHECK(compute_bound(big, 0b011) == 18);  // {s1,s2}, L((s1s2)^3) = 18
}

TEST_CASE("ball escape is an error, not truncation") {
  BallTable ball(g2_affine_system(5, 1), 3);
  int w = ball.parse_word("s1.s2.s1");
  CHECK_THROWS_MATCHES(
      t_mul(ball, HeckeElt::unit(Basis::T, w), HeckeElt::unit(Basis::T, w)),
      KlError, Catch::Matchers::Predicate<KlError>([](const KlError& e) {
        return e.code() == ErrorCode::SupportEscapesBall;
      }));
}

TEST_CASE("mixed-basis arithmetic is rejected") {
  HeckeElt t(Basis::T), c(Basis::C);
  t.add_term(0, one());
  c.add_term(0, one());
  CHECK_THROWS_AS(t + c, KlError);
  BallTable ball(g2_affine_system(5, 1), 2);
  CHECK_THROWS_AS(t_mul(ball, t, c), KlError);
}
