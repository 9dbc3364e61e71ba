#include <random>

#include "doctest.h"
#include "pskp/gf2e.hpp"
#include "pskp/mat2.hpp"
#include "pskp/sl2.hpp"
#include "pskp/truncpoly.hpp"

using namespace pskp;

TEST_CASE("least irreducible polynomials") {
  CHECK(Gf2e::least_irreducible(1) == 0b10u);
  CHECK(Gf2e::least_irreducible(2) == 0b111u);
  CHECK(Gf2e::least_irreducible(3) == 0b1011u);
  CHECK(Gf2e::least_irreducible(4) == 0b10011u);
  // brute-force leastness for small degrees
  for (int e = 2; e <= 8; ++e) {
    uint32_t m = Gf2e::least_irreducible(e);
    CHECK(Gf2e::is_irreducible(m));
    for (uint32_t p = 1u << e; p < m; ++p) CHECK_FALSE(Gf2e::is_irreducible(p));
  }
}

TEST_CASE("field axioms in GF(4) and GF(16)") {
  for (int e : {2, 4}) {
    const Gf2e& f = Gf2e::get(e);
    for (uint32_t a = 0; a < f.order(); ++a) {
      if (a) CHECK(f.mul(a, f.inv(a)) == 1);
      for (uint32_t b = 0; b < f.order(); ++b) {
        CHECK(f.mul(a, b) == f.mul(b, a));
        for (uint32_t c = 0; c < f.order(); ++c) {
          CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
          CHECK(f.mul(a, Gf2e::add(b, c)) == Gf2e::add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("truncated polynomial ring basics") {
  // (1+t)^-1 = 1+t+t^2 in F2[t]/(t^3)
  TruncPoly p(1, 3, {1, 1, 0});
  TruncPoly inv = p.inv();
  CHECK(inv == TruncPoly(1, 3, {1, 1, 1}));
  CHECK(p.mul(inv) == TruncPoly::one(1, 3));

  // t * t^2 = 0 by truncation
  CHECK(TruncPoly::monomial(1, 3, 1, 1).mul(TruncPoly::monomial(1, 3, 1, 2)).is_zero());

  // inverse of 1 + t + t^3 in F2[t]/(t^5), checked by direct multiplication
  TruncPoly q(1, 5, {1, 1, 0, 1, 0});
  CHECK(q.mul(q.inv()) == TruncPoly::one(1, 5));

  CHECK_THROWS_AS(TruncPoly::monomial(1, 4, 1, 1).inv(), std::domain_error);
  CHECK_THROWS_AS(TruncPoly::one(1, 3).add(TruncPoly::one(1, 4)), std::invalid_argument);
}

TEST_CASE("truncated polynomial inversion over GF(4)") {
  std::mt19937_64 rng(7);
  const Gf2e& f = Gf2e::get(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<uint32_t> cs(6);
    for (auto& c : cs) c = static_cast<uint32_t>(rng() % f.order());
    cs[0] = 1 + static_cast<uint32_t>(rng() % (f.order() - 1));
    TruncPoly p(2, 6, cs);
    CHECK(p.mul(p.inv()) == TruncPoly::one(2, 6));
  }
}

TEST_CASE("serialization round trips bit-exactly") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    int e = 1 + static_cast<int>(rng() % 4);
    int n = 1 + static_cast<int>(rng() % 8);
    std::vector<uint32_t> cs(n);
    for (auto& c : cs) c = static_cast<uint32_t>(rng() % Gf2e::get(e).order());
    TruncPoly p(e, n, cs);
    CHECK(TruncPoly::parse(e, p.serialize()) == p);
  }
  std::mt19937_64 rng2(100);
  for (int trial = 0; trial < 50; ++trial) {
    Mat2 g = random_sl2(2, 5, rng2);
    CHECK(Mat2::parse(2, g.serialize()) == g);
  }
}

TEST_CASE("matrix group operations") {
  Mat2 I = Mat2::identity(1, 4);
  CHECK(I.inv() == I);
  // [[1,t],[0,1]] is an involution in char 2
  Mat2 u = elem12(TruncPoly::monomial(1, 4, 1, 1));
  CHECK(u.inv() == u);
  CHECK(u.mul(u) == I);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10000; ++trial) {
    Mat2 g = random_sl2(1, 5, rng);
    REQUIRE(g.is_sl2());
    CHECK(g.mul(g.inv()) == Mat2::identity(1, 5));
  }
}

TEST_CASE("valuation and the congruence filtration") {
  Mat2 I = Mat2::identity(1, 6);
  CHECK(I.val() == 6);
  // diag(1+t, (1+t)^-1) deviates first at t^1
  TruncPoly u = TruncPoly::one(1, 6).add(TruncPoly::monomial(1, 6, 1, 1));
  Mat2 g(u, TruncPoly::zero(1, 6), TruncPoly::zero(1, 6), u.inv());
  CHECK(g.val() == 1);

  std::mt19937_64 rng(2);
  SUBCASE("val(gh) >= min(val g, val h)") {
    for (int trial = 0; trial < 500; ++trial) {
      Mat2 x = random_sl2_at_level(1, 8, 1 + static_cast<int>(rng() % 3), rng);
      Mat2 y = random_sl2_at_level(1, 8, 1 + static_cast<int>(rng() % 3), rng);
      CHECK(x.mul(y).val() >= std::min(x.val(), y.val()));
    }
  }
  SUBCASE("commutators add valuations: [K_n, K_m] in K_{n+m}") {
    for (int trial = 0; trial < 500; ++trial) {
      int n = 1 + static_cast<int>(rng() % 3), m = 1 + static_cast<int>(rng() % 3);
      Mat2 x = random_sl2_at_level(1, 8, n, rng);
      Mat2 y = random_sl2_at_level(1, 8, m, rng);
      CHECK(mat_comm(x, y).val() >= std::min(x.val() + y.val(), 8));
    }
  }
  SUBCASE("squares double valuations, exactly I + t^2n X^2") {
    for (int trial = 0; trial < 500; ++trial) {
      int n = 1 + static_cast<int>(rng() % 3);
      Mat2 g2 = random_sl2_at_level(1, 8, n, rng);
      CHECK(g2.mul(g2).val() >= std::min(2 * g2.val(), 8));
    }
  }
  SUBCASE("power-commutator law: val((gh)^2 g^-2) >= min(n+m, 2m)") {
    for (int trial = 0; trial < 500; ++trial) {
      int n = 1 + static_cast<int>(rng() % 3), m = 1 + static_cast<int>(rng() % 3);
      Mat2 g2 = random_sl2_at_level(1, 10, n, rng);
      Mat2 h = random_sl2_at_level(1, 10, m, rng);
      Mat2 gh = g2.mul(h);
      Mat2 lhs = gh.mul(gh).mul(g2.inv()).mul(g2.inv());
      CHECK(lhs.val() >= std::min(std::min(g2.val() + h.val(), 2 * h.val()), 10));
    }
  }
}

TEST_CASE("random GF(4) matrices behave") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    Mat2 g = random_sl2(2, 4, rng);
    REQUIRE(g.is_sl2());
    CHECK(g.mul(g.inv()).is_identity());
  }
}
