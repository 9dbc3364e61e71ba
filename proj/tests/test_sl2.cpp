#include <random>
#include <set>

#include "doctest.h"
#include "pskp/models.hpp"
#include "pskp/oracle.hpp"
#include "pskp/sl2.hpp"

using namespace pskp;

namespace {

// All elements of SL2(F_q[t]/(t^n)) by closure, for exhaustive checks.
std::vector<Mat2> enumerate_sl2(int e, int n) {
  Sl2Model model{e, n};
  auto gens = sl2_canonical_gens(e, n);
  std::vector<Mat2> elems{model.id()};
  std::set<std::string> seen{model.key(elems[0])};
  for (size_t i = 0; i < elems.size(); ++i)
    for (const auto& s : gens) {
      Mat2 h = elems[i].mul(s);
      if (seen.insert(model.key(h)).second) elems.push_back(h);
    }
  return elems;
}

}  // namespace

TEST_CASE("deep generators match their defining matrices") {
  // D_1(0) over F2[t]/(t^4) = [[1, t], [0, 1]]
  Mat2 d = gen_D(1, TruncPoly::zero(1, 4));
  CHECK(d == Mat2(TruncPoly::one(1, 4), TruncPoly::monomial(1, 4, 1, 1), TruncPoly::zero(1, 4),
                  TruncPoly::one(1, 4)));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<uint32_t> cs(6);
    for (auto& c : cs) c = static_cast<uint32_t>(rng() % 4);
    TruncPoly alpha(2, 6, cs);
    int lvl = 1 + static_cast<int>(rng() % 2);
    CHECK(gen_D(lvl, alpha).is_sl2());
    CHECK(gen_E(lvl, alpha).is_sl2());
    CHECK(gen_F(lvl, alpha).is_sl2());
    CHECK(gen_D(lvl, alpha).val() >= lvl);
    CHECK(gen_E(lvl, alpha).val() >= lvl);
    CHECK(gen_F(lvl, alpha).val() >= lvl);
  }

  // val(F_2(1+t)) == 2, by inspecting the entries
  TruncPoly alpha(1, 8, {1, 1, 0, 0, 0, 0, 0, 0});
  CHECK(gen_F(2, alpha).val() == 2);
}

TEST_CASE("square approximation oracle") {
  SUBCASE("identity input gives the exact identity product") {
    Mat2 I = Mat2::identity(1, 6);
    auto ys = square_approx(I, 1);
    CHECK(ys[0] == gen_D(1, TruncPoly::zero(1, 6)));
    CHECK(ys[1] == gen_E(1, TruncPoly::zero(1, 6)));
    CHECK(ys[2] == gen_F(1, TruncPoly::zero(1, 6)));
    Mat2 prod = ys[0].mul(ys[0]).mul(ys[1]).mul(ys[1]).mul(ys[2]).mul(ys[2]);
    CHECK(prod == I);
  }

  SUBCASE("worked antidiagonal example at n = 1, modulus t^4") {
    // z = I + t^3 [[0,1],[1,0]]
    Mat2 z(TruncPoly::one(1, 4), TruncPoly::monomial(1, 4, 1, 3), TruncPoly::monomial(1, 4, 1, 3),
           TruncPoly::one(1, 4));
    REQUIRE(z.is_sl2());
    REQUIRE(z.val() == 3);
    auto ys = square_approx(z, 1);
    CHECK(ys[0] == gen_D(1, TruncPoly::zero(1, 4)));
    CHECK(ys[1] == gen_E(1, TruncPoly::one(1, 4)));
    CHECK(ys[2] == gen_F(1, TruncPoly::one(1, 4)));
    Mat2 prod = ys[0].mul(ys[0]).mul(ys[1]).mul(ys[1]).mul(ys[2]).mul(ys[2]);
    CHECK(prod.mul(z.inv()).val() >= 4);
  }

  SUBCASE("exhaustive over K_3/K_4 in SL2(F_2[t]/(t^4)) by brute force") {
    auto all = enumerate_sl2(1, 4);
    CHECK(all.size() == sl2_order(2, 4));
    int classes = 0;
    for (const auto& z : all) {
      if (z.val() < 3) continue;
      ++classes;
      auto ys = square_approx(z, 1);
      Mat2 prod = ys[0].mul(ys[0]).mul(ys[1]).mul(ys[1]).mul(ys[2]).mul(ys[2]);
      CHECK(prod.mul(z.inv()).val() >= 4);
      for (const auto& y : ys) CHECK(y.val() >= 1);
    }
    CHECK(classes == 8);
  }

  SUBCASE("precondition is enforced") {
    std::mt19937_64 rng(4);
    Mat2 shallow = random_sl2_at_level(1, 6, 2, rng);
    if (shallow.val() < 3) CHECK_THROWS_AS(square_approx(shallow, 1), std::domain_error);
  }

  SUBCASE("random deep inputs at n = 2") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      Mat2 z = random_sl2_at_level(2, 10, 6, rng);
      auto ys = square_approx(z, 2);
      Mat2 prod = ys[0].mul(ys[0]).mul(ys[1]).mul(ys[1]).mul(ys[2]).mul(ys[2]);
      CHECK(prod.mul(z.inv()).val() >= 8);
      for (const auto& y : ys) CHECK(y.val() >= 2);
    }
  }
}

TEST_CASE("schedules") {
  SUBCASE("beta1 = 9 grows along the documented recurrence") {
    Sl2Schedule s = make_schedule(2, 9, 9);
    CHECK(s.betas == std::vector<int>{9, 12, 16, 20, 24, 32, 40, 52, 68});
    CHECK(s.alphas == std::vector<int>{3, 4, 5, 6, 8, 10, 13, 17, 22});
    // independent recomputation of the recurrence
    for (size_t i = 0; i + 1 < s.betas.size(); ++i) {
      int b = s.betas[i];
      CHECK(s.betas[i + 1] == std::min(4 * (b / 3), b + b / 3));
    }
  }
  SUBCASE("beta1 = 3 admits exactly one refinement") {
    Sl2Schedule s = make_schedule(2, 3, 2);
    CHECK(s.betas == std::vector<int>{3, 4});
    CHECK_THROWS_AS(make_schedule(2, 3, 3), std::invalid_argument);
  }
  SUBCASE("beta1 in {4..8} stalls") {
    for (int b1 = 4; b1 <= 8; ++b1) CHECK_THROWS_AS(make_schedule(2, b1, 12), std::invalid_argument);
  }
  SUBCASE("json round trip") {
    Sl2Schedule s = make_schedule(2, 9, 5, 30);
    Sl2Schedule t = Sl2Schedule::from_json(s.to_json());
    CHECK(t.betas == s.betas);
    CHECK(t.alphas == s.alphas);
    CHECK(t.depth == 30);
  }
}

TEST_CASE("canonical generators generate the congruence quotients") {
  CHECK(enumerate_sl2(1, 2).size() == sl2_order(2, 2));  // 48
  CHECK(enumerate_sl2(1, 3).size() == sl2_order(2, 3));  // 384
  CHECK(enumerate_sl2(2, 2).size() == sl2_order(4, 2));  // 3840
}

TEST_CASE("group order formula matches exhaustive closure") {
  CHECK(sl2_order(2, 1) == 6);
  CHECK(sl2_order(2, 3) == 384);
  CHECK(sl2_order(2, 4) == 3072);
  CHECK(sl2_order(4, 1) == 60);
  CHECK(enumerate_sl2(1, 1).size() == 6);
  CHECK(enumerate_sl2(2, 1).size() == 60);
}
