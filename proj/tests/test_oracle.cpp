#include <sstream>

#include "doctest.h"
#include "pskp/instances.hpp"
#include "pskp/models.hpp"
#include "pskp/oracle.hpp"

using namespace pskp;

TEST_CASE("directed diameter of tiny groups") {
  CyclicModel c3{3};
  CHECK(directed_diameter(c3, {1}) == 2);
  // Gamma/Stab(1) = C3 with S = {a}
  FgModel fg1{1};
  CHECK(directed_diameter(fg1, {Portrait::gen_a(1)}) == 2);
  // adding inverses can only help
  CHECK(directed_diameter(c3, {1, 2}) <= directed_diameter(c3, {1}));
}

TEST_CASE("directed diameter of SL2 quotients") {
  Sl2Model m2{1, 2};
  auto gens = sl2_canonical_gens(1, 2);
  int d = directed_diameter(m2, gens, 10'000'000, sl2_order(2, 2));
  CHECK(d >= 3);
  Sl2Model m3{1, 3};
  auto ball = directed_ball(m3, sl2_canonical_gens(1, 3));
  CHECK(ball.size() == 384);
  // the table realizes shortest positive words
  for (const auto& [key, e] : ball.table) {
    auto letters = ball.word_for(key);
    CHECK(static_cast<int>(letters.size()) == e.dist);
    Mat2 g = Mat2::identity(1, 3);
    for (int gi : letters) g = g.mul(sl2_canonical_gens(1, 3)[gi]);
    CHECK(g.serialize() == key);
  }
}

TEST_CASE("non-generating set is reported") {
  Sl2Model m2{1, 2};
  std::vector<Mat2> bad{elem12(TruncPoly::one(1, 2))};
  CHECK_THROWS_AS(directed_diameter(m2, bad, 10'000'000, sl2_order(2, 2)), std::invalid_argument);
}

TEST_CASE("threshold errors") {
  FgModel deep{4};
  std::vector<Portrait> gens{Portrait::gen_a(4), Portrait::gen_b(4)};
  CHECK_THROWS_AS(directed_ball(deep, gens, 1000), ThresholdError);
}

TEST_CASE("ball cache round trips") {
  Sl2Model m2{1, 2};
  auto ball = directed_ball(m2, sl2_canonical_gens(1, 2));
  std::stringstream ss;
  ball.save(ss, "sl2 q=2 m=2 canonical");
  auto loaded = DirectedBall<Sl2Model>::load(ss, "sl2 q=2 m=2 canonical");
  REQUIRE(loaded.has_value());
  CHECK(loaded->size() == ball.size());
  CHECK(loaded->radius == ball.radius);
  std::stringstream ss2;
  ball.save(ss2, "sl2 q=2 m=2 canonical");
  CHECK_FALSE(DirectedBall<Sl2Model>::load(ss2, "some other descriptor").has_value());
}

TEST_CASE("verify_hypotheses passes on the SL2 instance") {
  Sl2Instance inst(make_schedule(2, 9, 4, 20));
  auto rep = verify_hypotheses(inst, 3, 200, 7);
  CHECK(rep.all_ok());
  CHECK(rep.levels.size() == 3);
  for (const auto& l : rep.levels) {
    CHECK(l.oracle_total == 200);
    CHECK(l.oracle_pass == 200);
  }
}

TEST_CASE("verify_hypotheses passes on the FG instance (small)") {
  auto ctx = std::make_shared<FgContext>(6);
  FgInstance inst(ctx, FgInstance::Mode::Paper, 8);
  auto rep = verify_hypotheses(inst, 7, 30, 8);
  CHECK(rep.all_ok());
}

TEST_CASE("verify_hypotheses detects a corrupted oracle") {
  Sl2Instance bad(make_schedule(2, 9, 4, 20), /*corrupt=*/true);
  auto rep = verify_hypotheses(bad, 3, 50, 9);
  CHECK_FALSE(rep.all_ok());
  bool iv_failed = false;
  for (const auto& l : rep.levels) iv_failed |= l.oracle_pass < l.oracle_total;
  CHECK(iv_failed);

  auto ctx = std::make_shared<FgContext>(6);
  FgInstance fbad(ctx, FgInstance::Mode::Paper, 8, false, /*corrupt=*/true);
  auto frep = verify_hypotheses(fbad, 7, 30, 10);
  CHECK_FALSE(frep.all_ok());
}
