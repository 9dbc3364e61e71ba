#include <random>

#include "doctest.h"
#include "pskp/instances.hpp"
#include "pskp/models.hpp"
#include "pskp/oracle.hpp"

using namespace pskp;

namespace {

std::vector<Mat2> lift_gens(int e, int depth) { return sl2_canonical_gens(e, depth); }

[[maybe_unused]] Portrait eval_word_on(const std::vector<Portrait>& gens, const Word::Ptr& w, int depth) {
  Portrait r(depth);
  for (int gi : w->flatten(1u << 22)) r = r.mul(gens[gi]);
  return r;
}

Mat2 eval_word_on(const std::vector<Mat2>& gens, const Word::Ptr& w, int e, int depth) {
  Mat2 r = Mat2::identity(e, depth);
  for (int gi : w->flatten(1u << 22)) r = r.mul(gens[gi]);
  return r;
}

}  // namespace

TEST_CASE("word dag flattening and lengths") {
  auto w0 = Word::letter(0);
  auto w1 = Word::letter(1);
  auto w = Word::concat({{w0, 2}, {w1, 1}});
  auto ww = Word::concat({{w, 3}, {w0, 1}});
  CHECK(ww->length() == 10);
  CHECK(ww->flatten() == std::vector<int>{0, 0, 1, 0, 0, 1, 0, 0, 1, 0});
  CHECK(Word::empty()->length() == 0);
  CHECK(Word::empty()->flatten().empty());
  auto big = Word::concat({{ww, 1u << 30}});
  CHECK_THROWS_AS(big->flatten(100), std::length_error);
}

TEST_CASE("navigation on SL2(F_2[t]/(t^4)), schedule 3 -> 4, exhaustive") {
  Sl2Instance inst(make_schedule(2, 3, 2, 4));
  auto gens = lift_gens(1, 4);
  CosetBfs<Sl2Instance> base(inst, gens, inst.coset_key_N1());
  CHECK(base.size() == 384);
  Navigator<Sl2Instance> nav(inst, base.strategy());

  // enumerate the whole quotient
  Sl2Model model{1, 4};
  auto ball = directed_ball(model, gens);
  CHECK(ball.size() == 3072);

  int count = 0;
  for (const auto& [key, entry] : ball.table) {
    Mat2 g = Mat2::parse(1, key);
    auto res = nav.run(g);
    REQUIRE(res.certified);
    // evaluation is exact in the quotient
    CHECK(res.eval == g);
    // re-evaluate the emitted word letter by letter
    if (count < 200) {
      Mat2 ev = eval_word_on(gens, res.word, 1, 4);
      CHECK(ev == g);
    }
    CHECK(res.length <= BigInt(7) * base.radius());
    ++count;
  }
  CHECK(count == 3072);
}

TEST_CASE("navigation certificates against exact BFS distances") {
  Sl2Instance inst(make_schedule(2, 3, 2, 4));
  auto gens = lift_gens(1, 4);
  CosetBfs<Sl2Instance> base(inst, gens, inst.coset_key_N1());
  Navigator<Sl2Instance> nav(inst, base.strategy());
  Sl2Model model{1, 4};
  auto ball = directed_ball(model, gens);
  std::mt19937_64 rng(41);
  int trials = 0;
  for (const auto& [key, entry] : ball.table) {
    if (rng() % 10) continue;
    Mat2 g = Mat2::parse(1, key);
    auto res = nav.run(g);
    CHECK(BigInt(entry.dist) <= res.length);
    CHECK(res.length <= res.bound);
    ++trials;
  }
  CHECK(trials > 100);
}

TEST_CASE("identity navigates to the empty word") {
  Sl2Instance inst(make_schedule(2, 3, 2, 4));
  auto gens = lift_gens(1, 4);
  CosetBfs<Sl2Instance> base(inst, gens, inst.coset_key_N1());
  Navigator<Sl2Instance> nav(inst, base.strategy());
  auto res = nav.run(inst.id());
  CHECK(res.word->is_empty());
  CHECK(res.certified);
}

TEST_CASE("mitm base behaves like bfs on a small quotient") {
  Sl2Instance inst(make_schedule(2, 3, 2, 4));
  auto gens = lift_gens(1, 4);
  MitmBase<Sl2Instance> mitm(inst, gens, inst.coset_key_N1(), 2, 12);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    Mat2 g = random_sl2(1, 4, rng);
    auto br = mitm.solve(g);
    Mat2 err = br.eval.inv().mul(g);
    CHECK(err.val() >= 3);  // agrees mod N_1 = K_3
    Mat2 ev = eval_word_on(gens, br.word, 1, 4);
    CHECK(ev == br.eval);
  }
  // identity resolves to the empty word
  auto br = mitm.solve(inst.id());
  CHECK(br.word->is_empty());
}

TEST_CASE("SL2 deep run with mitm base, beta1 = 9, depth 20") {
  Sl2Instance inst(make_schedule(2, 9, 4, 20));
  CHECK(inst.schedule().betas == std::vector<int>{9, 12, 16, 20});
  auto gens = lift_gens(1, 20);
  MitmBase<Sl2Instance> mitm(inst, gens, inst.coset_key_N1(), 6, 16);
  Navigator<Sl2Instance> nav(inst, mitm.strategy());
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    Mat2 g = random_sl2(1, 20, rng);
    auto res = nav.run(g);
    CHECK(res.certified);
    CHECK(res.eval == g);
  }
}

TEST_CASE("FG full-chain navigation in Gamma/Stab(4) and Gamma/Stab(5)") {
  auto ctx = std::make_shared<FgContext>(5);
  std::vector<Portrait> gens{ctx->a(), ctx->b()};
  std::mt19937_64 rng(44);

  for (int m : {4, 5}) {
    auto cm = std::make_shared<FgContext>(m);
    FgInstance inst(cm, FgInstance::Mode::Full, FgInstance::paper_levels_for_stab(m),
                    /*split=*/true);
    std::vector<Portrait> g2{cm->a(), cm->b()};
    CosetBfs<FgInstance> base(inst, g2, inst.coset_key_N1());
    CHECK(base.size() == 27);
    Navigator<FgInstance> nav(inst, base.strategy());
    for (int trial = 0; trial < 4; ++trial) {
      Portrait g = cm->sample_gamma(rng);
      auto res = nav.run(g);
      CHECK(res.eval == g);
      CHECK(res.length <= res.bound);
    }
  }
}

TEST_CASE("corrupted oracle is caught by the congruence assertion") {
  Sl2Instance bad(make_schedule(2, 3, 2, 4), /*corrupt=*/true);
  auto gens = lift_gens(1, 4);
  CosetBfs<Sl2Instance> base(bad, gens, bad.coset_key_N1());
  Navigator<Sl2Instance> nav(bad, base.strategy());
  std::mt19937_64 rng(45);
  bool caught = false;
  for (int trial = 0; trial < 40 && !caught; ++trial) {
    try {
      nav.run(random_sl2(1, 4, rng));
    } catch (const OracleCongruenceError&) {
      caught = true;
    }
  }
  CHECK(caught);
}

TEST_CASE("deep base refuses shallow requests") {
  Sl2Instance inst(make_schedule(2, 3, 2, 4));
  auto base = deep_base(inst);
  std::mt19937_64 rng(46);
  Mat2 deep = random_sl2_at_level(1, 4, 3, rng);
  auto br = base.solve(deep);
  CHECK(br.word->is_empty());
  CHECK_THROWS_AS(base.solve(random_sl2_at_level(1, 4, 1, rng)), BaseCaseError);
}
