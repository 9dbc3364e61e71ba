#include "doctest.h"
#include "pskp/models.hpp"
#include "pskp/sl2.hpp"
#include "pskp/spectral.hpp"

using namespace pskp;

TEST_CASE("C3 spectrum is {1, -1/2, -1/2}") {
  CyclicModel c3{3};
  auto rep = spectral_report(c3, {1});
  CHECK(rep.group_size == 3);
  CHECK(rep.valence == 2);
  REQUIRE(rep.eigenvalues.size() == 3);
  CHECK(rep.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.eigenvalues[1] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(rep.eigenvalues[2] == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(*rep.gap == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(rep.diam_undirected == 1);
  CHECK(rep.mixing_linf >= rep.diam_undirected);
  CHECK(*rep.gap >= rep.dsc_lower_bound);
}

TEST_CASE("trivial group mixes instantly") {
  CyclicModel c1{1};
  auto rep = spectral_report(c1, {0});
  CHECK(rep.mixing_linf == 0);
  CHECK(rep.diam_undirected == 0);
}

TEST_CASE("eigenvalues stay in [-1, 1] and the DSC bound holds") {
  Sl2Model m2{1, 2};
  auto gens = sl2_canonical_gens(1, 2);
  auto rep = spectral_report(m2, gens);
  CHECK(rep.group_size == 48);
  for (double ev : rep.eigenvalues) {
    CHECK(ev <= 1.0 + 1e-12);
    CHECK(ev >= -1.0 - 1e-12);
  }
  CHECK(*rep.gap >= rep.dsc_lower_bound);
  CHECK(rep.mixing_linf >= rep.diam_undirected);
  CHECK(rep.stochastic_drift <= 1e-12);
}

TEST_CASE("FG level-2 quotient") {
  FgModel m{2};
  auto rep = spectral_report(m, {Portrait::gen_a(2), Portrait::gen_b(2)});
  CHECK(rep.group_size == 81);
  CHECK(*rep.gap >= rep.dsc_lower_bound);
  CHECK(rep.mixing_linf >= rep.diam_undirected);
}

TEST_CASE("disconnected generator set is an error") {
  CyclicModel c6{6};
  CHECK_THROWS_AS(spectral_report(c6, {2}, 6), std::invalid_argument);
}

TEST_CASE("power iteration path agrees with the dense solve") {
  Sl2Model m2{1, 2};
  auto gens = sl2_canonical_gens(1, 2);
  auto dense = spectral_report(m2, gens);
  auto iter = spectral_report(m2, gens, {}, 1'000'000, /*dense_threshold=*/8);
  CHECK_FALSE(iter.dense_solve);
  CHECK(*iter.lambda2 == doctest::Approx(*dense.lambda2).epsilon(1e-6));
}
