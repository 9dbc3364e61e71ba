#include <cmath>
#include <random>

#include "doctest.h"
#include "pskp/bounds.hpp"

using namespace pskp;

TEST_CASE("l_n bound: direct product evaluation") {
  // A = 3, k = 2, index 384, n = 3: 384 * 7 * 7 = 18816
  CHECK(bound_l(384, {3, 3}, {2, 2}) == 18816);
  // constant-parameter specialization 7^{n-1} |Gamma : N_1|
  BigInt expect = 384;
  std::vector<int> A, k;
  for (int n = 2; n <= 12; ++n) {
    A.push_back(3);
    k.push_back(2);
    expect *= 7;
    CHECK(bound_l(384, A, k) == expect);
  }
}

TEST_CASE("FG period constants") {
  auto c = exponent_constants({9, 18, 4, 6, 6, 3});
  CHECK(c.fg_c_tilde == 72272200);
  CHECK(c.fg_c_tilde_prime == 186200);
  CHECK(std::abs(c.sl2_C - 6.7641) < 1e-3);
  CHECK(std::abs(c.sl2_Cprime - 6.8188) < 1e-3);
  CHECK(std::abs(c.fg_C - 16.4716) < 1e-3);
  CHECK(std::abs(c.fg_Cprime - 12.0454) < 1e-3);
  // independent recomputation of the logarithm ratios
  CHECK(c.fg_C == doctest::Approx(std::log(72272200.0) / std::log(3.0)).epsilon(1e-12));
  CHECK(c.fg_Cprime == doctest::Approx(1.0 + std::log(186200.0) / std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("refined bound is never worse") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    int steps = 1 + static_cast<int>(rng() % 10);
    std::vector<int> A(steps), k(steps);
    for (int i = 0; i < steps; ++i) {
      A[i] = 1 + static_cast<int>(rng() % 20);
      k[i] = 1 + static_cast<int>(rng() % 4);
    }
    BigInt index = 1 + static_cast<long long>(rng() % 100000);
    int n0 = 1 + static_cast<int>(rng() % (steps + 2));
    CHECK(bound_L(index, A, k, n0) <= bound_l(index, A, k));
  }
  // with n0 >= n the two bounds coincide
  CHECK(bound_L(384, {3, 3, 3}, {2, 2, 2}, 10) == bound_l(384, {3, 3, 3}, {2, 2, 2}));
}

TEST_CASE("p-adic diameter bound") {
  CHECK(padic_bound(3, 9, 3) == 36);  // 9 (3^2 - 1) / 2
  CHECK(padic_bound(2, 4, 5) == 60);  // 4 (2^4 - 1)
  CHECK(padic_bound(5, 1, 1) == 0);
}

TEST_CASE("runtime bound evaluates the displayed formula") {
  // two steps, A = 3, k = 2, |S| = 2, index 3, f = 1:
  // 2^4 * 4 * 4 + (9 * 4 + 9) = 256 + 45
  BigInt v = bound_runtime(1, {3, 3}, {2, 2}, 2, 3);
  CHECK(v == 256 + 45);
  // scales linearly in f
  CHECK(bound_runtime(7, {3, 3}, {2, 2}, 2, 3) == 7 * (256 + 45));
  CHECK_THROWS_AS(bound_runtime(1, {3}, {2}, 2, BigInt("100000000000")), std::invalid_argument);
}
