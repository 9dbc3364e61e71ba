#pragma once

#include <array>
#include <random>
#include <vector>

#include "pskp/mat2.hpp"

namespace pskp {

// Deep congruence-level generators. All live in K_n (val >= n) and have
// det = 1 in char 2.
//   D_n(alpha) = [[1 + t^{2n} alpha, t^n     ], [t^n alpha, 1       ]]
//   E_n(alpha) = [[1 + t^n,          t^n alpha], [0,        (1+t^n)^{-1}]]
//   F_n(alpha) = [[(1+t^n)^{-1},     0        ], [t^n alpha, 1 + t^n ]]
Mat2 gen_D(int level, const TruncPoly& alpha);
Mat2 gen_E(int level, const TruncPoly& alpha);
Mat2 gen_F(int level, const TruncPoly& alpha);

// Square-approximation oracle: for z in K_{3n} returns (y1, y2, y3) in K_n
// with y1^2 y2^2 y3^2 == z mod t^{min(4n, modulus)}. Time linear in the
// modulus degree. Throws std::domain_error if val(z) < 3n.
std::array<Mat2, 3> square_approx(const Mat2& z, int n);

// Level schedule (alpha_n, beta_n) for the SL2 chain M_n = K_{alpha_n},
// N_n = K_{beta_n}, with A_n = 3 and k_n = 2. Valid schedules satisfy
//   (a) alpha_n + beta_n >= beta_{n+1}
//   (b) beta_n >= 3 alpha_n
//   (c) beta_{n+1} <= 2 beta_n
//   (d) beta_{n+1} <= 4 floor(beta_n / 3)   (square-oracle feasibility)
// and betas strictly increase.
struct Sl2Schedule {
  int q = 2;            // field order
  int depth = 0;        // working modulus degree (>= betas.back())
  std::vector<int> alphas;
  std::vector<int> betas;

  int steps() const { return static_cast<int>(betas.size()); }
  void validate() const;  // throws std::invalid_argument on violation

  std::string to_json() const;
  static Sl2Schedule from_json(const std::string& text);
};

// Integer schedule via beta' = min(4 floor(beta/3), beta + floor(beta/3)),
// alpha = floor(beta/3). beta1 = 9 is the least strictly growing start;
// beta1 in {4..8} stalls. beta1 = 3 admits exactly one refinement (3 -> 4).
// Throws std::invalid_argument when the recurrence stalls before `steps`.
Sl2Schedule make_schedule(int q, int beta1, int steps, int depth = 0);

// Elementary matrices E12(u) = [[1,u],[0,1]] and E21(u) = [[1,0],[u,1]].
Mat2 elem12(const TruncPoly& u);
Mat2 elem21(const TruncPoly& u);

// Canonical generating set: E12(c t^i), E21(c t^i) for i in {0,1} and c
// ranging over the F2-basis {1, w, w^2, ...} of F_q.
std::vector<Mat2> sl2_canonical_gens(int field_degree, int depth);

// Uniform-ish random element of SL2(R_depth) (seeded, deterministic).
Mat2 random_sl2(int field_degree, int depth, std::mt19937_64& rng);
// Random element of K_level (val >= level).
Mat2 random_sl2_at_level(int field_degree, int depth, int level, std::mt19937_64& rng);

// |SL2(F_q[t]/(t^m))| = (q^2 - 1) q^{3m-2}
unsigned long long sl2_order(int q, int m);

}  // namespace pskp
