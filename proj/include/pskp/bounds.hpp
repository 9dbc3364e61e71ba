#pragma once

#include <cmath>
#include <vector>

#include "pskp/word.hpp"

namespace pskp {

// Diameter bound l_n = |Gamma : N_1| prod_{i=1}^{n-1} (1 + A_i k_i).
// A and k list the steps 1..n-1.
BigInt bound_l(const BigInt& index_n1, const std::vector<int>& A, const std::vector<int>& k);

// Refined bound: when M_{n+n0} <= N_n, diam^+ <= L_0 + ... + L_{n-1} with
// L_0 = |Gamma : N_1| and L_i = A_i k_i (L_{i-n0} + ... + L_{i-1}).
BigInt bound_L(const BigInt& index_n1, const std::vector<int>& A, const std::vector<int>& k, int n0);

// Navigation runtime bound
//   f ( C |S|^{|Gamma:N_1| + 1} prod_{i=1}^{n-1} (A_i + 1)
//       + sum_{i=1}^{n-1} (A_i k_i + 3) prod_{j=i}^{n-2} (A_j + 1) )
// with C = 1. The stated per-level recurrence is
// t_{n,i+1} = (A_i + 1) t_{n,i} + (A_i k_i + 3).
BigInt bound_runtime(const BigInt& f, const std::vector<int>& A, const std::vector<int>& k,
                     const BigInt& gens, const BigInt& index_n1);

// |Gamma : H_2| (p^{n-1} - 1) / (p - 1)
BigInt padic_bound(int p, const BigInt& index_h2, int n);

struct ExponentConstants {
  double sl2_C;        // log 7 / log(4/3)
  double sl2_Cprime;   // 2 + log 4 / log(4/3)
  double fg_C;         // log(prod(3 A_r + 1)) / log 3
  double fg_Cprime;    // 1 + log(prod(A_r + 1)) / log 3
  BigInt fg_c_tilde;        // prod over one period of (3 A_r + 1)
  BigInt fg_c_tilde_prime;  // prod over one period of (A_r + 1)
};

// Computed from one period of FG table values (A_r for r = 1..6).
ExponentConstants exponent_constants(const std::vector<int>& fg_period_A);

}  // namespace pskp
