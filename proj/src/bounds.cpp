#include "pskp/bounds.hpp"

#include <stdexcept>

namespace pskp {

namespace {
void check_steps(const std::vector<int>& A, const std::vector<int>& k) {
  if (A.size() != k.size()) throw std::invalid_argument("bounds: A/k length mismatch");
  for (size_t i = 0; i < A.size(); ++i)
    if (A[i] < 1 || k[i] < 1) throw std::invalid_argument("bounds: parameters must be positive");
}
}  // namespace

BigInt bound_l(const BigInt& index_n1, const std::vector<int>& A, const std::vector<int>& k) {
  check_steps(A, k);
  BigInt b = index_n1;
  for (size_t i = 0; i < A.size(); ++i) b *= 1 + static_cast<long long>(A[i]) * k[i];
  return b;
}

BigInt bound_L(const BigInt& index_n1, const std::vector<int>& A, const std::vector<int>& k, int n0) {
  check_steps(A, k);
  if (n0 < 1) throw std::invalid_argument("bounds: n0 must be >= 1");
  size_t n = A.size() + 1;  // levels 0..n-1
  std::vector<BigInt> L(n);
  L[0] = index_n1;
  BigInt total = L[0];
  for (size_t i = 1; i < n; ++i) {
    BigInt window = 0;
    for (size_t j = (i >= static_cast<size_t>(n0)) ? i - n0 : 0; j < i; ++j) window += L[j];
    L[i] = BigInt(static_cast<long long>(A[i - 1]) * k[i - 1]) * window;
    total += L[i];
  }
  return total;
}

BigInt bound_runtime(const BigInt& f, const std::vector<int>& A, const std::vector<int>& k,
                     const BigInt& gens, const BigInt& index_n1) {
  check_steps(A, k);
  if (index_n1 > 100000)
    throw std::invalid_argument("bounds: runtime bound exponent too large to evaluate exactly");
  BigInt base = 1;
  unsigned long long exp = index_n1.convert_to<unsigned long long>() + 1;
  BigInt g = gens;
  while (exp) {
    if (exp & 1) base *= g;
    g *= g;
    exp >>= 1;
  }
  BigInt prod_all = 1;
  for (int a : A) prod_all *= a + 1;
  BigInt total = base * prod_all;
  size_t n1 = A.size();
  for (size_t i = 1; i <= n1; ++i) {
    BigInt term = static_cast<long long>(A[i - 1]) * k[i - 1] + 3;
    // paper indices j = i .. n-2, zero-based i-1 .. n1-2
    for (size_t j = i - 1; j + 2 <= n1; ++j) term *= A[j] + 1;
    total += term;
  }
  return f * total;
}

BigInt padic_bound(int p, const BigInt& index_h2, int n) {
  if (p < 2 || n < 1) throw std::invalid_argument("bounds: bad p-adic parameters");
  BigInt pw = 1;
  for (int i = 0; i < n - 1; ++i) pw *= p;
  return index_h2 * (pw - 1) / (p - 1);
}

ExponentConstants exponent_constants(const std::vector<int>& fg_period_A) {
  ExponentConstants c{};
  c.sl2_C = std::log(7.0) / std::log(4.0 / 3.0);
  c.sl2_Cprime = 2.0 + std::log(4.0) / std::log(4.0 / 3.0);
  c.fg_c_tilde = 1;
  c.fg_c_tilde_prime = 1;
  double log_ct = 0, log_ctp = 0;
  for (int a : fg_period_A) {
    c.fg_c_tilde *= 3 * a + 1;
    c.fg_c_tilde_prime *= a + 1;
    log_ct += std::log(3.0 * a + 1.0);
    log_ctp += std::log(a + 1.0);
  }
  c.fg_C = log_ct / std::log(3.0);
  c.fg_Cprime = 1.0 + log_ctp / std::log(3.0);
  return c;
}

}  // namespace pskp
