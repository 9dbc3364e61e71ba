#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pskp/gf2e.hpp"

namespace pskp {

// Element of R_n = F_q[t]/(t^n), q = 2^e. Coefficients are stored lowest
// degree first; coeffs()[i] is the coefficient of t^i and there are exactly
// modulus_degree() of them. Values are immutable after construction.
class TruncPoly {
 public:
  TruncPoly(int field_degree, int modulus_degree);  // zero
  TruncPoly(int field_degree, int modulus_degree, std::vector<uint32_t> coeffs);

  static TruncPoly zero(int e, int n) { return TruncPoly(e, n); }
  static TruncPoly one(int e, int n);
  // c * t^k
  static TruncPoly monomial(int e, int n, uint32_t c, int k);

  int field_degree() const { return e_; }
  int modulus_degree() const { return n_; }
  const Gf2e& field() const { return Gf2e::get(e_); }
  const std::vector<uint32_t>& coeffs() const { return c_; }
  uint32_t coeff(int i) const { return i < n_ ? c_[i] : 0; }

  bool is_zero() const;
  bool is_unit() const { return c_[0] != 0; }
  // Index of the lowest nonzero coefficient; modulus_degree() if zero.
  int low_degree() const;

  TruncPoly add(const TruncPoly& o) const;
  TruncPoly mul(const TruncPoly& o) const;
  TruncPoly inv() const;  // throws std::domain_error unless unit
  // Multiply by t^k (degrees >= n are discarded).
  TruncPoly shift_up(int k) const;
  // Divide by t^k; requires the k lowest coefficients to vanish.
  TruncPoly shift_down(int k) const;
  // Keep coefficients of degree < k, zero the rest (same modulus).
  TruncPoly truncate(int k) const;
  // Reinterpret in R_m, m <= n, by dropping high coefficients.
  TruncPoly reduce(int m) const;

  bool operator==(const TruncPoly& o) const { return e_ == o.e_ && n_ == o.n_ && c_ == o.c_; }

  // "<modulus_degree>:<hex>,<hex>,..." with coefficients low degree first.
  std::string serialize() const;
  static TruncPoly parse(int field_degree, const std::string& s);

 private:
  void check_compat(const TruncPoly& o) const;
  int e_;
  int n_;
  std::vector<uint32_t> c_;
};

}  // namespace pskp
