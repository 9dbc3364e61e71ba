#pragma once

#include <string>

#include "pskp/truncpoly.hpp"

namespace pskp {

// 2x2 matrix over R_n = F_q[t]/(t^n), char 2. The group operations assume
// det = 1 (SL2); is_sl2() checks it.
class Mat2 {
 public:
  Mat2(TruncPoly a, TruncPoly b, TruncPoly c, TruncPoly d);

  static Mat2 identity(int e, int n);

  const TruncPoly& a() const { return a_; }
  const TruncPoly& b() const { return b_; }
  const TruncPoly& c() const { return c_; }
  const TruncPoly& d() const { return d_; }

  int field_degree() const { return a_.field_degree(); }
  int modulus_degree() const { return a_.modulus_degree(); }

  TruncPoly det() const;
  bool is_sl2() const;

  Mat2 mul(const Mat2& o) const;
  // Adjugate inverse; valid since det = 1 (char 2: adj = [[d,b],[c,a]]).
  Mat2 inv() const;
  Mat2 pow(uint64_t k) const;
  Mat2 reduce(int m) const;

  bool operator==(const Mat2& o) const = default;
  bool is_identity() const;

  // Largest m <= modulus_degree with g == I mod t^m (identity maps to the cap).
  int val() const;

  // Four TruncPoly serializations joined by ';' in order a,b,c,d.
  std::string serialize() const;
  static Mat2 parse(int field_degree, const std::string& s);

 private:
  TruncPoly a_, b_, c_, d_;
};

// [g,h] = g^{-1} h^{-1} g h
Mat2 mat_comm(const Mat2& g, const Mat2& h);

}  // namespace pskp
