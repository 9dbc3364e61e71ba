#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pskp {

// Arithmetic in GF(2^e) for 1 <= e <= 16. Elements are polynomials over F2
// packed into the low e bits of a uint32_t, reduced modulo a fixed
// irreducible of degree e. The modulus is the lexicographically least
// irreducible (smallest value as a bit string), so serialized values are
// stable across runs and machines.
class Gf2e {
 public:
  explicit Gf2e(int e);

  int degree() const { return e_; }
  uint32_t order() const { return 1u << e_; }
  uint32_t modulus() const { return mod_; }

  bool is_elem(uint32_t a) const { return a < order(); }

  static uint32_t add(uint32_t a, uint32_t b) { return a ^ b; }

  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t inv(uint32_t a) const;
  uint32_t pow(uint32_t a, uint64_t k) const;

  // Shared immutable instance per degree.
  static const Gf2e& get(int e);

  // Least irreducible polynomial of degree e over F2 (bit-packed, bit e set).
  static uint32_t least_irreducible(int e);
  static bool is_irreducible(uint32_t poly);

 private:
  int e_;
  uint32_t mod_;
};

// Carryless (XOR) polynomial product of two bit-packed F2 polynomials.
uint64_t clmul(uint64_t a, uint64_t b);
// Remainder of a modulo m, both bit-packed F2 polynomials, m != 0.
uint64_t clmod(uint64_t a, uint64_t m);

}  // namespace pskp
