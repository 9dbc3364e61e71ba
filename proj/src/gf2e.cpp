#include "pskp/gf2e.hpp"

#include <array>
#include <bit>
#include <mutex>

namespace pskp {

uint64_t clmul(uint64_t a, uint64_t b) {
  uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

uint64_t clmod(uint64_t a, uint64_t m) {
  int dm = 63 - std::countl_zero(m);
  while (true) {
    if (a == 0) return 0;
    int da = 63 - std::countl_zero(a);
    if (da < dm) return a;
    a ^= m << (da - dm);
  }
}

bool Gf2e::is_irreducible(uint32_t poly) {
  int d = 31 - std::countl_zero(poly);
  if (d <= 0) return false;
  // reducible iff some factor of degree in [1, d/2] divides it
  for (uint32_t f = 2; f < (2u << (d / 2)); ++f)
    if (clmod(poly, f) == 0) return false;
  return true;
}

uint32_t Gf2e::least_irreducible(int e) {
  if (e < 1 || e > 16) throw std::invalid_argument("gf2e: degree out of range [1,16]");
  for (uint32_t p = 1u << e; p < (2u << e); ++p)
    if (is_irreducible(p)) return p;
  throw std::logic_error("gf2e: no irreducible found");  // unreachable
}

Gf2e::Gf2e(int e) : e_(e), mod_(least_irreducible(e)) {}

const Gf2e& Gf2e::get(int e) {
  static std::array<const Gf2e*, 17> cache{};
  static std::mutex mu;
  if (e < 1 || e > 16) throw std::invalid_argument("gf2e: degree out of range [1,16]");
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[e]) cache[e] = new Gf2e(e);
  return *cache[e];
}

uint32_t Gf2e::mul(uint32_t a, uint32_t b) const {
  return static_cast<uint32_t>(clmod(clmul(a, b), mod_));
}

uint32_t Gf2e::pow(uint32_t a, uint64_t k) const {
  uint32_t r = 1;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

uint32_t Gf2e::inv(uint32_t a) const {
  if (a == 0) throw std::domain_error("gf2e: inverse of zero");
  if (e_ == 1) return 1;
  return pow(a, order() - 2);
}

}  // namespace pskp
