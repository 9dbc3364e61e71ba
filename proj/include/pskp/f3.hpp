#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pskp {

// Dense linear algebra over F3. Vectors are std::vector<uint8_t> with
// entries in {0,1,2}.
using F3Vec = std::vector<uint8_t>;

inline uint8_t f3_add(uint8_t a, uint8_t b) { return static_cast<uint8_t>((a + b) % 3); }
inline uint8_t f3_sub(uint8_t a, uint8_t b) { return static_cast<uint8_t>((a + 3 - b) % 3); }
inline uint8_t f3_mul(uint8_t a, uint8_t b) { return static_cast<uint8_t>((a * b) % 3); }
inline uint8_t f3_neg(uint8_t a) { return static_cast<uint8_t>((3 - a) % 3); }
inline uint8_t f3_inv(uint8_t a) {
  if (a == 0) throw std::domain_error("f3: inverse of zero");
  return a;  // 1*1 = 1, 2*2 = 4 = 1
}
// Map {0,1,2} to the signed representative {0,1,-1}.
inline int f3_signed(uint8_t a) { return a == 2 ? -1 : a; }

inline void f3_axpy(F3Vec& y, uint8_t c, const F3Vec& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] = f3_add(y[i], f3_mul(c, x[i]));
}

// Row-echelon span with membership tests and coordinate solving.
class F3Space {
 public:
  explicit F3Space(size_t ambient) : ambient_(ambient) {}

  size_t ambient() const { return ambient_; }
  size_t dim() const { return rows_.size(); }

  // Add a vector to the span; returns true if the dimension grew.
  bool add(F3Vec v) {
    reduce(v);
    size_t p = pivot(v);
    if (p == ambient_) return false;
    uint8_t c = f3_inv(v[p]);
    for (auto& x : v) x = f3_mul(x, c);
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    // keep rows sorted by pivot for deterministic reduction
    for (size_t i = rows_.size(); i > 1 && pivots_[i - 1] < pivots_[i - 2]; --i) {
      std::swap(rows_[i - 1], rows_[i - 2]);
      std::swap(pivots_[i - 1], pivots_[i - 2]);
    }
    return true;
  }

  bool contains(F3Vec v) const {
    reduce(v);
    return pivot(v) == ambient_;
  }

  bool contains_space(const F3Space& other) const {
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

  const std::vector<F3Vec>& rows() const { return rows_; }

 private:
  void reduce(F3Vec& v) const {
    for (size_t i = 0; i < rows_.size(); ++i) {
      uint8_t c = v[pivots_[i]];
      if (c) f3_axpy(v, f3_neg(c), rows_[i]);
    }
  }
  size_t pivot(const F3Vec& v) const {
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i]) return i;
    return ambient_;
  }

  size_t ambient_;
  std::vector<F3Vec> rows_;
  std::vector<size_t> pivots_;
};

// Solves for the coefficients of `v` on `gens` modulo `space`: returns e
// with v - sum e_i gens_i in space, or nullopt if v is not in
// span(gens) + space. The coefficients are unique when the gens are
// independent modulo the space.
std::optional<F3Vec> f3_coords_mod(const std::vector<F3Vec>& gens, const F3Space& space, F3Vec v);

}  // namespace pskp
