#include "pskp/f3.hpp"

namespace pskp {

std::optional<F3Vec> f3_coords_mod(const std::vector<F3Vec>& gens, const F3Space& space, F3Vec v) {
  // Augmented elimination: rows are [vector | coefficient-on-gens], with
  // generator rows first so their pivots are preferred.
  size_t n = v.size();
  size_t g = gens.size();
  std::vector<F3Vec> rows;
  for (size_t i = 0; i < g; ++i) {
    F3Vec r = gens[i];
    r.resize(n + g, 0);
    r[n + i] = 1;
    rows.push_back(std::move(r));
  }
  for (const auto& s : space.rows()) {
    F3Vec r = s;
    r.resize(n + g, 0);
    rows.push_back(std::move(r));
  }
  std::vector<size_t> pivots;
  std::vector<F3Vec> echelon;
  for (auto& r : rows) {
    for (size_t i = 0; i < echelon.size(); ++i) {
      uint8_t c = r[pivots[i]];
      if (c) f3_axpy(r, f3_neg(c), echelon[i]);
    }
    size_t p = n;
    for (size_t i = 0; i < n; ++i)
      if (r[i]) { p = i; break; }
    if (p == n) continue;  // dependent; drop
    uint8_t c = f3_inv(r[p]);
    for (auto& x : r) x = f3_mul(x, c);
    pivots.push_back(p);
    echelon.push_back(std::move(r));
  }
  F3Vec w = v;
  w.resize(n + g, 0);
  for (size_t i = 0; i < echelon.size(); ++i) {
    uint8_t c = w[pivots[i]];
    if (c) f3_axpy(w, f3_neg(c), echelon[i]);
  }
  for (size_t i = 0; i < n; ++i)
    if (w[i]) return std::nullopt;
  F3Vec coeffs(g);
  // v reduced to zero means v = sum (-w_aug) combination; negate the tail.
  for (size_t i = 0; i < g; ++i) coeffs[i] = f3_neg(w[n + i]);
  return coeffs;
}

}  // namespace pskp
