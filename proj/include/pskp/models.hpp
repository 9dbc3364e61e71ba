#pragma once

#include "pskp/mat2.hpp"
#include "pskp/portrait.hpp"

namespace pskp {

// Finite quotient SL2(F_q[t]/(t^n)) as a group model for BFS/spectral code.
struct Sl2Model {
  using Elem = Mat2;
  int field_degree;
  int modulus;
  Elem id() const { return Mat2::identity(field_degree, modulus); }
  Elem mul(const Elem& x, const Elem& y) const { return x.mul(y); }
  Elem inv(const Elem& x) const { return x.inv(); }
  std::string key(const Elem& x) const { return x.serialize(); }
};

// Finite quotient Gamma/Stab(depth) of the Fabrykowski-Gupta group.
struct FgModel {
  using Elem = Portrait;
  int depth;
  Elem id() const { return Portrait(depth); }
  Elem mul(const Elem& x, const Elem& y) const { return x.mul(y); }
  Elem inv(const Elem& x) const { return x.inv(); }
  std::string key(const Elem& x) const { return x.serialize(); }
};

// Cyclic group Z/n for the toy examples.
struct CyclicModel {
  using Elem = int;
  int order;
  Elem id() const { return 0; }
  Elem mul(Elem x, Elem y) const { return (x + y) % order; }
  Elem inv(Elem x) const { return (order - x) % order; }
  std::string key(Elem x) const { return std::to_string(x); }
};

}  // namespace pskp
