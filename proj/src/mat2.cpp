#include "pskp/mat2.hpp"

#include <sstream>

namespace pskp {

Mat2::Mat2(TruncPoly a, TruncPoly b, TruncPoly c, TruncPoly d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_.field_degree() != b_.field_degree() || a_.field_degree() != c_.field_degree() ||
      a_.field_degree() != d_.field_degree())
    throw std::invalid_argument("mat2: field mismatch");
  if (a_.modulus_degree() != b_.modulus_degree() || a_.modulus_degree() != c_.modulus_degree() ||
      a_.modulus_degree() != d_.modulus_degree())
    throw std::invalid_argument("mat2: modulus mismatch");
}

Mat2 Mat2::identity(int e, int n) {
  return Mat2(TruncPoly::one(e, n), TruncPoly::zero(e, n), TruncPoly::zero(e, n), TruncPoly::one(e, n));
}

TruncPoly Mat2::det() const { return a_.mul(d_).add(b_.mul(c_)); }

bool Mat2::is_sl2() const {
  return det() == TruncPoly::one(field_degree(), modulus_degree());
}

Mat2 Mat2::mul(const Mat2& o) const {
  return Mat2(a_.mul(o.a_).add(b_.mul(o.c_)), a_.mul(o.b_).add(b_.mul(o.d_)),
              c_.mul(o.a_).add(d_.mul(o.c_)), c_.mul(o.b_).add(d_.mul(o.d_)));
}

Mat2 Mat2::inv() const {
  if (!is_sl2()) throw std::domain_error("mat2: inverse requires det = 1");
  return Mat2(d_, b_, c_, a_);
}

Mat2 Mat2::pow(uint64_t k) const {
  Mat2 r = identity(field_degree(), modulus_degree());
  Mat2 base = *this;
  while (k) {
    if (k & 1) r = r.mul(base);
    base = base.mul(base);
    k >>= 1;
  }
  return r;
}

Mat2 Mat2::reduce(int m) const {
  return Mat2(a_.reduce(m), b_.reduce(m), c_.reduce(m), d_.reduce(m));
}

bool Mat2::is_identity() const { return *this == identity(field_degree(), modulus_degree()); }

int Mat2::val() const {
  int n = modulus_degree();
  int e = field_degree();
  TruncPoly one = TruncPoly::one(e, n);
  int v = n;
  v = std::min(v, a_.add(one).low_degree());
  v = std::min(v, b_.low_degree());
  v = std::min(v, c_.low_degree());
  v = std::min(v, d_.add(one).low_degree());
  return v;
}

std::string Mat2::serialize() const {
  std::ostringstream os;
  os << a_.serialize() << ';' << b_.serialize() << ';' << c_.serialize() << ';' << d_.serialize();
  return os.str();
}

Mat2 Mat2::parse(int e, const std::string& s) {
  std::istringstream is(s);
  std::string tok;
  std::vector<TruncPoly> parts;
  while (std::getline(is, tok, ';')) parts.push_back(TruncPoly::parse(e, tok));
  if (parts.size() != 4) throw std::invalid_argument("mat2: expected four entries in " + s);
  return Mat2(parts[0], parts[1], parts[2], parts[3]);
}

Mat2 mat_comm(const Mat2& g, const Mat2& h) {
  return g.inv().mul(h.inv()).mul(g).mul(h);
}

}  // namespace pskp
