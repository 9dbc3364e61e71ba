#include "pskp/truncpoly.hpp"

#include <sstream>

namespace pskp {

TruncPoly::TruncPoly(int e, int n) : e_(e), n_(n), c_(n, 0) {
  if (n <= 0) throw std::invalid_argument("truncpoly: modulus degree must be positive");
  Gf2e::get(e);  // validates e
}

TruncPoly::TruncPoly(int e, int n, std::vector<uint32_t> coeffs) : e_(e), n_(n), c_(std::move(coeffs)) {
  if (n <= 0) throw std::invalid_argument("truncpoly: modulus degree must be positive");
  const Gf2e& f = Gf2e::get(e);
  if (static_cast<int>(c_.size()) != n)
    throw std::invalid_argument("truncpoly: coefficient count != modulus degree");
  for (uint32_t c : c_)
    if (!f.is_elem(c)) throw std::invalid_argument("truncpoly: coefficient outside field");
}

TruncPoly TruncPoly::one(int e, int n) {
  TruncPoly p(e, n);
  p.c_[0] = 1;
  return p;
}

TruncPoly TruncPoly::monomial(int e, int n, uint32_t c, int k) {
  TruncPoly p(e, n);
  if (k < n) p.c_[k] = c;
  if (!Gf2e::get(e).is_elem(c)) throw std::invalid_argument("truncpoly: coefficient outside field");
  return p;
}

bool TruncPoly::is_zero() const {
  for (uint32_t c : c_)
    if (c) return false;
  return true;
}

int TruncPoly::low_degree() const {
  for (int i = 0; i < n_; ++i)
    if (c_[i]) return i;
  return n_;
}

void TruncPoly::check_compat(const TruncPoly& o) const {
  if (e_ != o.e_) throw std::invalid_argument("truncpoly: field mismatch");
  if (n_ != o.n_) throw std::invalid_argument("truncpoly: modulus mismatch");
}

TruncPoly TruncPoly::add(const TruncPoly& o) const {
  check_compat(o);
  TruncPoly r(e_, n_);
  for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] ^ o.c_[i];
  return r;
}

TruncPoly TruncPoly::mul(const TruncPoly& o) const {
  check_compat(o);
  const Gf2e& f = field();
  TruncPoly r(e_, n_);
  for (int i = 0; i < n_; ++i) {
    if (!c_[i]) continue;
    for (int j = 0; j + i < n_; ++j) {
      if (!o.c_[j]) continue;
      r.c_[i + j] ^= f.mul(c_[i], o.c_[j]);
    }
  }
  return r;
}

TruncPoly TruncPoly::inv() const {
  if (!is_unit()) throw std::domain_error("truncpoly: inverse of a non-unit");
  const Gf2e& f = field();
  // Solve self * v = 1 coefficient by coefficient.
  TruncPoly v(e_, n_);
  uint32_t u0 = f.inv(c_[0]);
  v.c_[0] = u0;
  for (int k = 1; k < n_; ++k) {
    uint32_t s = 0;
    for (int i = 1; i <= k; ++i) s ^= f.mul(coeff(i), v.c_[k - i]);
    v.c_[k] = f.mul(u0, s);  // char 2: -s == s
  }
  return v;
}

TruncPoly TruncPoly::shift_up(int k) const {
  TruncPoly r(e_, n_);
  for (int i = 0; i + k < n_; ++i) r.c_[i + k] = c_[i];
  return r;
}

TruncPoly TruncPoly::shift_down(int k) const {
  for (int i = 0; i < k && i < n_; ++i)
    if (c_[i]) throw std::domain_error("truncpoly: shift_down of nonzero low coefficients");
  TruncPoly r(e_, n_);
  for (int i = k; i < n_; ++i) r.c_[i - k] = c_[i];
  return r;
}

TruncPoly TruncPoly::truncate(int k) const {
  TruncPoly r(e_, n_);
  for (int i = 0; i < k && i < n_; ++i) r.c_[i] = c_[i];
  return r;
}

TruncPoly TruncPoly::reduce(int m) const {
  if (m > n_) throw std::invalid_argument("truncpoly: reduce to larger modulus");
  TruncPoly r(e_, m);
  for (int i = 0; i < m; ++i) r.c_[i] = c_[i];
  return r;
}

std::string TruncPoly::serialize() const {
  std::ostringstream os;
  os << n_ << ':';
  for (int i = 0; i < n_; ++i) {
    if (i) os << ',';
    os << std::hex << c_[i] << std::dec;
  }
  return os.str();
}

TruncPoly TruncPoly::parse(int e, const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("truncpoly: missing ':' in " + s);
  int n = std::stoi(s.substr(0, colon));
  std::vector<uint32_t> cs;
  std::string rest = s.substr(colon + 1);
  std::istringstream is(rest);
  std::string tok;
  while (std::getline(is, tok, ','))
    cs.push_back(static_cast<uint32_t>(std::stoul(tok, nullptr, 16)));
  if (static_cast<int>(cs.size()) != n)
    throw std::invalid_argument("truncpoly: coefficient count mismatch in " + s);
  return TruncPoly(e, n, std::move(cs));
}

}  // namespace pskp
