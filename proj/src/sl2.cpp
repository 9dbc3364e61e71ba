#include "pskp/sl2.hpp"

#include <sstream>

#include "json.hpp"

namespace pskp {

namespace {

TruncPoly one_plus_tn(int e, int n, int level) {
  return TruncPoly::one(e, n).add(TruncPoly::monomial(e, n, 1, level));
}

}  // namespace

Mat2 gen_D(int level, const TruncPoly& alpha) {
  int e = alpha.field_degree(), n = alpha.modulus_degree();
  if (2 * level >= n) throw std::domain_error("gen_D: level too deep for modulus");
  TruncPoly tn = TruncPoly::monomial(e, n, 1, level);
  return Mat2(TruncPoly::one(e, n).add(alpha.shift_up(2 * level)), tn, alpha.shift_up(level),
              TruncPoly::one(e, n));
}

Mat2 gen_E(int level, const TruncPoly& alpha) {
  int e = alpha.field_degree(), n = alpha.modulus_degree();
  if (level >= n) throw std::domain_error("gen_E: level too deep for modulus");
  TruncPoly u = one_plus_tn(e, n, level);
  return Mat2(u, alpha.shift_up(level), TruncPoly::zero(e, n), u.inv());
}

Mat2 gen_F(int level, const TruncPoly& alpha) {
  int e = alpha.field_degree(), n = alpha.modulus_degree();
  if (level >= n) throw std::domain_error("gen_F: level too deep for modulus");
  TruncPoly u = one_plus_tn(e, n, level);
  return Mat2(u.inv(), TruncPoly::zero(e, n), alpha.shift_up(level), u);
}

std::array<Mat2, 3> square_approx(const Mat2& z, int n) {
  if (z.val() < 3 * n) throw std::domain_error("square_approx: val(z) < 3n");
  int e = z.field_degree();
  // z = I + t^{3n} [[a,b],[c,d]]; read a, b, c mod t^n.
  TruncPoly one = TruncPoly::one(e, z.modulus_degree());
  TruncPoly a = z.a().add(one).shift_down(3 * n).truncate(n);
  TruncPoly b = z.b().shift_down(3 * n).truncate(n);
  TruncPoly c = z.c().shift_down(3 * n).truncate(n);
  return {gen_D(n, a.shift_up(n)), gen_E(n, b), gen_F(n, c)};
}

void Sl2Schedule::validate() const {
  if (alphas.size() != betas.size())
    throw std::invalid_argument("schedule: alpha/beta length mismatch");
  if (betas.empty()) throw std::invalid_argument("schedule: empty");
  int s = steps();
  for (int i = 0; i < s; ++i) {
    if (betas[i] < 3 * alphas[i]) throw std::invalid_argument("schedule: beta_n < 3 alpha_n");
    if (alphas[i] < 1) throw std::invalid_argument("schedule: alpha_n < 1");
  }
  for (int i = 0; i + 1 < s; ++i) {
    if (betas[i + 1] <= betas[i]) throw std::invalid_argument("schedule: betas not strictly increasing");
    if (betas[i + 1] > alphas[i] + betas[i])
      throw std::invalid_argument("schedule: beta_{n+1} > alpha_n + beta_n");
    if (betas[i + 1] > 2 * betas[i]) throw std::invalid_argument("schedule: beta_{n+1} > 2 beta_n");
    if (betas[i + 1] > 4 * (betas[i] / 3))
      throw std::invalid_argument("schedule: beta_{n+1} > 4 floor(beta_n/3)");
  }
  if (depth < betas.back()) throw std::invalid_argument("schedule: depth < final beta");
}

Sl2Schedule make_schedule(int q, int beta1, int steps, int depth) {
  if (steps < 1) throw std::invalid_argument("make_schedule: steps < 1");
  if (beta1 < 3) throw std::invalid_argument("make_schedule: beta1 < 3");
  Sl2Schedule s;
  s.q = q;
  int beta = beta1;
  for (int i = 0; i < steps; ++i) {
    s.betas.push_back(beta);
    s.alphas.push_back(beta / 3);
    if (i + 1 < steps) {
      int next = std::min(4 * (beta / 3), beta + beta / 3);
      if (next <= beta)
        throw std::invalid_argument("make_schedule: recurrence stalls at beta = " + std::to_string(beta));
      beta = next;
    }
  }
  s.depth = depth > 0 ? depth : s.betas.back();
  s.validate();
  return s;
}

std::string Sl2Schedule::to_json() const {
  nlohmann::json j;
  j["q"] = q;
  j["depth"] = depth;
  j["alphas"] = alphas;
  j["betas"] = betas;
  return j.dump();
}

Sl2Schedule Sl2Schedule::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Sl2Schedule s;
  s.q = j.at("q").get<int>();
  s.depth = j.at("depth").get<int>();
  s.alphas = j.at("alphas").get<std::vector<int>>();
  s.betas = j.at("betas").get<std::vector<int>>();
  s.validate();
  return s;
}

Mat2 elem12(const TruncPoly& u) {
  int e = u.field_degree(), n = u.modulus_degree();
  return Mat2(TruncPoly::one(e, n), u, TruncPoly::zero(e, n), TruncPoly::one(e, n));
}

Mat2 elem21(const TruncPoly& u) {
  int e = u.field_degree(), n = u.modulus_degree();
  return Mat2(TruncPoly::one(e, n), TruncPoly::zero(e, n), u, TruncPoly::one(e, n));
}

std::vector<Mat2> sl2_canonical_gens(int e, int depth) {
  // Elementary generators over an F2-basis of F_q in degrees 0 and 1, plus
  // one diagonal twist diag(1+t, (1+t)^{-1}). Conjugating the elementaries
  // by powers of the twist reaches E12(u), E21(u) for every u, which
  // generate SL2 over the local ring; without the twist the closure stalls
  // (char-2 commutators and squares of congruence elements are scalar).
  std::vector<Mat2> gens;
  for (int i = 0; i < 2 && i < depth; ++i) {
    for (int bit = 0; bit < e; ++bit) {
      TruncPoly u = TruncPoly::monomial(e, depth, 1u << bit, i);
      gens.push_back(elem12(u));
      gens.push_back(elem21(u));
    }
  }
  if (depth >= 2) gens.push_back(gen_E(1, TruncPoly::zero(e, depth)));
  return gens;
}

Mat2 random_sl2_at_level(int e, int depth, int level, std::mt19937_64& rng) {
  const Gf2e& f = Gf2e::get(e);
  auto rand_poly_from = [&](int lo) {
    TruncPoly p(e, depth);
    std::vector<uint32_t> cs(depth, 0);
    for (int i = lo; i < depth; ++i) cs[i] = static_cast<uint32_t>(rng() % f.order());
    return TruncPoly(e, depth, cs);
  };
  // g = [[a, b],[c, d]] with a = 1 + (deviation of valuation >= max(level,1)),
  // b, c supported in degrees >= level, and d solved from det = a d + b c = 1.
  TruncPoly a = TruncPoly::one(e, depth).add(rand_poly_from(std::max(level, 1)));
  TruncPoly b = rand_poly_from(level);
  TruncPoly c = rand_poly_from(level);
  TruncPoly d = TruncPoly::one(e, depth).add(b.mul(c)).mul(a.inv());
  Mat2 g(a, b, c, d);
  if (level == 0) {
    // The unit-corner form misses elements with a(0) = 0; twist by the
    // antidiagonal involution half the time.
    if (rng() & 1) {
      Mat2 s(TruncPoly::zero(e, depth), TruncPoly::one(e, depth), TruncPoly::one(e, depth),
             TruncPoly::zero(e, depth));
      g = g.mul(s);
    }
  }
  return g;
}

Mat2 random_sl2(int e, int depth, std::mt19937_64& rng) {
  return random_sl2_at_level(e, depth, 0, rng);
}

unsigned long long sl2_order(int q, int m) {
  unsigned long long r = static_cast<unsigned long long>(q) * q - 1;
  for (int i = 0; i < 3 * m - 2; ++i) r *= static_cast<unsigned long long>(q);
  return r;
}

}  // namespace pskp
