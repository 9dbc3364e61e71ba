#include "pskp/fabgup.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace pskp {

namespace {

inline size_t childv(size_t v, int c) { return 3 * v + 1 + static_cast<size_t>(c); }

// Depth-2 class of the subtree at vertex v: four labels packed base-3.
inline int class_at(const std::vector<uint8_t>& L, size_t v) {
  int idx = L[v];
  for (int c = 0; c < 3; ++c) idx = idx * 3 + L[childv(v, c)];
  return idx;
}

std::vector<std::vector<int>> level_paths(int level) {
  std::vector<std::vector<int>> out;
  out.emplace_back();
  for (int d = 0; d < level; ++d) {
    std::vector<std::vector<int>> next;
    next.reserve(out.size() * 3);
    for (const auto& p : out)
      for (int c = 0; c < 3; ++c) {
        auto q = p;
        q.push_back(c);
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

FgContext::FgContext(int depth)
    : depth_(depth),
      a_(Portrait::gen_a(depth)),
      b_(Portrait::gen_b(depth)),
      x1_(Portrait::comm(Portrait::gen_a(depth), Portrait::gen_b(depth))),
      x2_(Portrait::comm(Portrait::gen_a(depth),
                         Portrait::comm(Portrait::gen_a(depth), Portrait::gen_b(depth)))),
      gamma_(depth) {
  if (depth < 4) throw std::invalid_argument("fabgup: depth must be >= 4");
  validate_conventions();
  build_tables();
  build_spaces();
  build_vocab();
}

Portrait FgContext::bold(int r, const Portrait& x) const {
  Portrait xt = x.truncate(x.depth() - 1);
  Portrait idt(x.depth() - 1);
  switch (r) {
    case 0: return Portrait::assemble({xt, idt, idt}, 0);
    case 1: return Portrait::assemble({xt, xt.inv(), idt}, 0);
    case 2: return Portrait::assemble({xt, xt.pow(-2), xt}, 0);
    default: throw std::invalid_argument("fabgup: bold digit out of range");
  }
}

Portrait FgContext::bold_word(const std::string& digits, const Portrait& x) const {
  // rs(x) = r(s(x)): innermost digit is the last one.
  Portrait y = x;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) y = bold(*it - '0', y);
  return y;
}

Portrait FgContext::place_at(const Portrait& x, const std::vector<int>& path) const {
  return Portrait::place(x.truncate(depth_ - static_cast<int>(path.size())), path, depth_);
}

void FgContext::validate_conventions() {
  // The composition convention must reproduce the section tuples of
  // x1 = [a,b] and x2 = [a,x1].
  int m = depth_;
  auto secs1 = x1_.sections();
  if (!(secs1[0] == b_.inv().mul(a_).truncate(m - 1) && secs1[1] == a_.inv().truncate(m - 1) &&
        secs1[2] == b_.truncate(m - 1)))
    throw std::logic_error("fabgup: x1 section tuple mismatch (composition convention)");
  auto secs2 = x2_.sections();
  Portrait ba = b_.mul(a_), ab = a_.mul(b_);
  Portrait mid = a_.inv().mul(b_).mul(a_.inv());
  if (!(secs2[0] == ba.truncate(m - 1) && secs2[1] == mid.truncate(m - 1) &&
        secs2[2] == ab.truncate(m - 1)))
    throw std::logic_error("fabgup: x2 section tuple mismatch (composition convention)");
  // 1(x) = [a, 0(x)] and 2(x) = [a, 1(x)].
  if (!(bold(1, x1_) == Portrait::comm(a_, bold(0, x1_))))
    throw std::logic_error("fabgup: bold-1 commutator identity fails");
  if (!(bold(2, x1_) == Portrait::comm(a_, bold(1, x1_))))
    throw std::logic_error("fabgup: bold-2 commutator identity fails");
  // Placement composition order: 01(x1) must equal x1^3 (x1^b)^{-3}.
  Portrait target = x1_.pow(3).mul(x1_.conj(b_).pow(-3));
  Portrait outer_first = bold(0, bold(1, x1_));
  Portrait inner_first = bold(1, bold(0, x1_));
  if (outer_first == target) {
    // rs(x) = r(s(x)) as implemented by bold_word
  } else if (inner_first == target) {
    throw std::logic_error("fabgup: bold composition is inner-first; implementation assumes outer-first");
  } else {
    throw std::logic_error("fabgup: neither bold composition order satisfies 01(x1) = x1^3 (x1^b)^-3");
  }
}

void FgContext::build_tables() {
  ab_flat_.assign(81, {3, 3});
  k_flat_.assign(81, {3, 3});
  // Closure of {a, b} on depth-2 portraits with (epsilon_a, epsilon_b) labels.
  Portrait a2 = a_.truncate(2), b2 = b_.truncate(2);
  std::map<std::string, std::array<uint8_t, 2>> gamma2;
  std::deque<Portrait> queue;
  Portrait id2(2);
  gamma2[id2.key()] = {0, 0};
  queue.push_back(id2);
  while (!queue.empty()) {
    Portrait g = queue.front();
    queue.pop_front();
    auto cur = gamma2.at(g.key());
    const Portrait nexts[2] = {g.mul(a2), g.mul(b2)};
    for (int i = 0; i < 2; ++i) {
      std::array<uint8_t, 2> lab = cur;
      lab[i] = static_cast<uint8_t>((lab[i] + 1) % 3);
      auto it = gamma2.find(nexts[i].key());
      if (it == gamma2.end()) {
        gamma2[nexts[i].key()] = lab;
        queue.push_back(nexts[i]);
      } else if (it->second != lab) {
        throw std::logic_error("fabgup: ab-coordinate labeling inconsistent");
      }
    }
  }
  if (gamma2.size() != 81) throw std::logic_error("fabgup: |Gamma/Stab(2)| != 81");
  // flatten: class index of a depth-2 portrait is its four labels base-3
  for (const auto& [key, lab] : gamma2) {
    // key() is labels bytes + depth byte
    int idx = 0;
    for (int i = 0; i < 4; ++i) idx = idx * 3 + key[i];
    ab_flat_[idx] = lab;
  }
  // K/K^{(x3)} classes: x1^i x2^j mod Stab(2).
  Portrait x12 = x1_.truncate(2), x22 = x2_.truncate(2);
  int seen = 0;
  for (uint8_t i = 0; i < 3; ++i)
    for (uint8_t j = 0; j < 3; ++j) {
      Portrait g = x12.pow(i).mul(x22.pow(j));
      int idx = g.section_class_index({});
      if (ab_flat_[idx] != std::array<uint8_t, 2>{0, 0})
        throw std::logic_error("fabgup: x1^i x2^j not in K");
      if (k_flat_[idx][0] != 3) throw std::logic_error("fabgup: K/K^(x3) classes collide");
      k_flat_[idx] = {i, j};
      ++seen;
    }
  if (seen != 9) throw std::logic_error("fabgup: wrong K/K^(x3) class count");
}

std::array<uint8_t, 2> FgContext::ab_coords(const Portrait& g) const {
  if (g.depth() < 2) throw std::domain_error("fabgup: ab_coords needs depth >= 2");
  auto lab = ab_flat_[class_at(g.labels(), 0)];
  if (lab[0] == 3) throw std::domain_error("fabgup: element not in the Gamma closure table");
  return lab;
}

std::array<uint8_t, 2> FgContext::k_coords(const Portrait& g) const {
  if (g.depth() < 2) throw std::domain_error("fabgup: k_coords needs depth >= 2");
  auto lab = k_flat_[class_at(g.labels(), 0)];
  if (lab[0] == 3) throw std::domain_error("fabgup: k_coords of an element outside K");
  return lab;
}

// All descendants of v at relative depth d (in breadth-first order).
void FgContext::descendants(size_t v, int d, std::vector<size_t>& out) {
  out.clear();
  out.push_back(v);
  for (int i = 0; i < d; ++i) {
    std::vector<size_t> next;
    next.reserve(out.size() * 3);
    for (size_t u : out)
      for (int c = 0; c < 3; ++c) next.push_back(childv(u, c));
    out = std::move(next);
  }
}

bool FgContext::subtree_in_kpow(const std::vector<uint8_t>& L, size_t v, int j) const {
  // labels at relative depths < j must vanish, and the relative level-j
  // subsections must lie in K
  std::vector<size_t> frontier{v};
  for (int d = 0; d < j; ++d) {
    std::vector<size_t> next;
    next.reserve(frontier.size() * 3);
    for (size_t u : frontier) {
      if (L[u]) return false;
      for (int c = 0; c < 3; ++c) next.push_back(childv(u, c));
    }
    frontier = std::move(next);
  }
  for (size_t u : frontier)
    if (k_flat_[class_at(L, u)][0] == 3) return false;
  return true;
}

bool FgContext::in_kpow(const Portrait& z, int j) const {
  if (j == 0) {
    auto lab = ab_flat_[class_at(z.labels(), 0)];
    return lab[0] == 0 && lab[1] == 0;
  }
  if (z.depth() < j + 2) return z.stab_level() >= z.depth();  // only Stab(depth) is visible
  return subtree_in_kpow(z.labels(), 0, j);
}

F3Vec FgContext::section_coords(const Portrait& z, int level) const {
  if (z.stab_level() < level) throw std::domain_error("fabgup: section_coords needs stab_level >= level");
  if (z.depth() < level + 2) throw std::domain_error("fabgup: depth too small for section_coords");
  const auto& L = z.labels();
  size_t lo = Portrait::level_offset(level), hi = Portrait::level_offset(level + 1);
  F3Vec out;
  out.reserve(2 * (hi - lo));
  for (size_t v = lo; v < hi; ++v) {
    auto kc = k_flat_[class_at(L, v)];
    if (kc[0] == 3) throw std::domain_error("fabgup: section outside K in section_coords");
    out.push_back(kc[0]);
    out.push_back(kc[1]);
  }
  return out;
}

// coords of the subtree at v, at block depth d (2 entries per relative
// level-d subsection); requires the subtree to lie in K^{(x3^d)}.
F3Vec FgContext::subtree_coords(const std::vector<uint8_t>& L, size_t v, int d) const {
  std::vector<size_t> vs;
  descendants(v, d, vs);
  F3Vec out;
  out.reserve(2 * vs.size());
  for (size_t u : vs) {
    auto kc = k_flat_[class_at(L, u)];
    if (kc[0] == 3) throw std::domain_error("fabgup: subtree section outside K");
    out.push_back(kc[0]);
    out.push_back(kc[1]);
  }
  return out;
}

const F3Space& FgContext::coord_space(Base bk) const { return spaces_.at(static_cast<int>(bk)); }

bool FgContext::member(const Portrait& z, const Sub& h) const {
  if (h.base == Base::Gamma) return true;
  if (h.base == Base::K) return in_kpow(z, h.level);
  if (z.stab_level() < h.level) return false;
  int d = (h.base == Base::L) ? 0 : (h.base == Base::K1_3 || h.base == Base::K2_3) ? 1 : 2;
  if (z.depth() < h.level + d + 2)
    throw std::domain_error("fabgup: working depth too small for membership in " + sub_name(h));
  const F3Space* V = (h.base == Base::L) ? nullptr : &coord_space(h.base);
  const auto& L = z.labels();
  size_t lo = Portrait::level_offset(h.level), hi = Portrait::level_offset(h.level + 1);
  for (size_t v = lo; v < hi; ++v) {
    if (d == 0) {
      auto kc = k_flat_[class_at(L, v)];
      if (kc[0] != 0) return false;  // outside K, or nonzero x1 component
    } else {
      if (!subtree_in_kpow(L, v, d)) return false;
      if (!V->contains(subtree_coords(L, v, d))) return false;
    }
  }
  return true;
}

std::string FgContext::sub_name(const Sub& h) const {
  static const char* names[] = {"Gamma", "K",     "L",     "K1^(x3)", "K2^(x3)", "K10^(x9)", "K20^(x9)",
                                "K1^(x9)", "K11^(x9)", "K21^(x9)", "K2^(x9)",  "K12^(x9)", "K22^(x9)"};
  std::ostringstream os;
  os << names[static_cast<int>(h.base)] << "^(x3^" << h.level << ")";
  return os.str();
}

int FgContext::stab_containment_depth(const Sub& h) const {
  // smallest s with Stab(s) <= h (for memo keying)
  switch (h.base) {
    case Base::Gamma: return 0;
    case Base::K: return h.level + 1;
    case Base::L: return h.level + 2;
    case Base::K1_3:
    case Base::K2_3: return h.level + 3;
    default: return h.level + 4;
  }
}

void FgContext::build_spaces() {
  auto coords2_of = [&](const Portrait& g) { return section_coords(g, 2); };
  auto coords1_of = [&](const Portrait& g) { return section_coords(g, 1); };

  // V(L) in F3^2: the x2 direction.
  F3Space vL(2);
  vL.add({k_coords(x2_)[0], k_coords(x2_)[1]});
  if (vL.dim() != 1) throw std::logic_error("fabgup: V(L) dimension != 1");

  // V(L^(x3)) in F3^6: x2 placed at each level-1 vertex.
  for (int c = 0; c < 3; ++c) l3_space_.add(coords1_of(place_at(x2_, {c})));
  if (l3_space_.dim() != 3) throw std::logic_error("fabgup: V(L^(x3)) dimension != 3");

  // V(K_1^(x3)) = V(L^(x3)) + <1(x1), 2(x1)>; V(K_2^(x3)) drops 1(x1).
  F3Space v13 = l3_space_, v23 = l3_space_;
  v13.add(coords1_of(bold(1, x1_)));
  v13.add(coords1_of(bold(2, x1_)));
  v23.add(coords1_of(bold(2, x1_)));
  if (v13.dim() != 5 || v23.dim() != 4)
    throw std::logic_error("fabgup: K_1/K_2 (x3) coordinate dimensions wrong");

  // V(L^(x9)) in F3^18.
  for (const auto& p : level_paths(2)) l9_space_.add(coords2_of(place_at(x2_, p)));
  if (l9_space_.dim() != 9) throw std::logic_error("fabgup: V(L^(x9)) dimension != 9");

  // K_rs^(x9) = <L^(x9), tu(x1) : t + 3u >= r + 3s>.
  auto rs_space = [&](int threshold) {
    F3Space v = l9_space_;
    for (int u = 0; u < 3; ++u)
      for (int t = 0; t < 3; ++t)
        if (t + 3 * u >= threshold) {
          std::string digits;
          digits.push_back(static_cast<char>('0' + t));
          digits.push_back(static_cast<char>('0' + u));
          v.add(coords2_of(bold_word(digits, x1_)));
        }
    return v;
  };
  std::vector<std::pair<Base, int>> rs_list = {
      {Base::K10_9, 1}, {Base::K20_9, 2}, {Base::K11_9, 4}, {Base::K21_9, 5},
      {Base::K12_9, 7}, {Base::K22_9, 8}};
  for (auto [bk, v0] : rs_list) {
    F3Space v = rs_space(v0);
    if (static_cast<int>(v.dim()) != 18 - v0)
      throw std::logic_error("fabgup: K_rs^(x9) dimension mismatch at threshold " + std::to_string(v0));
    spaces_.emplace(static_cast<int>(bk), std::move(v));
  }

  // V(K_1^(x9)) and V(K_2^(x9)) blockwise; they must coincide with the
  // threshold spaces at r+3s = 3 and 6 (the chain coincidences K_01 = K_1
  // and K_02 = K_2).
  F3Space v19(18), v29(18);
  for (int c = 0; c < 3; ++c) {
    v19.add(coords2_of(place_at(bold(1, x1_), {c})));
    v19.add(coords2_of(place_at(bold(2, x1_), {c})));
    v29.add(coords2_of(place_at(bold(2, x1_), {c})));
  }
  for (const auto& p : level_paths(2)) {
    v19.add(coords2_of(place_at(x2_, p)));
    v29.add(coords2_of(place_at(x2_, p)));
  }
  if (v19.dim() != 15 || v29.dim() != 12)
    throw std::logic_error("fabgup: K_1/K_2 (x9) coordinate dimensions wrong");
  F3Space v01 = rs_space(3), v02 = rs_space(6);
  if (!(v01.contains_space(v19) && v19.contains_space(v01)))
    throw std::logic_error("fabgup: K_01^(x9) != K_1^(x9)");
  if (!(v02.contains_space(v29) && v29.contains_space(v02)))
    throw std::logic_error("fabgup: K_02^(x9) != K_2^(x9)");

  spaces_.emplace(static_cast<int>(Base::L), std::move(vL));
  spaces_.emplace(static_cast<int>(Base::K1_3), std::move(v13));
  spaces_.emplace(static_cast<int>(Base::K2_3), std::move(v23));
  spaces_.emplace(static_cast<int>(Base::K1_9), std::move(v19));
  spaces_.emplace(static_cast<int>(Base::K2_9), std::move(v29));
}

namespace {
enum Kind { kX2Self = 0, kX2Subs, kF1, kF1Subs, kF2, kF2Subs };
enum Vocab {
  vR1 = 0, vR2, vR3, vR4, vR5, vR6, vP1, vP2, vP3, vP4, vP6, vP7, kVocabCount
};
}  // namespace

void FgContext::build_vocab() {
  vocab_roots_.resize(kVocabCount);
  vocab_info_.clear();
  vocab_info_.resize(kVocabCount, VocabInfo{Portrait(depth_), 0, nullptr});

  Portrait ba = b_.mul(a_);
  Portrait b_pow_a = b_.conj(a_);
  Portrait x1_ba = x1_.conj(ba);
  Portrait b0x1 = bold(0, x1_);
  Portrait c0 = b0x1.conj(b_pow_a);  // 0(x1)^(b^a)
  Portrait u = x1_ba.mul(c0);
  Portrait v = x1_ba.inv();
  Portrait w = c0.inv();

  auto set_vocab = [&](int id, Portrait gen, int fdim, const F3Space* mod,
                       std::vector<Portrait> roots) {
    vocab_info_[id] = VocabInfo{std::move(gen), fdim, mod};
    for (int j = 0; j < 3; ++j) {
      std::vector<Portrait> rs;
      rs.reserve(roots.size());
      Portrait aj = a_.pow(j);
      for (const auto& r : roots) rs.push_back(j == 0 ? r : r.conj(aj));
      vocab_roots_[id][j] = std::move(rs);
    }
  };

  auto check_exact = [&](int id, const Portrait& gen) {
    Portrait prod(depth_);
    for (const auto& r : vocab_roots_[id][0]) prod = prod.mul(r.pow(3));
    if (!(prod == gen)) throw std::logic_error("fabgup: exact cube identity fails (vocab " + std::to_string(id) + ")");
  };
  auto check_cong = [&](int id, const Portrait& gen, const Sub& mod) {
    Portrait prod(depth_);
    for (const auto& r : vocab_roots_[id][0]) prod = prod.mul(r.pow(3));
    if (!member(prod.mul(gen.inv()), mod))
      throw std::logic_error("fabgup: cube congruence fails (vocab " + std::to_string(id) + ")");
  };

  const F3Space& v10 = coord_space(Base::K10_9);
  const F3Space& v20 = coord_space(Base::K20_9);
  const F3Space& v19s = coord_space(Base::K1_9);
  const F3Space& v13 = coord_space(Base::K1_3);
  const F3Space& v23 = coord_space(Base::K2_3);

  // r = 1: 000(x1) = (x1^{ba} 0(x1)^{b^a})^3 (x1^{ba})^{-3} (0(x1)^{b^a})^{-3}
  set_vocab(vR1, bold_word("00", x1_), 2, &v10, {u, v, w});
  check_exact(vR1, bold_word("000", x1_));

  // r = 2: 010(x1) as six cubes
  Portrait bab = ba.mul(b_);             // b a b
  Portrait b_pow_a_b = b_pow_a.mul(b_);  // b^a b
  Portrait e1 = b0x1.conj(b_pow_a_b);
  Portrait e2 = x1_.conj(bab);
  Portrait e3 = e2.mul(e1).inv();
  set_vocab(vR2, bold_word("10", x1_), 2, &v20, {e1, e2, e3, u, v, w});
  check_exact(vR2, bold_word("010", x1_));

  // r = 3: 20(x1) = x2^-3 (x1^{b a^-1})^-3 (x1^a)^-3 (x1^{b^-1})^-3 mod K_1^(x9)
  Portrait ba_inv = b_.mul(a_.pow(2));  // b a^{-1}
  set_vocab(vR3, bold_word("20", x1_), 2, &v19s,
            {x2_.inv(), x1_.conj(ba_inv).inv(), x1_.conj(a_).inv(), x1_.conj(b_.pow(2)).inv()});
  check_cong(vR3, bold_word("20", x1_), Sub{0, Base::K1_9});

  // r = 4: 01(x1) = x1^3 (x1^b)^-3
  set_vocab(vR4, bold(1, x1_), 1, &v23, {x1_, x1_.conj(b_).inv()});
  check_exact(vR4, bold_word("01", x1_));

  // r = 5: 02(x1) = (0(x1) x1^{a^-1})^3 (x1^{a^-1})^-3 mod L^(x9)
  Portrait x1_ainv = x1_.conj(a_.pow(2));
  set_vocab(vR5, bold(2, x1_), 1, nullptr, {b0x1.mul(x1_ainv), x1_ainv.inv()});
  check_cong(vR5, bold_word("02", x1_), Sub{2, Base::L});

  // r = 6: 0(x2) = x1^-3 mod K^(x9)
  set_vocab(vR6, x2_, 0, nullptr, {x1_.inv()});
  check_cong(vR6, bold(0, x2_), Sub{2, Base::K});

  // prefix: 0(x1) = (b^-1 a^-1)^3 (aba)^3 exactly
  Portrait p1 = b_.pow(2).mul(a_.pow(2));
  Portrait p2 = a_.mul(b_).mul(a_);
  set_vocab(vP2, b0x1, 1, &v13, {p1, p2});
  check_exact(vP2, b0x1);

  // prefix: 1(x1) = [a, 0(x1)] = (p2^a)^-3 (p1^a)^-3 p1^3 p2^3
  Portrait p1a = p1.conj(a_), p2a = p2.conj(a_);
  set_vocab(vP3, bold(1, x1_), 1, &v23, {p2a.inv(), p1a.inv(), p1, p2});
  check_exact(vP3, bold(1, x1_));

  // prefix: 2(x1) = [a, 1(x1)] as eight cubes
  {
    std::vector<Portrait> q = {p2a.inv(), p1a.inv(), p1, p2};
    std::vector<Portrait> roots;
    for (auto it = q.rbegin(); it != q.rend(); ++it) roots.push_back(it->conj(a_).inv());
    for (const auto& g : q) roots.push_back(g);
    set_vocab(vP4, bold(2, x1_), 1, nullptr, std::move(roots));
    check_exact(vP4, bold(2, x1_));
  }

  // prefix: 00(x1) = (x1 b)^3 ((x1^b)^-1)^3 exactly
  Portrait cc = x1_.mul(b_);
  Portrait dd = x1_.conj(b_).inv();
  set_vocab(vP6, bold_word("00", x1_), 2, &v10, {cc, dd});
  check_exact(vP6, bold_word("00", x1_));

  // prefix: 10(x1) = [a, 00(x1)] = (dd^a)^-3 (cc^a)^-3 cc^3 dd^3
  set_vocab(vP7, bold_word("10", x1_), 2, &v20,
            {dd.conj(a_).inv(), cc.conj(a_).inv(), cc, dd});
  check_exact(vP7, bold_word("10", x1_));

  // prefix step 1: search a short word gamma with gamma^3 = x2 mod K^(x3).
  {
    bool found = false;
    std::vector<std::string> frontier = {""};
    for (int len = 1; len <= 6 && !found; ++len) {
      std::vector<std::string> next;
      for (const auto& wrd : frontier) {
        if (found) break;
        for (char ch : {'a', 'b'}) {
          std::string cand = wrd + ch;
          Portrait g = Portrait::eval_word(cand, depth_);
          if (member(g.pow(3).mul(x2_.inv()), Sub{1, Base::K})) {
            gamma_ = g;
            gamma_word_ = cand;
            found = true;
            break;
          }
          next.push_back(std::move(cand));
        }
      }
      frontier = std::move(next);
    }
    if (!found) throw std::logic_error("fabgup: no cube root of x2 mod K^(x3) found");
  }
  set_vocab(vP1, x2_, 0, nullptr, {gamma_});
  check_cong(vP1, x2_, Sub{1, Base::K});

  // Functional sanity: each generator must have coefficient 1 on itself.
  for (int id = 0; id < kVocabCount; ++id) {
    const auto& info = vocab_info_[id];
    if (info.functional_dim == 0) continue;
    if (functional(id, info.gen.labels(), 0) != 1)
      throw std::logic_error("fabgup: residue functional not normalized (vocab " + std::to_string(id) + ")");
  }
}

uint8_t FgContext::functional(int vocab_id, const std::vector<uint8_t>& L, size_t v) const {
  const auto& info = vocab_info_[vocab_id];
  if (info.functional_dim == 0) {
    // x2-coordinate inside L
    auto kc = k_flat_[class_at(L, v)];
    if (kc[0] == 3) throw std::domain_error("fabgup: x2 functional outside K");
    return kc[1];
  }
  int d = info.functional_dim;
  const F3Space& mod = info.mod ? *info.mod : (d == 1 ? l3_space_ : l9_space_);
  F3Vec coords = subtree_coords(L, v, d);
  F3Vec gen_coords = subtree_coords(info.gen.labels(), 0, d);
  auto e = f3_coords_mod({gen_coords}, mod, coords);
  if (!e) throw std::logic_error("fabgup: residue functional unsolvable (element outside N?)");
  return (*e)[0];
}

FgContext::ChainPos FgContext::chain_params(int n) const {
  if (n < 1) throw std::invalid_argument("fabgup: chain index must be >= 1");
  int q = (n - 1) / 6;
  int r = n - 6 * q;
  ChainPos p;
  p.n = n;
  p.q = q;
  p.r = r;
  p.k = 3;
  switch (r) {
    case 1:
      p.A = 9;  p.M = {q, Base::K};      p.N = {q + 3, Base::K};      p.Nnext = {q + 1, Base::K10_9};
      p.assembly_level = q; p.kind = kF2Subs; p.vocab = vR1; p.gens_per_section = 3;
      break;
    case 2:
      p.A = 18; p.M = {q, Base::K};      p.N = {q + 1, Base::K10_9};  p.Nnext = {q + 1, Base::K20_9};
      p.assembly_level = q; p.kind = kF2Subs; p.vocab = vR2; p.gens_per_section = 3;
      break;
    case 3:
      p.A = 4;  p.M = {q + 1, Base::K};  p.N = {q + 1, Base::K20_9};  p.Nnext = {q + 2, Base::K1_3};
      p.assembly_level = q + 1; p.kind = kF2; p.vocab = vR3; p.gens_per_section = 1;
      break;
    case 4:
      p.A = 6;  p.M = {q + 1, Base::K};  p.N = {q + 2, Base::K1_3};   p.Nnext = {q + 2, Base::K2_3};
      p.assembly_level = q + 1; p.kind = kF1Subs; p.vocab = vR4; p.gens_per_section = 3;
      break;
    case 5:
      p.A = 6;  p.M = {q + 1, Base::K};  p.N = {q + 2, Base::K2_3};   p.Nnext = {q + 3, Base::L};
      p.assembly_level = q + 1; p.kind = kF1Subs; p.vocab = vR5; p.gens_per_section = 3;
      break;
    case 6:
      p.A = 3;  p.M = {q + 2, Base::K};  p.N = {q + 3, Base::L};      p.Nnext = {q + 4, Base::K};
      p.assembly_level = q + 2; p.kind = kX2Subs; p.vocab = vR6; p.gens_per_section = 3;
      break;
  }
  return p;
}

FgContext::ChainPos FgContext::prefix_params(int step) const {
  if (step < 1 || step > kPrefixSteps) throw std::invalid_argument("fabgup: prefix step out of range");
  ChainPos p;
  p.n = -step;
  p.k = 3;
  switch (step) {
    case 1:
      p.A = 1; p.M = {0, Base::Gamma}; p.N = {0, Base::L};       p.Nnext = {1, Base::K};
      p.assembly_level = 0; p.kind = kX2Self; p.vocab = vP1; p.gens_per_section = 1;
      break;
    case 2:
      p.A = 2; p.M = {0, Base::Gamma}; p.N = {1, Base::K};       p.Nnext = {0, Base::K1_3};
      p.assembly_level = 0; p.kind = kF1; p.vocab = vP2; p.gens_per_section = 1;
      break;
    case 3:
      p.A = 4; p.M = {0, Base::Gamma}; p.N = {0, Base::K1_3};    p.Nnext = {0, Base::K2_3};
      p.assembly_level = 0; p.kind = kF1; p.vocab = vP3; p.gens_per_section = 1;
      break;
    case 4:
      p.A = 8; p.M = {0, Base::Gamma}; p.N = {0, Base::K2_3};    p.Nnext = {1, Base::L};
      p.assembly_level = 0; p.kind = kF1; p.vocab = vP4; p.gens_per_section = 1;
      break;
    case 5:
      p.A = 3; p.M = {0, Base::K};     p.N = {1, Base::L};       p.Nnext = {2, Base::K};
      p.assembly_level = 0; p.kind = kX2Subs; p.vocab = vR6; p.gens_per_section = 3;
      break;
    case 6:
      p.A = 2; p.M = {0, Base::Gamma}; p.N = {2, Base::K};       p.Nnext = {0, Base::K10_9};
      p.assembly_level = 0; p.kind = kF2; p.vocab = vP6; p.gens_per_section = 1;
      break;
    case 7:
      p.A = 4; p.M = {0, Base::Gamma}; p.N = {0, Base::K10_9};   p.Nnext = {0, Base::K20_9};
      p.assembly_level = 0; p.kind = kF2; p.vocab = vP7; p.gens_per_section = 1;
      break;
    case 8:
      p.A = 4; p.M = {0, Base::K};     p.N = {0, Base::K20_9};   p.Nnext = {0, Base::K1_9};
      p.assembly_level = 0; p.kind = kF2; p.vocab = vR3; p.gens_per_section = 1;
      break;
    case 9:
      p.A = 6; p.M = {0, Base::K};     p.N = {0, Base::K1_9};    p.Nnext = {0, Base::K2_9};
      p.assembly_level = 0; p.kind = kF1Subs; p.vocab = vR4; p.gens_per_section = 3;
      break;
    case 10:
      p.A = 6; p.M = {0, Base::K};     p.N = {0, Base::K2_9};    p.Nnext = {2, Base::L};
      p.assembly_level = 0; p.kind = kF1Subs; p.vocab = vR5; p.gens_per_section = 3;
      break;
    case 11:
      p.A = 3; p.M = {1, Base::K};     p.N = {2, Base::L};       p.Nnext = {3, Base::K};
      p.assembly_level = 1; p.kind = kX2Subs; p.vocab = vR6; p.gens_per_section = 3;
      break;
  }
  return p;
}

F3Vec FgContext::section_exps_at(const std::vector<uint8_t>& L, size_t v, const ChainPos& pos) const {
  F3Vec out;
  switch (pos.kind) {
    case kX2Self: {
      auto kc = k_flat_[class_at(L, v)];
      if (kc[0] == 3) throw std::domain_error("fabgup: X2Self functional outside K");
      out.push_back(kc[1]);
      break;
    }
    case kX2Subs:
      for (int j = 0; j < 3; ++j) {
        auto kc = k_flat_[class_at(L, childv(v, j))];
        if (kc[0] == 3) throw std::domain_error("fabgup: X2Subs functional outside K");
        out.push_back(kc[1]);
      }
      break;
    case kF1:
    case kF2:
      out.push_back(functional(pos.vocab, L, v));
      break;
    case kF1Subs:
    case kF2Subs:
      for (int j = 0; j < 3; ++j) out.push_back(functional(pos.vocab, L, childv(v, j)));
      break;
  }
  return out;
}

F3Vec FgContext::residue_exps(const Portrait& z, const ChainPos& pos) const {
  if (!member(z, pos.N)) throw std::domain_error("fabgup: residue_exps precondition z in N fails");
  F3Vec out;
  size_t lo = Portrait::level_offset(pos.assembly_level);
  size_t hi = Portrait::level_offset(pos.assembly_level + 1);
  for (size_t v = lo; v < hi; ++v) {
    auto e = section_exps_at(z.labels(), v, pos);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

const std::vector<Portrait>& FgContext::roots_for(int vocab_id, int conj_j) const {
  return vocab_roots_[vocab_id][conj_j];
}

std::vector<Portrait> FgContext::cube_approx(const Portrait& z, const ChainPos& pos,
                                             bool split_placements) const {
  if (!member(z, pos.N)) throw std::domain_error("fabgup: cube_approx precondition z in N fails");
  std::vector<Portrait> out;
  if (member(z, pos.Nnext)) {
    if (!split_placements) out.assign(pos.A, Portrait(depth_));
    return out;
  }
  int la = pos.assembly_level;
  auto paths = level_paths(la);
  size_t lo = Portrait::level_offset(la);
  std::vector<F3Vec> exps;
  exps.reserve(paths.size());
  for (size_t i = 0; i < paths.size(); ++i)
    exps.push_back(section_exps_at(z.labels(), lo + i, pos));

  int c = pos.gens_per_section;
  int nroots = static_cast<int>(roots_for(pos.vocab, 0).size());
  // Slot (j, idx): root idx of the a^j-conjugated list (or its reversed
  // inverse for exponent -1), placed at each assembly vertex.
  std::vector<Portrait> inv_cache;  // inverses of reversed roots, per (j, idx)
  for (int j = 0; j < c; ++j)
    for (int idx = 0; idx < nroots; ++idx)
      inv_cache.push_back(roots_for(pos.vocab, j)[nroots - 1 - idx].inv());
  for (int j = 0; j < c; ++j) {
    const auto& roots = roots_for(pos.vocab, j);
    for (int idx = 0; idx < nroots; ++idx) {
      const Portrait& pos_root = roots[idx];
      const Portrait& neg_root = inv_cache[j * nroots + idx];
      if (split_placements) {
        for (size_t wi = 0; wi < paths.size(); ++wi) {
          uint8_t e = exps[wi][j];
          if (e == 0) continue;
          const Portrait& elem = e == 1 ? pos_root : neg_root;
          out.push_back(la == 0 ? elem : place_at(elem, paths[wi]));
        }
      } else if (la == 0) {
        uint8_t e = exps[0][j];
        out.push_back(e == 0 ? Portrait(depth_) : (e == 1 ? pos_root : neg_root));
      } else {
        // Disjoint placements merge by direct label writes.
        std::vector<Portrait> truncs;
        truncs.reserve(paths.size());
        std::vector<const Portrait*> ptrs(paths.size(), nullptr);
        for (size_t wi = 0; wi < paths.size(); ++wi) {
          uint8_t e = exps[wi][j];
          if (e == 0) continue;
          truncs.push_back((e == 1 ? pos_root : neg_root).truncate(depth_ - la));
          ptrs[wi] = &truncs.back();
        }
        out.push_back(Portrait::place_all(paths, ptrs, depth_));
      }
    }
  }
  return out;
}

std::vector<Portrait> FgContext::residue_generators(const ChainPos& pos) const {
  std::vector<Portrait> out;
  const Portrait& gen = vocab_info_[pos.vocab].gen;
  for (const auto& p : level_paths(pos.assembly_level)) {
    if (pos.gens_per_section == 1) {
      out.push_back(pos.assembly_level == 0 ? gen : place_at(gen, p));
    } else {
      for (int j = 0; j < 3; ++j) {
        auto q = p;
        q.push_back(j);
        out.push_back(place_at(gen, q));
      }
    }
  }
  return out;
}

Portrait FgContext::sample_gamma(std::mt19937_64& rng) const {
  int len = static_cast<int>(rng() % 12);
  Portrait g(depth_);
  for (int i = 0; i < len; ++i) {
    switch (rng() % 4) {
      case 0: g = g.mul(a_); break;
      case 1: g = g.mul(a_.pow(2)); break;
      case 2: g = g.mul(b_); break;
      default: g = g.mul(b_.pow(2)); break;
    }
  }
  return g;
}

Portrait FgContext::sample_K(std::mt19937_64& rng) const {
  Portrait g(depth_);
  int terms = 2 + static_cast<int>(rng() % 5);
  for (int i = 0; i < terms; ++i) {
    Portrait c = x1_.pow(rng() % 2 ? 1 : -1).conj(sample_gamma(rng));
    g = g.mul(c);
  }
  return g;
}

Portrait FgContext::sample_sub(const Sub& h, std::mt19937_64& rng) const {
  if (h.base == Base::Gamma) return sample_gamma(rng);

  // Local sample of the base inside a subtree of the given depth.
  std::function<Portrait(Base, int)> local = [&](Base bk, int dd) -> Portrait {
    if (dd < 2) return Portrait(std::max(dd, 1));
    auto lx1 = x1_.truncate(dd);
    auto lx2 = x2_.truncate(dd);
    auto place_local = [&](const Portrait& x, const std::vector<int>& path) {
      return Portrait::place(x.truncate(dd - static_cast<int>(path.size())), path, dd);
    };
    auto word_local = [&]() {
      Portrait g(dd);
      int len = static_cast<int>(rng() % 10);
      auto la = Portrait::gen_a(dd), lb = Portrait::gen_b(dd);
      for (int i = 0; i < len; ++i) {
        switch (rng() % 4) {
          case 0: g = g.mul(la); break;
          case 1: g = g.mul(la.pow(2)); break;
          case 2: g = g.mul(lb); break;
          default: g = g.mul(lb.pow(2)); break;
        }
      }
      return g;
    };
    auto k_local = [&]() {
      Portrait g(dd);
      int terms = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < terms; ++i) g = g.mul(lx1.pow(rng() % 2 ? 1 : -1).conj(word_local()));
      return g;
    };
    auto bold_local = [&](int r, const Portrait& x) {
      Portrait xt = x.truncate(dd - 1);
      Portrait idt(dd - 1);
      switch (r) {
        case 0: return Portrait::assemble({xt, idt, idt}, 0);
        case 1: return Portrait::assemble({xt, xt.inv(), idt}, 0);
        default: return Portrait::assemble({xt, xt.pow(-2), xt}, 0);
      }
    };
    auto k3_local = [&]() {  // K^{(x3)} inside depth dd
      Portrait g(dd);
      for (int c = 0; c < 3; ++c)
        if (rng() % 2) g = g.mul(place_local(k_local(), {c}));
      return g;
    };
    auto l_local = [&]() { return lx2.pow(static_cast<long long>(rng() % 3)).mul(k3_local()); };
    switch (bk) {
      case Base::Gamma: return word_local();
      case Base::K: return k_local();
      case Base::L: return l_local();
      case Base::K1_3: {
        Portrait g = bold_local(1, lx1).pow(static_cast<long long>(rng() % 3));
        g = g.mul(bold_local(2, lx1).pow(static_cast<long long>(rng() % 3)));
        for (int c = 0; c < 3; ++c)
          if (rng() % 2) g = g.mul(place_local(l_local(), {c}));
        return g;
      }
      case Base::K2_3: {
        Portrait g = bold_local(2, lx1).pow(static_cast<long long>(rng() % 3));
        for (int c = 0; c < 3; ++c)
          if (rng() % 2) g = g.mul(place_local(l_local(), {c}));
        return g;
      }
      default: {
        // K_rs^(x9) family, K_1^(x9), K_2^(x9): threshold generators plus L^(x9).
        int v0 = 0;
        switch (bk) {
          case Base::K10_9: v0 = 1; break;
          case Base::K20_9: v0 = 2; break;
          case Base::K1_9: v0 = 3; break;
          case Base::K11_9: v0 = 4; break;
          case Base::K21_9: v0 = 5; break;
          case Base::K2_9: v0 = 6; break;
          case Base::K12_9: v0 = 7; break;
          case Base::K22_9: v0 = 8; break;
          default: throw std::logic_error("fabgup: unsampleable base");
        }
        Portrait g(dd);
        for (int u2 = 0; u2 < 3; ++u2)
          for (int t = 0; t < 3; ++t)
            if (t + 3 * u2 >= v0 && rng() % 2) {
              Portrait gg = bold_local(t, bold_local(u2, lx1));
              g = g.mul(gg.pow(rng() % 2 ? 1 : -1));
            }
        for (int c = 0; c < 3; ++c)
          for (int cc = 0; cc < 3; ++cc)
            if (rng() % 3 == 0) g = g.mul(place_local(l_local(), {c, cc}));
        return g;
      }
    }
  };

  if (h.level == 0) return local(h.base, depth_);
  Portrait g(depth_);
  auto paths = level_paths(h.level);
  int subtree = depth_ - h.level;
  int picks = std::min<size_t>(paths.size(), 6);
  for (int i = 0; i < picks; ++i) {
    const auto& p = paths[rng() % paths.size()];
    Portrait s = local(h.base, std::max(subtree, 1));
    if (subtree >= 2) g = g.mul(Portrait::place(s.truncate(subtree), p, depth_));
  }
  return g;
}

std::string FgContext::coset_key_mod_L(const Portrait& g) const {
  auto ab = ab_coords(g);
  Portrait rep = a_.pow(ab[0]).mul(b_.pow(ab[1]));
  Portrait c = g.mul(rep.inv());
  auto kc = k_coords(c);
  std::ostringstream os;
  os << int(ab[0]) << ',' << int(ab[1]) << ',' << int(kc[0]);
  return os.str();
}

}  // namespace pskp
