#pragma once

#include <array>
#include <map>
#include <random>
#include <vector>

#include "pskp/f3.hpp"
#include "pskp/portrait.hpp"

namespace pskp {

// The Fabrykowski-Gupta group Gamma = <a, b> acting on the ternary rooted
// tree, computed in the finite quotient Gamma/Stab(depth).
//
// Subgroup chain machinery: K = [Gamma, Gamma] is the normal closure of
// x1 = [a,b]; x2 = [a,x1]; K branches (K x K x K <= K section-wise), and the
// chain interpolating K^{(x3^i)} >= ... >= K^{(x3^{i+1})} is detected by
// F3-linear functionals on section coordinates. The coordinate spaces are
// derived at construction from the generators themselves and validated
// against the expected quotient dimensions, so vertex-indexing conventions
// cannot silently drift.
//
// Conventions, pinned by construction-time checks:
//   - products act left to right, [x,y] = x^{-1}y^{-1}xy, x^g = g^{-1}xg,
//     which reproduces psi(x1) = (b^{-1}a, a^{-1}, b) and
//     psi(x2) = (ba, a^{-1}ba^{-1}, ab);
//   - bold placement operators compose outer-first: rs(x) = r(s(x)),
//     which reproduces 01(x1) = x1^3 (x1^b)^{-3}.
class FgContext {
 public:
  explicit FgContext(int depth);  // depth >= 4

  int depth() const { return depth_; }
  const Portrait& a() const { return a_; }
  const Portrait& b() const { return b_; }
  const Portrait& x1() const { return x1_; }
  const Portrait& x2() const { return x2_; }

  Portrait id() const { return Portrait(depth_); }

  // Bold operators 0(x) = (x,1,1), 1(x) = (x,x^{-1},1), 2(x) = (x,x^{-2},x);
  // the top level of x is truncated away.
  Portrait bold(int r, const Portrait& x) const;
  // rs(x) etc., outer digit first: bold_word("01", x) = 0(1(x)).
  Portrait bold_word(const std::string& digits, const Portrait& x) const;
  // x truncated and grafted at `path`, identity elsewhere.
  Portrait place_at(const Portrait& x, const std::vector<int>& path) const;

  // --- coordinates -------------------------------------------------------
  // Image in Gamma/K = C3 x C3 with basis (Ka, Kb). Throws if the depth-2
  // truncation is not in the closure table.
  std::array<uint8_t, 2> ab_coords(const Portrait& g) const;
  // Image in K/K^{(x3)} = C3 x C3 with basis (x1, x2); requires g in K.
  std::array<uint8_t, 2> k_coords(const Portrait& g) const;
  // Concatenated k_coords over the 3^level level-sections, breadth-first.
  // Requires stab_level >= level and every section in K.
  F3Vec section_coords(const Portrait& z, int level) const;

  int stab_level(const Portrait& g) const { return g.stab_level(); }

  // --- subgroups ---------------------------------------------------------
  // Every chain subgroup is (base)^{(x3^level)}: all level-sections lie in
  // the base. Bases at block depth 0 (Gamma, K, L), 1 (K_1^{(x3)},
  // K_2^{(x3)}) and 2 (the K_rs^{(x9)} family).
  enum class Base {
    Gamma, K, L,
    K1_3, K2_3,
    K10_9, K20_9, K1_9, K11_9, K21_9, K2_9, K12_9, K22_9
  };
  struct Sub {
    int level;
    Base base;
    bool operator==(const Sub&) const = default;
  };

  bool member(const Portrait& z, const Sub& h) const;
  bool in_kpow(const Portrait& z, int j) const;  // K^{(x3^j)}, j >= 0
  std::string sub_name(const Sub& h) const;

  // --- chain -------------------------------------------------------------
  struct ChainPos {
    int n = 0;        // 1-based step index (paper chain) or -step (prefix)
    int q = 0, r = 0; // n = 6q + r for the paper chain
    int A = 0;        // number of cubes
    int k = 3;
    Sub M, N, Nnext;
    int assembly_level = 0;  // cube_approx assembles placements here
    int kind = 0;            // residue extraction kind (internal)
    int vocab = 0;           // root-list id (internal)
    int gens_per_section = 1;
  };

  // Paper table: n = 6q + r, A = (9, 18, 4, 6, 6, 3) for r = 1..6.
  ChainPos chain_params(int n) const;

  // Shallow interpolation L >= K^{(x3)} >= K_1^{(x3)} >= K_2^{(x3)} >=
  // L^{(x3)} >= K^{(x9)} >= K_10^{(x9)} >= K_20^{(x9)} >= K_1^{(x9)} >=
  // K_2^{(x9)} >= L^{(x9)} >= K^{(x27)}, realizing a constructive base case
  // on Gamma/L (27 elements). Step in [1, 11].
  static constexpr int kPrefixSteps = 11;
  ChainPos prefix_params(int step) const;

  // Residue exponents of z at pos: per assembly section, per generator,
  // values in F3 (2 encodes -1). Requires z in N_pos.
  F3Vec residue_exps(const Portrait& z, const ChainPos& pos) const;

  bool membership(const Portrait& z, const ChainPos& pos) const { return member(z, pos.N); }

  // y_1..y_A in M_pos with y_1^3 ... y_A^3 == z mod N_{pos+1}; identities
  // when z is already in N_{pos+1}. With split_placements the same cubes
  // are returned as single-vertex placements (identities dropped).
  std::vector<Portrait> cube_approx(const Portrait& z, const ChainPos& pos,
                                    bool split_placements = false) const;

  // The residue generators of the step, as placed group elements
  // (assembly-section-major, generator-minor); used by samplers and tests.
  std::vector<Portrait> residue_generators(const ChainPos& pos) const;

  // --- samplers (seeded; random products of generators) -------------------
  Portrait sample_gamma(std::mt19937_64& rng) const;
  Portrait sample_K(std::mt19937_64& rng) const;
  Portrait sample_sub(const Sub& h, std::mt19937_64& rng) const;

  // --- misc ---------------------------------------------------------------
  // Canonical key of the coset g L in Gamma/L (27 cosets).
  std::string coset_key_mod_L(const Portrait& g) const;
  // Cube root of x2 modulo K^{(x3)} found by word search (typically "ab").
  const Portrait& x2_cube_root() const { return gamma_; }
  const std::string& x2_cube_root_word() const { return gamma_word_; }

  const F3Space& coord_space(Base b) const;
  // Smallest s with Stab(s) contained in the subgroup (memo keying).
  int stab_containment_depth(const Sub& h) const;

 private:
  void build_tables();
  void build_spaces();
  void build_vocab();
  void validate_conventions();

  static void descendants(size_t v, int d, std::vector<size_t>& out);
  bool subtree_in_kpow(const std::vector<uint8_t>& labels, size_t v, int j) const;
  F3Vec subtree_coords(const std::vector<uint8_t>& labels, size_t v, int d) const;
  uint8_t functional(int vocab_id, const std::vector<uint8_t>& labels, size_t v) const;
  // exponents for the assembly section rooted at vertex v
  F3Vec section_exps_at(const std::vector<uint8_t>& labels, size_t v, const ChainPos& pos) const;
  const std::vector<Portrait>& roots_for(int vocab_id, int conj_j) const;

  int depth_;
  Portrait a_, b_, x1_, x2_;
  Portrait gamma_;  // cube root of x2 mod K^(x3)
  std::string gamma_word_;

  // depth-2 class (four labels base-3) -> coordinates; {3,3} marks invalid
  std::vector<std::array<uint8_t, 2>> ab_flat_;
  std::vector<std::array<uint8_t, 2>> k_flat_;

  std::map<int, F3Space> spaces_;  // keyed by static_cast<int>(Base)
  F3Space l3_space_{6};            // V(L^{(x3)}) inside F3^6
  F3Space l9_space_{18};           // V(L^{(x9)}) inside F3^18

  // vocab id -> for conj a^j (j=0,1,2) -> cube-root list
  std::vector<std::array<std::vector<Portrait>, 3>> vocab_roots_;
  // vocab id -> (generator element, functional data)
  struct VocabInfo {
    Portrait gen;           // residue generator (un-placed)
    int functional_dim;     // 0: x2 mu-coordinate; 1: F3^6; 2: F3^18
    const F3Space* mod;     // quotient space for the functional (null for x2)
  };
  std::vector<VocabInfo> vocab_info_;
};

}  // namespace pskp
