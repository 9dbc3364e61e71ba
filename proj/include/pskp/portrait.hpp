#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pskp {

// Automorphism of the depth-m ternary rooted tree whose local action at
// every vertex is a power of the 3-cycle sigma = (0 1 2). Stored as one
// label in Z/3 per internal vertex (depth < m), breadth-first; the label at
// vertex v is the exponent of sigma applied to v's children.
//
// Composition is left-to-right: (f.mul(g)) acts by f first, then g. This is
// the convention under which [a,b] = a^{-1}b^{-1}ab has section tuple
// (b^{-1}a, a^{-1}, b); see the construction tests.
class Portrait {
 public:
  explicit Portrait(int depth);  // identity
  Portrait(int depth, std::vector<uint8_t> labels);

  static Portrait identity(int depth) { return Portrait(depth); }
  // a: cyclic rotation of the three top subtrees (root label 1).
  static Portrait gen_a(int depth);
  // b = (a, 1, b) truncated to the given depth.
  static Portrait gen_b(int depth);

  int depth() const { return depth_; }
  size_t label_count() const { return labels_.size(); }
  uint8_t label(size_t idx) const { return labels_[idx]; }
  const std::vector<uint8_t>& labels() const { return labels_; }

  static size_t internal_vertex_count(int depth);  // (3^depth - 1) / 2

  bool is_identity() const;
  bool operator==(const Portrait& o) const = default;

  Portrait mul(const Portrait& o) const;  // this first, then o
  Portrait inv() const;
  Portrait pow(long long k) const;        // negative exponents allowed
  Portrait conj(const Portrait& g) const; // g^{-1} * this * g
  static Portrait comm(const Portrait& x, const Portrait& y);  // x^{-1}y^{-1}xy

  // Section phi_w at the vertex given by `path` (digits in {0,1,2});
  // a portrait of depth depth()-|path|. Defined for any portrait.
  Portrait section_at(const std::vector<int>& path) const;
  // Sections (phi_0, phi_1, phi_2); requires root label 0.
  std::array<Portrait, 3> sections() const;
  // Inverse of sections: root label + three depth-(m-1) subtrees.
  static Portrait assemble(const std::array<Portrait, 3>& s, int root_label);
  // Portrait with `x` grafted at `path`, identity elsewhere.
  static Portrait place(const Portrait& x, const std::vector<int>& path, int depth);
  // Portrait with xs[i] grafted at paths[i] (disjoint subtrees), identity
  // elsewhere. Entries may be null (skipped).
  static Portrait place_all(const std::vector<std::vector<int>>& paths,
                            const std::vector<const Portrait*>& xs, int depth);

  // Largest l <= depth such that the action on level l is trivial
  // (equivalently: all labels at depths < l vanish).
  int stab_level() const;

  // Label of the subtree-root at `path` and of its three children; the
  // depth-2 truncation of the section at `path` packed as a base-3 index.
  // Requires |path| <= depth - 2.
  int section_class_index(const std::vector<int>& path) const;
  // First vertex index of the given level.
  static size_t level_offset(int d);

  Portrait truncate(int new_depth) const;

  // "m:" followed by (3^m-1)/2 digits in {0,1,2}, breadth-first.
  std::string serialize() const;
  static Portrait parse(const std::string& s);
  // Compact canonical key for hashing.
  std::string key() const;

  // Evaluate a word over {a, b} (left-to-right), letters 'a' and 'b'.
  static Portrait eval_word(const std::string& word, int depth);

 private:
  int depth_;
  std::vector<uint8_t> labels_;
};

}  // namespace pskp
