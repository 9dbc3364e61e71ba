#include "pskp/portrait.hpp"

#include <stdexcept>

namespace pskp {

namespace {

// First index of depth-d vertices: (3^d - 1) / 2.
size_t level_start(int d) {
  size_t p = 1;
  for (int i = 0; i < d; ++i) p *= 3;
  return (p - 1) / 2;
}

inline size_t child(size_t v, int c) { return 3 * v + 1 + static_cast<size_t>(c); }

}  // namespace

size_t Portrait::internal_vertex_count(int depth) { return level_start(depth); }

Portrait::Portrait(int depth) : depth_(depth), labels_(internal_vertex_count(depth), 0) {
  if (depth < 1) throw std::invalid_argument("portrait: depth must be >= 1");
}

Portrait::Portrait(int depth, std::vector<uint8_t> labels) : depth_(depth), labels_(std::move(labels)) {
  if (depth < 1) throw std::invalid_argument("portrait: depth must be >= 1");
  if (labels_.size() != internal_vertex_count(depth))
    throw std::invalid_argument("portrait: label count mismatch");
  for (uint8_t l : labels_)
    if (l > 2) throw std::invalid_argument("portrait: label out of Z/3");
}

Portrait Portrait::gen_a(int depth) {
  Portrait p(depth);
  p.labels_[0] = 1;
  return p;
}

Portrait Portrait::gen_b(int depth) {
  Portrait p(depth);
  if (depth == 1) return p;  // b acts trivially on level 1
  auto sub_a = gen_a(depth - 1);
  auto sub_b = gen_b(depth - 1);
  return assemble({sub_a, Portrait(depth - 1), sub_b}, 0);
}

bool Portrait::is_identity() const {
  for (uint8_t l : labels_)
    if (l) return false;
  return true;
}

Portrait Portrait::mul(const Portrait& o) const {
  if (depth_ != o.depth_) throw std::invalid_argument("portrait: depth mismatch");
  Portrait r(depth_);
  // label_{fg}(v) = label_f(v) + label_g(f(v)), computed level by level;
  // img holds level-relative image indices under *this. Children of the
  // i-th level-d vertex are the (3i+c)-th vertices of level d+1.
  std::vector<uint32_t> img{0}, next;
  size_t lo = 0, width = 1;
  for (int d = 0; d < depth_; ++d) {
    bool more = d + 1 < depth_;
    if (more) next.resize(width * 3);
    for (size_t i = 0; i < width; ++i) {
      uint8_t lf = labels_[lo + i];
      r.labels_[lo + i] = static_cast<uint8_t>((lf + o.labels_[lo + img[i]]) % 3);
      if (more) {
        uint32_t fbase = 3 * img[i];
        for (int c = 0; c < 3; ++c) next[3 * i + c] = fbase + static_cast<uint32_t>((c + lf) % 3);
      }
    }
    img.swap(next);
    lo = 3 * lo + 1;
    width *= 3;
  }
  return r;
}

Portrait Portrait::inv() const {
  Portrait r(depth_);
  std::vector<uint32_t> img{0}, next;
  size_t lo = 0, width = 1;
  for (int d = 0; d < depth_; ++d) {
    bool more = d + 1 < depth_;
    if (more) next.resize(width * 3);
    for (size_t i = 0; i < width; ++i) {
      uint8_t lf = labels_[lo + i];
      r.labels_[lo + img[i]] = static_cast<uint8_t>((3 - lf) % 3);
      if (more) {
        uint32_t fbase = 3 * img[i];
        for (int c = 0; c < 3; ++c) next[3 * i + c] = fbase + static_cast<uint32_t>((c + lf) % 3);
      }
    }
    img.swap(next);
    lo = 3 * lo + 1;
    width *= 3;
  }
  return r;
}

Portrait Portrait::pow(long long k) const {
  Portrait base = k < 0 ? inv() : *this;
  unsigned long long n = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Portrait r(depth_);
  if (n <= 4) {  // short chains beat square-and-multiply here
    for (unsigned long long i = 0; i < n; ++i) r = i == 0 ? base : r.mul(base);
    return r;
  }
  while (n) {
    if (n & 1) r = r.mul(base);
    base = base.mul(base);
    n >>= 1;
  }
  return r;
}

Portrait Portrait::conj(const Portrait& g) const { return g.inv().mul(*this).mul(g); }

Portrait Portrait::comm(const Portrait& x, const Portrait& y) {
  return x.inv().mul(y.inv()).mul(x).mul(y);
}

Portrait Portrait::section_at(const std::vector<int>& path) const {
  if (static_cast<int>(path.size()) >= depth_)
    throw std::invalid_argument("portrait: section path too deep");
  int sub_depth = depth_ - static_cast<int>(path.size());
  Portrait r(sub_depth);
  size_t root = 0;
  for (int c : path) root = child(root, c);
  // Copy the subtree rooted at `root` level by level.
  std::vector<std::pair<size_t, size_t>> stack;  // (src, dst)
  stack.emplace_back(root, 0);
  size_t sub_internal = r.labels_.size();
  while (!stack.empty()) {
    auto [s, d] = stack.back();
    stack.pop_back();
    r.labels_[d] = labels_[s];
    if (child(d, 0) < sub_internal)
      for (int c = 0; c < 3; ++c) stack.emplace_back(child(s, c), child(d, c));
  }
  return r;
}

std::array<Portrait, 3> Portrait::sections() const {
  if (labels_[0] != 0) throw std::domain_error("portrait: sections require trivial root label");
  return {section_at({0}), section_at({1}), section_at({2})};
}

Portrait Portrait::assemble(const std::array<Portrait, 3>& s, int root_label) {
  int sd = s[0].depth_;
  if (s[1].depth_ != sd || s[2].depth_ != sd)
    throw std::invalid_argument("portrait: assemble depth mismatch");
  Portrait r(sd + 1);
  r.labels_[0] = static_cast<uint8_t>(root_label % 3);
  for (int c = 0; c < 3; ++c) {
    std::vector<std::pair<size_t, size_t>> stack;  // (src in s[c], dst)
    stack.emplace_back(0, child(0, c));
    size_t internal = r.labels_.size();
    while (!stack.empty()) {
      auto [ss, d] = stack.back();
      stack.pop_back();
      r.labels_[d] = s[c].labels_[ss];
      if (child(d, 0) < internal)
        for (int cc = 0; cc < 3; ++cc) stack.emplace_back(child(ss, cc), child(d, cc));
    }
  }
  return r;
}

Portrait Portrait::place(const Portrait& x, const std::vector<int>& path, int depth) {
  if (x.depth_ + static_cast<int>(path.size()) != depth)
    throw std::invalid_argument("portrait: place depth mismatch");
  Portrait r(depth);
  size_t root = 0;
  for (int c : path) root = child(root, c);
  std::vector<std::pair<size_t, size_t>> stack;  // (src in x, dst)
  stack.emplace_back(0, root);
  size_t internal = r.labels_.size();
  while (!stack.empty()) {
    auto [s, d] = stack.back();
    stack.pop_back();
    r.labels_[d] = x.labels_[s];
    if (child(d, 0) < internal)
      for (int c = 0; c < 3; ++c) stack.emplace_back(child(s, c), child(d, c));
  }
  return r;
}

Portrait Portrait::place_all(const std::vector<std::vector<int>>& paths,
                             const std::vector<const Portrait*>& xs, int depth) {
  if (paths.size() != xs.size()) throw std::invalid_argument("portrait: place_all size mismatch");
  Portrait r(depth);
  size_t internal = r.labels_.size();
  for (size_t i = 0; i < paths.size(); ++i) {
    if (!xs[i]) continue;
    const Portrait& x = *xs[i];
    if (x.depth_ + static_cast<int>(paths[i].size()) != depth)
      throw std::invalid_argument("portrait: place_all depth mismatch");
    size_t root = 0;
    for (int c : paths[i]) root = child(root, c);
    std::vector<std::pair<size_t, size_t>> stack;
    stack.emplace_back(0, root);
    while (!stack.empty()) {
      auto [s, d] = stack.back();
      stack.pop_back();
      r.labels_[d] = x.labels_[s];
      if (child(d, 0) < internal)
        for (int c = 0; c < 3; ++c) stack.emplace_back(child(s, c), child(d, c));
    }
  }
  return r;
}

size_t Portrait::level_offset(int d) { return level_start(d); }

int Portrait::section_class_index(const std::vector<int>& path) const {
  if (static_cast<int>(path.size()) + 2 > depth_)
    throw std::invalid_argument("portrait: section class needs two levels below the path");
  size_t root = 0;
  for (int c : path) root = child(root, c);
  int idx = labels_[root];
  for (int c = 0; c < 3; ++c) idx = idx * 3 + labels_[child(root, c)];
  return idx;
}

int Portrait::stab_level() const {
  for (int d = 0; d < depth_; ++d) {
    size_t lo = level_start(d), hi = level_start(d + 1);
    for (size_t i = lo; i < hi; ++i)
      if (labels_[i]) return d;
  }
  return depth_;
}

Portrait Portrait::truncate(int new_depth) const {
  if (new_depth > depth_) throw std::invalid_argument("portrait: truncate to larger depth");
  Portrait r(new_depth);
  std::copy(labels_.begin(), labels_.begin() + r.labels_.size(), r.labels_.begin());
  return r;
}

std::string Portrait::serialize() const {
  std::string s = std::to_string(depth_) + ":";
  s.reserve(s.size() + labels_.size());
  for (uint8_t l : labels_) s.push_back(static_cast<char>('0' + l));
  return s;
}

Portrait Portrait::parse(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("portrait: missing ':' in " + s);
  int depth = std::stoi(s.substr(0, colon));
  std::string digits = s.substr(colon + 1);
  if (digits.size() != internal_vertex_count(depth))
    throw std::invalid_argument("portrait: digit count mismatch in " + s);
  std::vector<uint8_t> labels(digits.size());
  for (size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < '0' || digits[i] > '2')
      throw std::invalid_argument("portrait: digit out of range in " + s);
    labels[i] = static_cast<uint8_t>(digits[i] - '0');
  }
  return Portrait(depth, std::move(labels));
}

std::string Portrait::key() const {
  std::string s(labels_.begin(), labels_.end());
  s.push_back(static_cast<char>(depth_));
  return s;
}

Portrait Portrait::eval_word(const std::string& word, int depth) {
  Portrait r(depth);
  Portrait a = gen_a(depth), b = gen_b(depth);
  for (char ch : word) {
    if (ch == 'a')
      r = r.mul(a);
    else if (ch == 'b')
      r = r.mul(b);
    else if (ch == 'A')
      r = r.mul(a.pow(2));
    else if (ch == 'B')
      r = r.mul(b.pow(2));
    else
      throw std::invalid_argument("portrait: bad word letter");
  }
  return r;
}

}  // namespace pskp
