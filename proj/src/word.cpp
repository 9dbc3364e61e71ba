#include "pskp/word.hpp"

#include <sstream>
#include <stdexcept>

namespace pskp {

Word::Ptr Word::empty() {
  static Ptr e = Ptr(new Word());
  return e;
}

Word::Ptr Word::letter(int gen_index) {
  auto w = new Word();
  w->letter_ = gen_index;
  w->length_ = 1;
  return Ptr(w);
}

Word::Ptr Word::concat(std::vector<std::pair<Ptr, unsigned>> parts) {
  auto w = new Word();
  BigInt len = 0;
  for (auto& [p, rep] : parts) {
    if (!p) throw std::invalid_argument("word: null part");
    len += p->length() * rep;
  }
  w->parts_ = std::move(parts);
  w->length_ = std::move(len);
  return Ptr(w);
}

std::vector<int> Word::flatten(size_t limit) const {
  if (length_ > BigInt(limit)) throw std::length_error("word: longer than flatten limit");
  std::vector<int> out;
  out.reserve(static_cast<size_t>(length_));
  // stack of (node, remaining repeats of the node, child position)
  struct Frame {
    const Word* node;
    unsigned reps;
    size_t part;
  };
  std::vector<Frame> stack;
  stack.push_back({this, 1, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.node->letter_ >= 0) {
      for (unsigned r = 0; r < f.reps; ++r) out.push_back(f.node->letter_);
      stack.pop_back();
      continue;
    }
    if (f.part == f.node->parts_.size()) {
      if (--f.reps == 0) {
        stack.pop_back();
      } else {
        f.part = 0;
      }
      continue;
    }
    auto& [child, rep] = f.node->parts_[f.part++];
    if (rep > 0 && !child->is_empty()) stack.push_back({child.get(), rep, 0});
  }
  return out;
}

std::string Word::to_string(size_t limit) const {
  auto idx = flatten(limit);
  std::ostringstream os;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) os << ' ';
    os << idx[i];
  }
  return os.str();
}

}  // namespace pskp
