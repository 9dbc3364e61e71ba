#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <string>
#include <vector>

namespace pskp {

using BigInt = boost::multiprecision::cpp_int;

// Positive word over an indexed generating set. Stored as a DAG of
// concatenations with repeat counts so that the navigation recursion can
// share subwords; lengths are exact big integers (deep runs produce words
// far too long to materialize). Only letters and nonnegative powers exist,
// so every word is positive by construction.
class Word {
 public:
  using Ptr = std::shared_ptr<const Word>;

  static Ptr empty();
  static Ptr letter(int gen_index);
  // Concatenation of parts[i].first repeated parts[i].second times, in order.
  static Ptr concat(std::vector<std::pair<Ptr, unsigned>> parts);

  const BigInt& length() const { return length_; }
  bool is_empty() const { return length_ == 0; }

  // Generator indices in order; throws std::length_error beyond `limit`.
  std::vector<int> flatten(size_t limit = 1u << 20) const;
  // Space-separated generator indices.
  std::string to_string(size_t limit = 1u << 20) const;

 private:
  Word() = default;
  int letter_ = -1;
  std::vector<std::pair<Ptr, unsigned>> parts_;
  BigInt length_ = 0;
};

}  // namespace pskp
