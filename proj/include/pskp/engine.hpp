#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pskp/word.hpp"

namespace pskp {

// The navigation engine is generic over an Instance with:
//   using Elem;
//   Elem id() const; Elem mul(a, b) const; Elem inv(a) const;
//   std::string key(const Elem&) const;          // canonical form in the quotient
//   std::string key_at_level(int n, const Elem&) const;  // canonical mod N_n
//   int levels() const;                           // chain N_1 >= ... >= N_levels
//   bool in_N(const Elem&, int n) const;          // 1 <= n <= levels
//   bool in_M(const Elem&, int n) const;          // 1 <= n <  levels
//   int A(int n) const; int k(int n) const;       // 1 <= n <  levels
//   std::vector<Elem> power_approx(const Elem& z, int n) const;
//   std::string level_name(int n) const;
// Hypotheses: N_{n+1} <= N_n <= M_n normal, [M_n, N_n] <= N_{n+1},
// k_n-th powers of N_n land in N_{n+1}, and power_approx(z, n) returns
// y_1..y_A in M_n with y_1^{k_n} ... y_A^{k_n} == z mod N_{n+1}.

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BaseCaseError : EngineError {
  using EngineError::EngineError;
};
struct OracleCongruenceError : EngineError {
  using EngineError::EngineError;
};
struct ThresholdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Elem>
struct BaseResult {
  Word::Ptr word;
  Elem eval;
};

// Base strategy: produce a positive word whose evaluation agrees with g
// modulo N_1, together with an a-priori bound on the lengths it can emit.
template <class Elem>
struct BaseStrategy {
  std::function<BaseResult<Elem>(const Elem&)> solve;
  BigInt length_bound;  // max length solve() can return
  std::string name;
};

struct LevelStat {
  int level = 0;
  uint64_t oracle_calls = 0;   // calls that produced nonidentity output
  uint64_t skipped = 0;        // residues already in N_{level+1}
  uint64_t y_requests = 0;
};

template <class Elem>
struct NavigationResult {
  NavigationResult(Word::Ptr w, Elem e) : word(std::move(w)), eval(std::move(e)) {}
  Word::Ptr word;
  Elem eval;
  bool certified = false;
  BigInt length;
  BigInt bound;              // base_bound * prod (1 + A_i k_i)
  uint64_t active_mask = 0;  // bit i-1 set when step i produced output in this run
  std::vector<LevelStat> stats;
  BigInt base_max_len;       // longest base word used in this run
  double seconds = 0;
};

template <class Inst>
class Navigator {
 public:
  using Elem = typename Inst::Elem;

  struct Options {
    bool check_hp = true;      // spot-check y^k (ytilde)^-k in N_{i+1}
    bool check_in_m = true;
    // Explicitly assert y_1^k...y_A^k z^-1 in N_{i+1} per oracle call. When
    // off, a violation still surfaces loudly one level later through the
    // residue invariant.
    bool check_oracle = true;
    uint64_t hp_check_budget = 64;  // per run
  };

  Navigator(const Inst& inst, BaseStrategy<Elem> base, Options opt = {})
      : inst_(inst), base_(std::move(base)), opt_(opt) {}

  NavigationResult<Elem> run(const Elem& g) {
    auto t0 = std::chrono::steady_clock::now();
    run_mask_ = 0;
    run_base_max_ = 0;
    hp_budget_ = opt_.check_hp ? opt_.hp_check_budget : 0;
    stats_.assign(inst_.levels() + 1, LevelStat{});
    for (int i = 0; i <= inst_.levels(); ++i) stats_[i].level = i;

    int target = inst_.levels();
    Memo m = approx_to(target, g);

    NavigationResult<Elem> res(m.word, m.eval);
    res.length = m.word->length();
    res.bound = bound();
    res.active_mask = run_mask_;
    res.stats = stats_;
    res.base_max_len = run_base_max_;
    Elem err = inst_.mul(inst_.inv(m.eval), g);
    res.certified = inst_.in_N(err, target) && res.length <= res.bound;
    auto t1 = std::chrono::steady_clock::now();
    res.seconds = std::chrono::duration<double>(t1 - t0).count();
    return res;
  }

  // base_bound * prod over all steps of (1 + A_i k_i)
  BigInt bound() const {
    BigInt b = base_.length_bound;
    for (int i = 1; i < inst_.levels(); ++i)
      b *= 1 + static_cast<long long>(inst_.A(i)) * inst_.k(i);
    return b;
  }

  // prod over mask-active steps of (1 + A_i k_i)
  BigInt active_bound(uint64_t mask) const {
    BigInt b = 1;
    for (int i = 1; i < inst_.levels(); ++i)
      if (mask & (uint64_t(1) << (i - 1))) b *= 1 + static_cast<long long>(inst_.A(i)) * inst_.k(i);
    return b;
  }

  size_t memo_size() const { return memo_.size(); }
  void clear_memo() { memo_.clear(); }

 private:
  struct Memo {
    Word::Ptr word;
    Elem eval;
    uint64_t mask;       // steps whose oracle output fed this word
    BigInt base_max;
    std::shared_ptr<Elem> eval_pow;  // cached eval^k (k constant across steps)
  };

  Memo approx_to(int level, const Elem& g) {
    if (inst_.in_N(g, level)) return Memo{Word::empty(), inst_.id(), 0, 0, nullptr};
    auto key = std::make_pair(level, inst_.key_at_level(level, g));
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      run_mask_ |= it->second.mask;
      if (it->second.base_max > run_base_max_) run_base_max_ = it->second.base_max;
      return it->second;
    }
    Memo out = level == 1 ? solve_base(g) : refine(level, g);
    run_mask_ |= out.mask;
    if (out.base_max > run_base_max_) run_base_max_ = out.base_max;
    // k is constant across our instances' steps; cache eval^k for reuse by
    // every parent request.
    out.eval_pow = std::make_shared<Elem>(pow_k(out.eval, inst_.k(std::max(1, std::min(level, inst_.levels() - 1)))));
    memo_.emplace(std::move(key), out);
    return out;
  }

  Memo solve_base(const Elem& g) {
    BaseResult<Elem> br = base_.solve(g);
    Elem err = inst_.mul(inst_.inv(br.eval), g);
    if (!inst_.in_N(err, 1))
      throw BaseCaseError("base strategy '" + base_.name + "' returned a word off by more than N_1");
    return Memo{br.word, br.eval, 0, br.word->length(), nullptr};
  }

  Memo refine(int level, const Elem& g) {
    Memo cur = approx_to(level - 1, g);
    int i = level - 1;  // oracle step index
    Elem z = inst_.mul(inst_.inv(cur.eval), g);
    if (!inst_.in_N(z, i))
      throw EngineError("residue escaped N_" + std::to_string(i) + " (" + inst_.level_name(i) + ")");
    if (inst_.in_N(z, level)) {
      ++stats_[i].skipped;
      return cur;
    }
    std::vector<Elem> ys = inst_.power_approx(z, i);
    ++stats_[i].oracle_calls;
    int k = inst_.k(i);
    if (opt_.check_oracle) {
      // Oracle congruence: y_1^k ... y_A^k z^-1 in N_{i+1}; surfaced loudly.
      Elem prod = inst_.id();
      for (const Elem& y : ys) prod = inst_.mul(prod, pow_k(y, k));
      if (!inst_.in_N(inst_.mul(prod, inst_.inv(z)), level))
        throw OracleCongruenceError("power_approx output violates the level-" + std::to_string(i) +
                                    " congruence (instance bug or corrupted oracle)");
    }
    std::vector<std::pair<Word::Ptr, unsigned>> parts;
    parts.reserve(ys.size() + 1);
    parts.emplace_back(cur.word, 1);
    Elem eval = cur.eval;
    uint64_t mask = cur.mask | (uint64_t(1) << (i - 1));
    BigInt base_max = cur.base_max;
    for (const Elem& y : ys) {
      if (inst_.in_N(y, inst_.levels())) continue;  // identity in the quotient
      if (opt_.check_in_m && !inst_.in_M(y, i))
        throw OracleCongruenceError("power_approx output outside M_" + std::to_string(i));
      ++stats_[i].y_requests;
      Memo my = approx_to(i, y);
      Elem approx_pow = my.eval_pow ? *my.eval_pow : pow_k(my.eval, k);
      if (hp_budget_ > 0) {
        --hp_budget_;
        Elem lhs = inst_.mul(pow_k(y, k), inst_.inv(approx_pow));
        if (!inst_.in_N(lhs, level))
          throw EngineError("power-commutator consistency failed at level " + std::to_string(i));
      }
      parts.emplace_back(my.word, static_cast<unsigned>(k));
      eval = inst_.mul(eval, approx_pow);
      mask |= my.mask;
      if (my.base_max > base_max) base_max = my.base_max;
    }
    return Memo{Word::concat(std::move(parts)), eval, mask, base_max, nullptr};
  }

  Elem pow_k(const Elem& y, int k) {
    Elem r = y;
    for (int j = 1; j < k; ++j) r = inst_.mul(r, y);
    return r;
  }

  const Inst& inst_;
  BaseStrategy<Elem> base_;
  Options opt_;
  std::map<std::pair<int, std::string>, Memo> memo_;
  uint64_t run_mask_ = 0;
  BigInt run_base_max_ = 0;
  uint64_t hp_budget_ = 0;
  std::vector<LevelStat> stats_;
};

// --- base strategies -------------------------------------------------------

// Directed BFS table over the N_1 cosets; words realize shortest positive
// words in the coset graph und the table bound is the exact directed
// diameter of the quotient with respect to S.
template <class Inst>
class CosetBfs {
 public:
  using Elem = typename Inst::Elem;

  CosetBfs(const Inst& inst, std::vector<Elem> gens,
           std::function<std::string(const Elem&)> coset_key, uint64_t limit = 10'000'000)
      : inst_(inst), gens_(std::move(gens)), coset_key_(std::move(coset_key)) {
    struct Entry {
      int dist;
      int gen;
      std::string pred;
    };
    std::unordered_map<std::string, Entry> tab;
    std::deque<std::pair<Elem, int>> queue;
    Elem e = inst_.id();
    std::string k0 = coset_key_(e);
    tab.emplace(k0, Entry{0, -1, ""});
    reps_.emplace(k0, e);
    queue.emplace_back(e, 0);
    while (!queue.empty()) {
      auto [g, d] = queue.front();
      queue.pop_front();
      for (size_t gi = 0; gi < gens_.size(); ++gi) {
        Elem h = inst_.mul(g, gens_[gi]);
        std::string key = coset_key_(h);
        if (tab.count(key)) continue;
        if (tab.size() >= limit)
          throw ThresholdError("coset BFS exceeded the size threshold");
        tab.emplace(key, Entry{d + 1, static_cast<int>(gi), coset_key_(g)});
        reps_.emplace(key, h);
        radius_ = std::max(radius_, d + 1);
        queue.emplace_back(h, d + 1);
      }
    }
    for (auto& [key, ent] : tab) {
      std::vector<int> letters;
      std::string cur = key;
      while (true) {
        const Entry& en = tab.at(cur);
        if (en.gen < 0) break;
        letters.push_back(en.gen);
        cur = en.pred;
      }
      std::reverse(letters.begin(), letters.end());
      words_.emplace(key, letters);
    }
  }

  size_t size() const { return words_.size(); }
  int radius() const { return radius_; }  // directed diameter w.r.t. gens

  BaseStrategy<Elem> strategy() const {
    auto self = this;
    return BaseStrategy<Elem>{
        [self](const Elem& g) -> BaseResult<Elem> {
          auto it = self->words_.find(self->coset_key_(g));
          if (it == self->words_.end())
            throw BaseCaseError("element not generated by S in the base quotient");
          std::vector<std::pair<Word::Ptr, unsigned>> parts;
          Elem eval = self->inst_.id();
          for (int gi : it->second) {
            parts.emplace_back(Word::letter(gi), 1);
            eval = self->inst_.mul(eval, self->gens_[gi]);
          }
          return BaseResult<Elem>{parts.empty() ? Word::empty() : Word::concat(std::move(parts)),
                                  eval};
        },
        BigInt(radius_), "bfs"};
  }

 private:
  const Inst& inst_;
  std::vector<Elem> gens_;
  std::function<std::string(const Elem&)> coset_key_;
  std::unordered_map<std::string, std::vector<int>> words_;
  std::unordered_map<std::string, Elem> reps_;
  int radius_ = 0;
};

// Meet-in-the-middle base: match u^{-1} g against a forward positive ball.
// Finds words of length <= 2L without tabulating the whole quotient.
template <class Inst>
class MitmBase {
 public:
  using Elem = typename Inst::Elem;

  MitmBase(const Inst& inst, std::vector<Elem> gens,
           std::function<std::string(const Elem&)> coset_key, int initial_radius = 4,
           int max_radius = 24, uint64_t entry_limit = 10'000'000)
      : inst_(inst),
        gens_(std::move(gens)),
        coset_key_(std::move(coset_key)),
        max_radius_(max_radius),
        entry_limit_(entry_limit) {
    ball_.emplace_back(inst_.id(), std::vector<int>{});
    seen_.emplace(coset_key_(inst_.id()), 0);
    layer_starts_.push_back(0);
    grow_to(initial_radius);
  }

  int radius() const { return radius_; }
  int used_radius() const { return used_radius_; }

  BaseStrategy<Elem> strategy() {
    auto self = this;
    return BaseStrategy<Elem>{[self](const Elem& g) { return self->solve(g); },
                              BigInt(2) * max_radius_, "mitm"};
  }

  BaseResult<Elem> solve(const Elem& g) {
    while (true) {
      for (const auto& [u, uword] : ball_) {
        Elem v = inst_.mul(inst_.inv(u), g);
        auto it = seen_.find(coset_key_(v));
        if (it == seen_.end()) continue;
        const auto& [velem, vword] = ball_[it->second];
        std::vector<std::pair<Word::Ptr, unsigned>> parts;
        for (int gi : uword) parts.emplace_back(Word::letter(gi), 1);
        for (int gi : vword) parts.emplace_back(Word::letter(gi), 1);
        used_radius_ = std::max(
            used_radius_, static_cast<int>(std::max(uword.size(), vword.size())));
        Elem eval = inst_.mul(u, velem);
        return BaseResult<Elem>{parts.empty() ? Word::empty() : Word::concat(std::move(parts)),
                                eval};
      }
      if (radius_ >= max_radius_)
        throw BaseCaseError("mitm base: no match within the radius limit");
      grow_to(radius_ + 1);
    }
  }

 private:
  void grow_to(int target) {
    while (radius_ < target) {
      size_t lo = layer_starts_.back();
      size_t hi = ball_.size();
      layer_starts_.push_back(hi);
      for (size_t i = lo; i < hi; ++i) {
        for (size_t gi = 0; gi < gens_.size(); ++gi) {
          Elem h = inst_.mul(ball_[i].first, gens_[gi]);
          std::string key = coset_key_(h);
          if (seen_.count(key)) continue;
          if (ball_.size() >= entry_limit_)
            throw ThresholdError("mitm ball exceeded the entry limit");
          auto wrd = ball_[i].second;
          wrd.push_back(static_cast<int>(gi));
          seen_.emplace(std::move(key), ball_.size());
          ball_.emplace_back(h, std::move(wrd));
        }
      }
      ++radius_;
    }
  }

  const Inst& inst_;
  std::vector<Elem> gens_;
  std::function<std::string(const Elem&)> coset_key_;
  std::vector<std::pair<Elem, std::vector<int>>> ball_;
  std::unordered_map<std::string, size_t> seen_;
  std::vector<size_t> layer_starts_;
  int radius_ = 0;
  int used_radius_ = 0;
  int max_radius_;
  uint64_t entry_limit_;
};

// Empty-word base: valid only for requests that already lie in N_1.
template <class Inst>
BaseStrategy<typename Inst::Elem> deep_base(const Inst& inst) {
  using Elem = typename Inst::Elem;
  const Inst* ip = &inst;
  return BaseStrategy<Elem>{
      [ip](const Elem& g) -> BaseResult<Elem> {
        if (!ip->in_N(g, 1))
          throw BaseCaseError("deep base: requested element lies outside N_1");
        return BaseResult<Elem>{Word::empty(), ip->id()};
      },
      BigInt(0), "deep"};
}

}  // namespace pskp
