#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <unordered_map>

#include "pskp/engine.hpp"

namespace pskp {

// Exact directed ball of a finite quotient: distance and predecessor letter
// per element, expanded in fixed generator order (FIFO, ties to the least
// generator index).
struct BallEntry {
  int dist;
  int gen;           // -1 at the identity
  std::string pred;  // predecessor key
};

template <class Model>
struct DirectedBall {
  std::unordered_map<std::string, BallEntry> table;
  int radius = 0;
  uint64_t size() const { return table.size(); }

  std::vector<int> word_for(const std::string& key) const {
    std::vector<int> letters;
    std::string cur = key;
    while (true) {
      const BallEntry& e = table.at(cur);
      if (e.gen < 0) break;
      letters.push_back(e.gen);
      cur = e.pred;
    }
    std::reverse(letters.begin(), letters.end());
    return letters;
  }

  void save(std::ostream& os, const std::string& descriptor) const {
    os << "pskp-ball 1\n" << descriptor << "\n" << table.size() << " " << radius << "\n";
    for (const auto& [k, e] : table) os << k << "\t" << e.dist << "\t" << e.gen << "\t" << e.pred << "\n";
  }
  static std::optional<DirectedBall> load(std::istream& is, const std::string& descriptor) {
    std::string magic, vers, desc;
    if (!(is >> magic >> vers)) return std::nullopt;
    is.ignore();
    if (magic != "pskp-ball") return std::nullopt;
    if (!std::getline(is, desc) || desc != descriptor) return std::nullopt;
    DirectedBall b;
    size_t n;
    is >> n >> b.radius;
    is.ignore();
    for (size_t i = 0; i < n; ++i) {
      std::string line;
      if (!std::getline(is, line)) return std::nullopt;
      size_t p1 = line.find('\t'), p2 = line.find('\t', p1 + 1), p3 = line.find('\t', p2 + 1);
      BallEntry e;
      e.dist = std::stoi(line.substr(p1 + 1, p2 - p1 - 1));
      e.gen = std::stoi(line.substr(p2 + 1, p3 - p2 - 1));
      e.pred = line.substr(p3 + 1);
      b.table.emplace(line.substr(0, p1), e);
    }
    return b;
  }
};

// Full directed ball (whole quotient) by BFS; throws ThresholdError past
// `limit` elements.
template <class Model>
DirectedBall<Model> directed_ball(const Model& model, const std::vector<typename Model::Elem>& gens,
                                  uint64_t limit = 10'000'000) {
  DirectedBall<Model> ball;
  std::deque<std::pair<typename Model::Elem, int>> queue;
  auto e = model.id();
  ball.table.emplace(model.key(e), BallEntry{0, -1, ""});
  queue.emplace_back(e, 0);
  while (!queue.empty()) {
    auto [g, d] = queue.front();
    queue.pop_front();
    std::string gk = model.key(g);
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      auto h = model.mul(g, gens[gi]);
      std::string key = model.key(h);
      if (ball.table.count(key)) continue;
      if (ball.table.size() >= limit) throw ThresholdError("directed ball exceeded the size threshold");
      ball.table.emplace(std::move(key), BallEntry{d + 1, static_cast<int>(gi), gk});
      ball.radius = std::max(ball.radius, d + 1);
      queue.emplace_back(std::move(h), d + 1);
    }
  }
  return ball;
}

// Exact directed diameter of the quotient with respect to S. When
// `expected_order` is given, a smaller closure reports S as non-generating.
template <class Model>
int directed_diameter(const Model& model, const std::vector<typename Model::Elem>& gens,
                      uint64_t limit = 10'000'000, std::optional<uint64_t> expected_order = {}) {
  auto ball = directed_ball(model, gens, limit);
  if (expected_order && ball.size() != *expected_order)
    throw std::invalid_argument("directed_diameter: S does not generate (closure " +
                                std::to_string(ball.size()) + " of " + std::to_string(*expected_order) + ")");
  return ball.radius;
}

template <class Model>
std::vector<typename Model::Elem> symmetrize(const Model& model,
                                             const std::vector<typename Model::Elem>& gens) {
  std::vector<typename Model::Elem> out;
  std::unordered_map<std::string, bool> seen;
  for (const auto& g : gens)
    for (const auto& h : {g, model.inv(g)}) {
      std::string k = model.key(h);
      if (!seen.emplace(std::move(k), true).second) continue;
      out.push_back(h);
    }
  return out;
}

// --- hypothesis verification ------------------------------------------------

struct HypothesisLevelReport {
  int level = 0;
  std::string name;
  int nesting_pass = 0, nesting_total = 0;        // (i) N_{n+1} <= N_n <= M_n
  int commutator_pass = 0, commutator_total = 0;  // (ii) [M_n, N_n] <= N_{n+1}
  int power_pass = 0, power_total = 0;            // (iii) k-th powers land in N_{n+1}
  int oracle_pass = 0, oracle_total = 0;          // (iv) congruence and membership
  bool ok() const {
    return nesting_pass == nesting_total && commutator_pass == commutator_total &&
           power_pass == power_total && oracle_pass == oracle_total;
  }
};

struct HypothesisReport {
  std::vector<HypothesisLevelReport> levels;
  bool all_ok() const {
    for (const auto& l : levels)
      if (!l.ok()) return false;
    return !levels.empty();
  }
};

template <class Inst>
HypothesisReport verify_hypotheses(const Inst& inst, int max_level, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  HypothesisReport rep;
  int top = std::min(max_level, inst.levels() - 1);
  for (int n = 1; n <= top; ++n) {
    HypothesisLevelReport lr;
    lr.level = n;
    lr.name = inst.level_name(n);
    for (int s = 0; s < samples; ++s) {
      auto z = inst.sample_N(n, rng);
      auto znext = inst.sample_N(n + 1, rng);
      ++lr.nesting_total;
      if (inst.in_M(z, n) && inst.in_N(z, n) && inst.in_N(znext, n)) ++lr.nesting_pass;

      auto m = inst.sample_M(n, rng);
      ++lr.commutator_total;
      auto comm = inst.mul(inst.mul(inst.inv(m), inst.inv(z)), inst.mul(m, z));
      if (inst.in_N(comm, n + 1)) ++lr.commutator_pass;

      ++lr.power_total;
      auto zp = inst.id();
      for (int j = 0; j < inst.k(n); ++j) zp = inst.mul(zp, z);
      if (inst.in_N(zp, n + 1)) ++lr.power_pass;

      ++lr.oracle_total;
      auto ys = inst.power_approx(z, n);
      bool ok = true;
      auto prod = inst.id();
      for (const auto& y : ys) {
        if (!inst.in_M(y, n)) ok = false;
        for (int j = 0; j < inst.k(n); ++j) prod = inst.mul(prod, y);
      }
      if (!inst.in_N(inst.mul(prod, inst.inv(z)), n + 1)) ok = false;
      if (ok) ++lr.oracle_pass;
    }
    rep.levels.push_back(std::move(lr));
  }
  return rep;
}

}  // namespace pskp
