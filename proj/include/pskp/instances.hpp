#pragma once

#include <memory>
#include <random>

#include "pskp/engine.hpp"
#include "pskp/fabgup.hpp"
#include "pskp/sl2.hpp"

namespace pskp {

// Engine instance for SL2(F_q[t]/(t^depth)) with the filtration
// M_n = K_{alpha_n}, N_n = K_{beta_n}, A = 3, k = 2.
class Sl2Instance {
 public:
  using Elem = Mat2;

  explicit Sl2Instance(Sl2Schedule sched, bool corrupt_oracle = false)
      : sched_(std::move(sched)), corrupt_(corrupt_oracle) {
    sched_.validate();
  }

  const Sl2Schedule& schedule() const { return sched_; }
  int field_degree() const {
    int e = 0;
    while ((1 << e) < sched_.q) ++e;
    return e;
  }
  int depth() const { return sched_.depth; }

  Elem id() const { return Mat2::identity(field_degree(), sched_.depth); }
  Elem mul(const Elem& x, const Elem& y) const { return x.mul(y); }
  Elem inv(const Elem& x) const { return x.inv(); }
  std::string key(const Elem& x) const { return x.serialize(); }
  std::string key_at_level(int n, const Elem& x) const {
    return x.reduce(sched_.betas[n - 1]).serialize();
  }

  int levels() const { return sched_.steps(); }
  bool in_N(const Elem& g, int n) const { return g.val() >= sched_.betas[n - 1]; }
  bool in_M(const Elem& g, int n) const { return g.val() >= sched_.alphas[n - 1]; }
  int A(int) const { return 3; }
  int k(int) const { return 2; }
  std::string level_name(int n) const { return "K_" + std::to_string(sched_.betas[n - 1]); }

  std::vector<Elem> power_approx(const Elem& z, int n) const {
    if (n + 1 <= levels() && z.val() >= sched_.betas[n]) {
      // already in N_{n+1}
      return {id(), id(), id()};
    }
    auto ys = square_approx(z, sched_.alphas[n - 1]);
    std::vector<Elem> out(ys.begin(), ys.end());
    if (corrupt_) {
      // A sign error is invisible here (char 2, k = 2: y^-2 = y^2 mod K_4n),
      // so the injected fault is an off-by-one generator factor instead.
      int alpha = sched_.alphas[n - 1];
      out[1] = out[1].mul(gen_D(alpha, TruncPoly::zero(field_degree(), sched_.depth)));
    }
    return out;
  }

  Elem sample_N(int n, std::mt19937_64& rng) const {
    return random_sl2_at_level(field_degree(), sched_.depth, sched_.betas[n - 1], rng);
  }
  Elem sample_M(int n, std::mt19937_64& rng) const {
    return random_sl2_at_level(field_degree(), sched_.depth, sched_.alphas[n - 1], rng);
  }

  std::function<std::string(const Elem&)> coset_key_N1() const {
    int b1 = sched_.betas[0];
    return [b1](const Elem& g) { return g.reduce(b1).serialize(); };
  }

 private:
  Sl2Schedule sched_;
  bool corrupt_;
};

// Engine instance for the Fabrykowski-Gupta chain.
//
// Paper mode: the period-6 chain starting at N_1 = K^{(x27)} = Stab(4).
// Full mode: eleven shallow interpolation steps are prepended, so the chain
// starts at N_1 = L and the base case is the 27-element quotient Gamma/L;
// this realizes the base case constructively instead of tabulating
// Gamma/Stab(4) (3^28 elements).
class FgInstance {
 public:
  using Elem = Portrait;
  enum class Mode { Paper, Full };

  FgInstance(std::shared_ptr<const FgContext> ctx, Mode mode, int paper_levels,
             bool split_placements = false, bool corrupt_oracle = false)
      : ctx_(std::move(ctx)),
        mode_(mode),
        paper_levels_(paper_levels),
        split_(split_placements),
        corrupt_(corrupt_oracle) {
    if (paper_levels < 1) throw std::invalid_argument("fg instance: need at least one level");
  }

  // Chain sized so that N_levels = Stab(m), i.e. the quotient Gamma/Stab(m).
  static int paper_levels_for_stab(int m) {
    if (m < 4) throw std::invalid_argument("fg instance: stabilizer target needs m >= 4");
    return 6 * (m - 4) + 1;
  }

  const FgContext& ctx() const { return *ctx_; }
  Mode mode() const { return mode_; }
  bool split_placements() const { return split_; }

  Elem id() const { return Portrait(ctx_->depth()); }
  Elem mul(const Elem& x, const Elem& y) const { return x.mul(y); }
  Elem inv(const Elem& x) const { return x.inv(); }
  std::string key(const Elem& x) const { return x.key(); }
  std::string key_at_level(int n, const Elem& x) const {
    int s = std::min(ctx_->stab_containment_depth(N_sub(n)), ctx_->depth());
    return x.truncate(s).key();
  }

  int prefix_steps() const { return mode_ == Mode::Full ? FgContext::kPrefixSteps : 0; }
  int levels() const { return prefix_steps() + paper_levels_; }

  FgContext::ChainPos step(int i) const {
    int p = prefix_steps();
    return i <= p ? ctx_->prefix_params(i) : ctx_->chain_params(i - p);
  }
  FgContext::Sub N_sub(int n) const { return step(n).N; }

  bool in_N(const Elem& g, int n) const { return ctx_->member(g, N_sub(n)); }
  bool in_M(const Elem& g, int n) const { return ctx_->member(g, step(n).M); }
  int A(int n) const { return step(n).A; }
  int k(int) const { return 3; }
  std::string level_name(int n) const { return ctx_->sub_name(N_sub(n)); }

  std::vector<Elem> power_approx(const Elem& z, int n) const {
    auto ys = ctx_->cube_approx(z, step(n), split_);
    if (corrupt_) {
      for (auto& y : ys)
        if (!y.is_identity()) {
          y = y.inv();
          break;
        }
    }
    return ys;
  }

  Elem sample_N(int n, std::mt19937_64& rng) const {
    Elem g = ctx_->sample_sub(N_sub(n), rng);
    if (n + 1 <= levels()) g = g.mul(ctx_->sample_sub(N_sub(n + 1), rng));
    return g;
  }
  Elem sample_M(int n, std::mt19937_64& rng) const { return ctx_->sample_sub(step(n).M, rng); }

  std::function<std::string(const Elem&)> coset_key_N1() const {
    const FgContext* c = ctx_.get();
    if (mode_ == Mode::Full) {
      return [c](const Elem& g) { return c->coset_key_mod_L(g); };
    }
    // Paper mode: cosets of K^{(x27)} = Stab(4), i.e. depth-4 truncations.
    return [](const Elem& g) { return g.truncate(4).key(); };
  }

 private:
  std::shared_ptr<const FgContext> ctx_;
  Mode mode_;
  int paper_levels_;
  bool split_;
  bool corrupt_;
};

}  // namespace pskp
