#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "pskp/oracle.hpp"

namespace pskp {

// Section-6 style quantities on a small Cayley graph: spectrum of the
// normalized symmetric adjacency operator on Cay(G, S u S^-1), spectral gap,
// exact undirected diameter, the Diaconis--Saloff-Coste lower bound, and the
// l-infinity mixing time of the lazy walk T = (A + I)/2.
struct SpectralReport {
  uint64_t group_size = 0;
  int valence = 0;  // |S u S^-1|
  std::optional<double> lambda2;
  std::optional<double> gap;
  int diam_undirected = 0;
  double dsc_lower_bound = 0;  // (2 |S u S^-1| diam^2)^-1
  long long mixing_linf = 0;
  bool dense_solve = true;
  double tolerance = 0;            // reported for the iterative path
  std::vector<double> eigenvalues; // dense path only, descending
  double stochastic_drift = 0;     // max |1 - sum p| seen while mixing
};

namespace detail {

template <class Model>
struct IndexedCayley {
  std::vector<std::vector<uint32_t>> maps;  // per symmetric generator: i -> i*s
  uint64_t n = 0;
};

template <class Model>
IndexedCayley<Model> index_cayley(const Model& model, const std::vector<typename Model::Elem>& sym,
                                  uint64_t limit) {
  IndexedCayley<Model> g;
  std::unordered_map<std::string, uint32_t> index;
  std::vector<typename Model::Elem> elems;
  elems.push_back(model.id());
  index.emplace(model.key(elems[0]), 0);
  for (size_t i = 0; i < elems.size(); ++i) {
    for (const auto& s : sym) {
      auto h = model.mul(elems[i], s);
      std::string k = model.key(h);
      if (index.count(k)) continue;
      if (elems.size() >= limit) throw ThresholdError("cayley graph exceeded the size threshold");
      index.emplace(std::move(k), static_cast<uint32_t>(elems.size()));
      elems.push_back(std::move(h));
    }
  }
  g.n = elems.size();
  g.maps.resize(sym.size());
  for (size_t si = 0; si < sym.size(); ++si) {
    g.maps[si].resize(g.n);
    for (uint64_t i = 0; i < g.n; ++i)
      g.maps[si][i] = index.at(model.key(model.mul(elems[i], sym[si])));
  }
  return g;
}

}  // namespace detail

template <class Model>
SpectralReport spectral_report(const Model& model, const std::vector<typename Model::Elem>& gens,
                               std::optional<uint64_t> expected_order = {},
                               uint64_t size_threshold = 1'000'000, uint64_t dense_threshold = 2000,
                               long long mixing_cap = 50'000'000) {
  auto sym = symmetrize(model, gens);
  auto graph = detail::index_cayley(model, sym, size_threshold);
  uint64_t n = graph.n;
  if (expected_order && n != *expected_order)
    throw std::invalid_argument("spectral: S does not generate (closure " + std::to_string(n) +
                                " of " + std::to_string(*expected_order) + ")");
  int d = static_cast<int>(sym.size());
  SpectralReport rep;
  rep.group_size = n;
  rep.valence = d;

  // exact undirected diameter (vertex-transitive: eccentricity of the identity)
  {
    std::vector<int> dist(n, -1);
    dist[0] = 0;
    std::deque<uint32_t> q{0};
    while (!q.empty()) {
      uint32_t v = q.front();
      q.pop_front();
      for (const auto& mp : graph.maps) {
        uint32_t w = mp[v];
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          rep.diam_undirected = std::max(rep.diam_undirected, dist[w]);
          q.push_back(w);
        }
      }
    }
  }
  rep.dsc_lower_bound =
      rep.diam_undirected == 0 ? 1.0 : 1.0 / (2.0 * d * rep.diam_undirected * rep.diam_undirected);

  if (n > 1 && n <= dense_threshold) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
    double w = 1.0 / d;
    for (const auto& mp : graph.maps)
      for (uint64_t i = 0; i < n; ++i) A(static_cast<long>(i), mp[i]) += w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + n);
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), std::greater<double>());
    rep.lambda2 = rep.eigenvalues[1];
    rep.gap = 1.0 - *rep.lambda2;
    rep.dense_solve = true;
    rep.tolerance = 1e-12;
  } else if (n > 1) {
    // Deflated power iteration on B = (A + I)/2 against the constant vector.
    std::vector<double> v(n), av(n);
    std::mt19937_64 rng(12345);
    for (auto& x : v) x = std::uniform_real_distribution<double>(-1, 1)(rng);
    auto deflate = [&](std::vector<double>& x) {
      double mean = 0;
      for (double t : x) mean += t;
      mean /= static_cast<double>(n);
      for (double& t : x) t -= mean;
    };
    auto normalize = [&](std::vector<double>& x) {
      double s = 0;
      for (double t : x) s += t * t;
      s = std::sqrt(s);
      if (s > 0)
        for (double& t : x) t /= s;
      return s;
    };
    deflate(v);
    normalize(v);
    double mu = 0, prev = 2;
    int iters = 0;
    const double tol = 1e-11;
    while (std::abs(mu - prev) > tol && iters < 200000) {
      prev = mu;
      std::fill(av.begin(), av.end(), 0.0);
      for (const auto& mp : graph.maps)
        for (uint64_t i = 0; i < n; ++i) av[mp[i]] += v[i];
      for (uint64_t i = 0; i < n; ++i) av[i] = 0.5 * (av[i] / d + v[i]);
      deflate(av);
      mu = 0;
      for (uint64_t i = 0; i < n; ++i) mu += av[i] * v[i];
      normalize(av);
      v.swap(av);
      ++iters;
    }
    rep.lambda2 = 2 * mu - 1;  // undo the (A+I)/2 shift
    rep.gap = 1.0 - *rep.lambda2;
    rep.dense_solve = false;
    rep.tolerance = std::abs(mu - prev);
  }

  // l-infinity mixing time of T = (A + I)/2 from the Dirac mass at e.
  {
    std::vector<double> p(n, 0.0), np(n);
    p[0] = 1.0;
    double target = 1.0 / (2.0 * static_cast<double>(n));
    double uniform = 1.0 / static_cast<double>(n);
    long long l = 0;
    auto linf = [&](const std::vector<double>& x) {
      double m = 0;
      for (double t : x) m = std::max(m, std::abs(t - uniform));
      return m;
    };
    while (linf(p) > target) {
      std::fill(np.begin(), np.end(), 0.0);
      for (uint64_t i = 0; i < n; ++i) np[i] += 0.5 * p[i];
      double w = 0.5 / d;
      for (const auto& mp : graph.maps)
        for (uint64_t i = 0; i < n; ++i) np[mp[i]] += w * p[i];
      p.swap(np);
      ++l;
      double sum = 0;
      for (double t : p) sum += t;
      rep.stochastic_drift = std::max(rep.stochastic_drift, std::abs(1.0 - sum));
      if (l > mixing_cap) throw ThresholdError("mixing time exceeded the iteration cap");
    }
    rep.mixing_linf = l;
  }
  return rep;
}

template <class Model>
long long mixing_time_linf(const Model& model, const std::vector<typename Model::Elem>& gens,
                           std::optional<uint64_t> expected_order = {},
                           uint64_t size_threshold = 1'000'000) {
  return spectral_report(model, gens, expected_order, size_threshold).mixing_linf;
}

}  // namespace pskp
