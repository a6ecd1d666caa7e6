#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>

#include "oscillab/broadnorm.hpp"

namespace osc {

void BroadNormConfig::check(int n) const {
  if (k < 2 || k > n - 1) throw ArgumentError("BroadNormConfig: need 2 <= k <= n-1");
  if (A < 1) throw ArgumentError("BroadNormConfig: A must be at least 1");
  if (K < 2) throw ArgumentError("BroadNormConfig: K must be at least 2");
  if (p < 2) throw ArgumentError("BroadNormConfig: p must be at least 2");
  if (grassmann_samples < A) throw ArgumentError("BroadNormConfig: need at least A samples");
}

bool cap_in_subspace(const CapDirections& dirs, const Subspace& V, double K) {
  for (const auto& d : dirs)
    if (angle_to_subspace(d, V) < 1.0 / K) return true;
  return false;
}

namespace {

std::vector<int> by_mass(const Vec& masses) {
  std::vector<int> order(masses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return masses[a] > masses[b]; });
  return order;
}

void subsets(int S, int a, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> idx(a);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!visit(idx)) return;
    int i = a - 1;
    while (i >= 0 && idx[i] == S - a + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < a; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<Subspace> grassmann_samples(int n, const std::vector<CapDirections>& caps,
                                        const Vec& masses, const BroadNormConfig& cfg) {
  const int dim = cfg.k - 1;
  std::vector<Vec> design;
  for (int i = 0; i < n - 1; ++i)
    for (double s : {1.0, -1.0}) {
      Vec v(n, 0.0);
      v[n - 1] = 1.0 / std::sqrt(2.0);
      v[i] = s / std::sqrt(2.0);
      design.push_back(v);
    }
  std::vector<Subspace> net;
  if (dim <= static_cast<int>(design.size()))
    subsets(static_cast<int>(design.size()), dim, [&](const std::vector<int>& idx) {
      std::vector<Vec> vs;
      for (int i : idx) vs.push_back(design[i]);
      Subspace V = Subspace::span(vs);
      if (V.dim() == dim) net.push_back(V);
      return true;
    });

  std::vector<Subspace> adapted;
  std::vector<Vec> top;
  for (int c : by_mass(masses))
    if (masses[c] > 0 && !caps[c].empty()) top.push_back(caps[c].front());
  for (std::size_t i = 0; i < top.size(); ++i) {
    std::vector<Vec> vs{top[i]};
    for (std::size_t j = i + 1; j < top.size() && static_cast<int>(vs.size()) < dim; ++j)
      vs.push_back(top[j]);
    for (std::size_t j = 0; j < design.size() && static_cast<int>(vs.size()) < dim; ++j)
      vs.push_back(design[j]);
    Subspace V = Subspace::span(vs);
    if (V.dim() == dim) adapted.push_back(V);
  }

  const std::size_t total = cfg.grassmann_samples;
  const std::size_t want_adapted = std::max<std::size_t>(std::max(1, cfg.A), total / 2);
  std::vector<Subspace> out;
  std::size_t ia = 0, in = 0;
  while (out.size() < total && ia < adapted.size() && ia < want_adapted) out.push_back(adapted[ia++]);
  while (out.size() < total && in < net.size()) out.push_back(net[in++]);
  while (out.size() < total && ia < adapted.size()) out.push_back(adapted[ia++]);
  return out;
}

double broad_local(const Vec& masses, const std::vector<CapDirections>& caps,
                   const std::vector<Subspace>& samples, const BroadNormConfig& cfg) {
  if (masses.size() != caps.size()) throw ArgumentError("broad_local: masses/caps mismatch");
  const std::vector<int> order = by_mass(masses);
  const int T = static_cast<int>(order.size());
  int live = 0;
  while (live < T && masses[order[live]] > 0) ++live;
  if (live == 0) return 0.0;
  const int S = static_cast<int>(samples.size());
  if (S == 0) return masses[order[0]];
  const int words = (live + 63) / 64;
  std::vector<std::vector<std::uint64_t>> cover(S, std::vector<std::uint64_t>(words, 0));
  for (int s = 0; s < S; ++s)
    for (int j = 0; j < live; ++j)
      if (cap_in_subspace(caps[order[j]], samples[s], cfg.K)) cover[s][j / 64] |= 1ull << (j % 64);
  const int a = std::min(cfg.A, S);
  double best = masses[order[0]];
  std::vector<std::uint64_t> u(words);
  subsets(S, a, [&](const std::vector<int>& idx) {
    std::fill(u.begin(), u.end(), 0);
    for (int s : idx)
      for (int w = 0; w < words; ++w) u[w] |= cover[s][w];
    double v = 0.0;
    for (int j = 0; j < live; ++j)
      if (!(u[j / 64] >> (j % 64) & 1)) {
        v = masses[order[j]];
        break;
      }
    best = std::min(best, v);
    return best > 0.0;
  });
  return best;
}

double broad_local(const Vec& masses, const std::vector<CapDirections>& caps,
                   const BroadNormConfig& cfg) {
  const int n = caps.empty() || caps[0].empty() ? cfg.k + 1 : static_cast<int>(caps[0][0].size());
  return broad_local(masses, caps, grassmann_samples(n, caps, masses, cfg), cfg);
}

namespace {

struct Tiling {
  std::vector<int> count;  // cubes per axis
  std::vector<Vec> cube_masses;
  Vec weights;
};

Tiling tile(const CapField& f, const Box& U, const BroadNormConfig& cfg) {
  const int n = f.dim;
  const double side = cfg.K * cfg.K;
  Tiling t;
  std::size_t cubes = 1;
  for (int a = 0; a < n; ++a) {
    const double len = U.hi[a] - U.lo[a];
    t.count.push_back(len > 0 ? static_cast<int>(std::ceil(len / side - 1e-12)) : 0);
    cubes *= t.count.back();
  }
  const std::size_t ncaps = f.caps.size();
  t.cube_masses.assign(cubes, Vec(ncaps, 0.0));
  t.weights.assign(cubes, 0.0);
  if (cubes == 0) return t;
  for (std::size_t c = 0; c < cubes; ++c) {
    std::size_t rem = c;
    double w = 1.0;
    for (int a = n - 1; a >= 0; --a) {
      const int q = static_cast<int>(rem % t.count[a]);
      rem /= t.count[a];
      const double lo = U.lo[a] + q * side;
      w *= std::max(0.0, std::min(lo + side, U.hi[a]) - lo) / side;
    }
    t.weights[c] = w;
  }
  std::size_t nodes = 1;
  for (int s : f.shape) nodes *= s;
  const double cell = std::pow(f.h, n);
  for (std::size_t node = 0; node < nodes; ++node) {
    std::size_t rem = node, cube = 0, stride = 1;
    bool inside = true;
    for (int a = n - 1; a >= 0; --a) {
      const int j = static_cast<int>(rem % f.shape[a]);
      rem /= f.shape[a];
      const double x = f.lo[a] + f.h * (j + 0.5);
      const double q = std::floor((x - U.lo[a]) / side);
      if (q < 0 || q >= t.count[a]) {
        inside = false;
        break;
      }
      cube += static_cast<std::size_t>(q) * stride;
      stride *= t.count[a];
    }
    if (!inside) continue;
    for (std::size_t c = 0; c < ncaps; ++c)
      t.cube_masses[cube][c] += std::pow(std::abs(f.values[c][node]), cfg.p) * cell;
  }
  return t;
}

double assemble(const CapField& f, const Box& U, const BroadNormConfig& cfg, bool parallel) {
  cfg.check(f.dim);
  if (static_cast<int>(U.lo.size()) != f.dim || static_cast<int>(U.hi.size()) != f.dim)
    throw ArgumentError("broad_norm: region dimension mismatch");
  Tiling t = tile(f, U, cfg);
  const int cubes = static_cast<int>(t.weights.size());
  Vec mu(cubes, 0.0);
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 1) if (parallel)
  for (int c = 0; c < cubes; ++c)
    if (t.weights[c] > 0) mu[c] = broad_local(t.cube_masses[c], f.caps, cfg);
  double s = 0.0;
  for (int c = 0; c < cubes; ++c) s += t.weights[c] * mu[c];
  return std::pow(s, 1.0 / cfg.p);
}

}  // namespace

double broad_norm(const CapField& field, const Box& U, const BroadNormConfig& cfg) {
  return assemble(field, U, cfg, true);
}

double broad_norm_serial(const CapField& field, const Box& U, const BroadNormConfig& cfg) {
  return assemble(field, U, cfg, false);
}

double max_cap_norm(const CapField& field, const Box& U, const BroadNormConfig& cfg) {
  Tiling t = tile(field, U, cfg);
  double s = 0.0;
  for (std::size_t c = 0; c < t.weights.size(); ++c) {
    double m = 0.0;
    for (double v : t.cube_masses[c]) m = std::max(m, v);
    s += t.weights[c] * m;
  }
  return std::pow(s, 1.0 / cfg.p);
}

}  // namespace osc
