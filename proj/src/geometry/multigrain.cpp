#include <algorithm>
#include <cmath>
#include <set>

#include "oscillab/geometry.hpp"

namespace osc {

int Multigrain::complexity() const {
  int d = 0;
  for (const auto& g : grains) d = std::max(d, g.variety.degree());
  return d;
}

void Multigrain::validate(CounterRng& rng, int samples, double tol) const {
  if (grains.empty()) throw ArgumentError("Multigrain: no grains");
  if (scales.size() != grains.size() || deltas.size() != grains.size())
    throw ArgumentError("Multigrain: scales/deltas must match the grain count");
  const int n = grains[0].variety.ambient_dim;
  for (std::size_t l = 0; l < grains.size(); ++l) {
    const auto& g = grains[l];
    if (g.variety.ambient_dim != n) throw ArgumentError("Multigrain: ambient dimensions differ");
    if (g.variety.dim() != n - static_cast<int>(l))
      throw ArgumentError("Multigrain: grain " + std::to_string(l) + " has dimension " +
                          std::to_string(g.variety.dim()) + ", expected " +
                          std::to_string(n - static_cast<int>(l)));
    if (!(g.radius > 0)) throw ArgumentError("Multigrain: non-positive radius");
    if (l == 0) continue;
    const auto& up = grains[l - 1];
    if (scales[l] > scales[l - 1]) throw ArgumentError("Multigrain: scales must not increase");
    if (norm(sub(g.center, up.center)) + g.radius > up.radius * (1.0 + 1e-12))
      throw ArgumentError("Multigrain: ball " + std::to_string(l) + " is not nested");
    for (const auto& z : g.variety.sample(g.center, g.radius, samples, rng))
      if (!up.variety.contains(z, tol))
        throw ArgumentError("Multigrain: variety " + std::to_string(l) +
                            " is not contained in its parent at a sampled point");
  }
}

namespace {

struct LevelTube {
  const Tube* tube;
  std::vector<Vec> core;  // core points inside the level's ball
  bool in_variety = false;
};

double line_distance(const Tube& T, const Vec& p) {
  SpaceTimePoint q{Vec(p.begin(), p.end() - 1), p.back()};
  return T.distance(q);
}

}  // namespace

int nested_direction_count(const Multigrain& mg, const std::vector<std::vector<Tube>>& tubes,
                           const NestedConfig& cfg) {
  const std::size_t L = mg.grains.size();
  if (tubes.size() != L) throw ArgumentError("nested_direction_count: one tube family per grain");
  std::vector<std::vector<LevelTube>> levels(L);
  for (std::size_t l = 0; l < L; ++l) {
    const Grain& g = mg.grains[l];
    const double nb = std::pow(mg.scales[l], 0.5 + mg.deltas[l]);
    for (const auto& T : tubes[l]) {
      LevelTube lt{&T, {}, false};
      if (!T.empty) {
        const double tc = g.center.back();
        for (int i = 0; i < cfg.samples; ++i) {
          double t = tc - g.radius + 2.0 * g.radius * (i + 0.5) / cfg.samples;
          Vec p = T.core_x(t);
          p.push_back(t);
          if (norm(sub(p, g.center)) <= g.radius) lt.core.push_back(std::move(p));
        }
      }
      // condition (3): T_j inside N_{r_j^{1/2+delta_j}}(S_j)
      lt.in_variety = !lt.core.empty();
      for (const auto& p : lt.core) {
        if (!lt.in_variety) break;
        auto z = g.variety.project(p);
        lt.in_variety = z && norm(sub(p, *z)) <= nb;
      }
      levels[l].push_back(std::move(lt));
    }
  }
  // conditions (1) and (2) between an upper level a and a lower level b > a
  auto compatible = [&](std::size_t a, const LevelTube& A, std::size_t b, const LevelTube& B) {
    if (norm(sub(A.tube->omega, B.tube->omega)) > cfg.constant / std::sqrt(mg.scales[b]))
      return false;
    const double lim = cfg.constant * std::pow(mg.scales[a], 0.5 * (1.0 + cfg.delta));
    for (const auto& p : B.core)
      if (line_distance(*A.tube, p) > lim) return false;
    return true;
  };
  std::vector<const LevelTube*> chain(L, nullptr);
  std::function<bool(std::size_t)> extend = [&](std::size_t l) {
    if (l == L) return true;
    for (const auto& cand : levels[l]) {
      if (!cand.in_variety) continue;
      bool ok = true;
      for (std::size_t a = 0; a < l && ok; ++a) ok = compatible(a, *chain[a], l, cand);
      if (!ok) continue;
      chain[l] = &cand;
      if (extend(l + 1)) return true;
    }
    return false;
  };
  std::set<int> caps;
  for (const auto& top : levels[0]) {
    if (!top.in_variety || caps.count(top.tube->cap)) continue;
    chain[0] = &top;
    if (extend(1)) caps.insert(top.tube->cap);
  }
  return static_cast<int>(caps.size());
}

}  // namespace osc
