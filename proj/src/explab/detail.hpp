#pragma once

#include <fmt/format.h>

#include "oscillab/explab.hpp"

namespace osc::detail {

using Params = std::vector<std::pair<std::string, std::string>>;

template <class T>
std::pair<std::string, std::string> kv(std::string key, const T& value) {
  return {std::move(key), fmt::format("{}", value)};
}

inline CounterRng rng_for(const ExperimentConfig& cfg, std::string_view stream,
                          std::uint64_t index = 0) {
  return CounterRng(cfg.seed, stream).substream(index);
}

// Evaluation point on the light cone of the cap w = 1/2: x = t w, t = lambda.
inline SpaceTimePoint centre_point(int n, double lambda) {
  return SpaceTimePoint{Vec(n - 1, 0.5 * lambda), lambda};
}

inline Vec as_vec(const SpaceTimePoint& p) {
  Vec v = p.x;
  v.push_back(p.t);
  return v;
}

}  // namespace osc::detail
