#include <cmath>

#include "oscillab/wavepackets.hpp"

namespace osc {

namespace {

constexpr double kRamp = 0.05;                  // psi transition half-width, in cap sides
constexpr double kTildeHalf = 0.5 * 11.0 / 9.0;  // half side of the (11/9)-dilate
constexpr double kPsiHalf = 0.55;                // half side of the (11/10)-dilate

double step(double u) { return smooth_step((u + kRamp) / (2.0 * kRamp)); }

}  // namespace

double psi_axis(double u, int j) { return step(u - j) - step(u - j - 1); }

CapFamily make_caps(double r, int dim) {
  if (!(r >= 1.0)) throw ArgumentError("make_caps: r must be >= 1");
  if (dim < 1) throw ArgumentError("make_caps: dim must be >= 1");
  CapFamily f;
  f.r = r;
  f.dim = dim;
  f.period = 1.0 / std::sqrt(r);
  f.side = 9.0 / 11.0 * f.period;
  const double reach = 2.0 + f.side;
  const int jmin = static_cast<int>(std::floor(-reach / f.side));
  const int jmax = static_cast<int>(std::ceil(reach / f.side));
  std::vector<int> idx(dim, jmin);
  while (true) {
    double d2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      double lo = idx[a] * f.side, hi = lo + f.side;
      double c = lo > 0 ? lo : (hi < 0 ? hi : 0.0);
      d2 += c * c;
    }
    if (d2 <= reach * reach) {
      Cap c;
      c.index = idx;
      c.side = f.side;
      c.center.resize(dim);
      for (int a = 0; a < dim; ++a) c.center[a] = (idx[a] + 0.5) * f.side;
      f.lookup_[idx] = static_cast<int>(f.caps.size());
      f.caps.push_back(std::move(c));
    }
    int a = dim - 1;
    while (a >= 0 && ++idx[a] >= jmax) idx[a--] = jmin;
    if (a < 0) break;
  }
  return f;
}

int CapFamily::find(const std::vector<int>& index) const {
  auto it = lookup_.find(index);
  return it == lookup_.end() ? -1 : it->second;
}

int CapFamily::locate(const Vec& w) const {
  std::vector<int> idx(dim);
  for (int a = 0; a < dim; ++a) {
    double u = w[a] / side;
    double fl = std::floor(u);
    idx[a] = static_cast<int>(fl);
    if (u == fl) idx[a] -= 1;  // shared face: smaller index wins
  }
  return find(idx);
}

double CapFamily::psi(std::size_t i, const Vec& w) const {
  double v = 1.0;
  for (int a = 0; a < dim && v != 0.0; ++a) v *= psi_axis(w[a] / side, caps[i].index[a]);
  return v;
}

double CapFamily::psi_tilde(std::size_t i, const Vec& w) const {
  double v = 1.0;
  for (int a = 0; a < dim && v != 0.0; ++a) {
    double u = std::abs(w[a] - caps[i].center[a]) / side;
    v *= smooth_step((kTildeHalf - u) / (kTildeHalf - kPsiHalf));
  }
  return v;
}

double CapFamily::psi_sum(const Vec& w) const {
  std::vector<int> base(dim), idx(dim);
  for (int a = 0; a < dim; ++a) base[a] = static_cast<int>(std::floor(w[a] / side)) - 1;
  int combos = 1;
  for (int a = 0; a < dim; ++a) combos *= 3;
  double s = 0.0;
  for (int c = 0; c < combos; ++c) {
    int rem = c;
    for (int a = 0; a < dim; ++a) {
      idx[a] = base[a] + rem % 3;
      rem /= 3;
    }
    int k = find(idx);
    if (k >= 0) s += psi(k, w);
  }
  return s;
}

Vec CapFamily::cell_lo(std::size_t i) const {
  Vec lo = caps[i].center;
  for (double& x : lo) x -= 0.5 * period;
  return lo;
}

}  // namespace osc
