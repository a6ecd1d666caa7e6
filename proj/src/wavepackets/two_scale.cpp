#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillab/wavepackets.hpp"

namespace osc {

TwoScaleLink two_scale_children(const PacketSet& big, std::size_t parent, const PacketSet& small,
                                const WaveConfig& cfg) {
  if (small.r > big.r) throw ArgumentError("two_scale_children: rho must not exceed r");
  const WavePacket& P = big.packets.at(parent);
  const Vec& w = big.caps.caps[P.cap].center;
  // v shifted by grad_w phi_{x0}(x~0; w_theta) = grad phi(x~0) - grad phi(x0)
  Vec target = axpy(1.0, sub(phase_grad_omega(big.pf, small.x0, w), phase_grad_omega(big.pf, big.x0, w)),
                    big.v_of(P));
  TwoScaleLink link;
  link.parent = parent;
  link.angle_threshold = cfg.angle_const / std::sqrt(small.r);
  link.disp_threshold = cfg.disp_const * std::pow(big.r, 0.5 * (1.0 + cfg.delta));
  for (std::size_t j = 0; j < small.packets.size(); ++j) {
    const WavePacket& c = small.packets[j];
    if (norm(sub(small.caps.caps[c.cap].center, w)) > link.angle_threshold) continue;
    if (norm(sub(small.v_of(c), target)) > link.disp_threshold) continue;
    link.children.push_back(j);
  }
  return link;
}

namespace {

// Parameter interval of the core inside the ball of radius rad; false if they miss.
bool clip(const Tube& T, const SpaceTimePoint& c, double rad, double& t0, double& t1) {
  Vec e(c.x.size());
  for (std::size_t a = 0; a < e.size(); ++a) e[a] = -T.offset[a] - c.x[a];
  const double A = 1.0 + dot(T.omega, T.omega);
  const double B = 2.0 * (dot(T.omega, e) - c.t);
  const double C = dot(e, e) + c.t * c.t - rad * rad;
  const double disc = B * B - 4 * A * C;
  if (disc < 0) return false;
  t0 = (-B - std::sqrt(disc)) / (2 * A);
  t1 = (-B + std::sqrt(disc)) / (2 * A);
  return true;
}

Vec core_point(const Tube& T, double t) {
  Vec p = T.core_x(t);
  p.push_back(t);
  return p;
}

double point_segment(const Vec& p, const Vec& a, const Vec& b) {
  Vec ab = sub(b, a);
  double L = dot(ab, ab);
  double s = L > 0 ? std::clamp(dot(sub(p, a), ab) / L, 0.0, 1.0) : 0.0;
  return norm(sub(p, axpy(s, ab, a)));
}

double directed(const Vec& a0, const Vec& a1, const Vec& b0, const Vec& b1, int samples) {
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double s = static_cast<double>(i) / samples;
    Vec p = axpy(s, sub(a1, a0), a0);
    worst = std::max(worst, point_segment(p, b0, b1));
  }
  return worst;
}

}  // namespace

double core_hausdorff(const Tube& a, const Tube& b, const Ball& ball, double pad, int samples) {
  if (a.empty || b.empty) return std::numeric_limits<double>::infinity();
  double a0, a1, b0, b1;
  const double rad = ball.radius + pad;
  // a core that misses the ball keeps its piece over the ball's time slab
  const double lo = ball.center.t - rad, hi = ball.center.t + rad;
  if (!clip(a, ball.center, rad, a0, a1)) a0 = lo, a1 = hi;
  if (!clip(b, ball.center, rad, b0, b1)) b0 = lo, b1 = hi;
  Vec pa0 = core_point(a, a0), pa1 = core_point(a, a1);
  Vec pb0 = core_point(b, b0), pb1 = core_point(b, b1);
  return std::max(directed(pa0, pa1, pb0, pb1, samples), directed(pb0, pb1, pa0, pa1, samples));
}

}  // namespace osc
