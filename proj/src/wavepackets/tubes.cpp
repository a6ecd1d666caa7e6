#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillab/wavepackets.hpp"

namespace osc {

double empty_threshold(const PhaseField& pf) {
  const double c = 10.0 * pf.c_n;
  return c * pf.lambda / std::sqrt(1.0 + c * c);
}

Tube tube_of(const PacketSet& set, std::size_t packet, double delta) {
  const WavePacket& p = set.packets.at(packet);
  Tube t;
  t.cap = p.cap;
  t.r = set.r;
  t.omega = set.caps.caps[p.cap].center;
  t.a = sub(phase_grad_omega(set.pf, set.x0, t.omega), set.v_of(p));
  t.radius = std::pow(set.r, 0.5 + delta);
  const double la = norm(t.a);
  t.empty = la >= empty_threshold(set.pf);
  if (!t.empty) {
    const double l = set.pf.lambda;
    t.offset = scale(l / std::sqrt(l * l - la * la), t.a);
  }
  return t;
}

Vec Tube::core_x(double t) const {
  if (empty) throw DomainError("core_x: empty tube has no core line");
  Vec x(omega.size());
  for (std::size_t a = 0; a < x.size(); ++a) x[a] = t * omega[a] - offset[a];
  return x;
}

Vec Tube::direction() const {
  Vec u = omega;
  u.push_back(1.0);
  return scale(1.0 / norm(u), u);
}

double Tube::distance(const SpaceTimePoint& p) const {
  if (empty) return std::numeric_limits<double>::infinity();
  Vec diff(p.x.size() + 1);
  for (std::size_t a = 0; a < p.x.size(); ++a) diff[a] = p.x[a] + offset[a];
  diff.back() = p.t;
  Vec u = direction();
  double s = dot(diff, u);
  return norm(axpy(-s, u, diff));
}

bool Ball::contains(const SpaceTimePoint& p) const {
  double d2 = (p.t - center.t) * (p.t - center.t);
  for (std::size_t a = 0; a < p.x.size(); ++a)
    d2 += (p.x[a] - center.x[a]) * (p.x[a] - center.x[a]);
  return d2 <= radius * radius;
}

std::vector<SpaceTimePoint> ball_grid(const Ball& b, double h) {
  if (!(h > 0)) throw ArgumentError("ball_grid: spacing must be positive");
  const int n = static_cast<int>(b.center.x.size()) + 1;
  const int m = static_cast<int>(std::floor(b.radius / h));
  std::vector<int> idx(n, -m);
  std::vector<SpaceTimePoint> pts;
  while (true) {
    SpaceTimePoint p;
    p.x.resize(n - 1);
    for (int a = 0; a < n - 1; ++a) p.x[a] = b.center.x[a] + idx[a] * h;
    p.t = b.center.t + idx[n - 1] * h;
    if (b.contains(p)) pts.push_back(std::move(p));
    int a = n - 1;
    while (a >= 0 && ++idx[a] > m) idx[a--] = -m;
    if (a < 0) break;
  }
  return pts;
}

double essential_support_ratio(const PacketSet& set, std::size_t packet, const Tube& tube,
                               const Ball& ball, double h) {
  if (tube.empty) throw ArgumentError("essential_support_ratio: empty tube");
  auto pts = ball_grid(ball, h);
  for (double t = ball.center.t - ball.radius; t <= ball.center.t + ball.radius; t += h / 4) {
    SpaceTimePoint p{tube.core_x(t), t};
    if (ball.contains(p)) pts.push_back(std::move(p));
  }
  auto vals = eval_packets(set, {packet}, pts);
  double inside = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = tube.distance(pts[i]);
    double v = std::abs(vals[i]);
    if (d <= tube.radius) inside = std::max(inside, v);
    if (d > 2.0 * tube.radius) outside = std::max(outside, v);
  }
  if (inside == 0.0) return std::numeric_limits<double>::infinity();
  return outside / inside;
}

int near_orthogonality_count(const PacketSet& set, std::size_t t1,
                             const std::vector<std::size_t>& candidates, const Ball& ball, double h,
                             double threshold) {
  std::vector<std::size_t> which{t1};
  for (std::size_t c : candidates)
    if (c != t1) which.push_back(c);
  auto pts = ball_grid(ball, h);
  Eigen::MatrixXcd M = eval_packets_each(set, which, pts);
  const double n1 = M.col(0).norm();
  int count = 0;
  for (Eigen::Index k = 1; k < M.cols(); ++k) {
    double nk = M.col(k).norm();
    if (n1 == 0.0 || nk == 0.0) continue;
    if (std::abs(M.col(0).dot(M.col(k))) / (n1 * nk) > threshold) ++count;
  }
  return count;
}

std::vector<cplx> discrete_extension_sum(const PhaseField& pf, const std::vector<Vec>& D,
                                         const std::vector<cplx>& F,
                                         const std::vector<SpaceTimePoint>& points,
                                         double separation) {
  if (D.size() != F.size()) throw ArgumentError("discrete_extension_sum: |D| != |F|");
  for (std::size_t i = 0; i < D.size(); ++i)
    for (std::size_t j = i + 1; j < D.size(); ++j)
      if (norm(sub(D[i], D[j])) < separation)
        throw SeparationError("discrete_extension_sum: points " + std::to_string(i) + " and " +
                              std::to_string(j) + " closer than the separation");
  Nodes nd;
  nd.dim = D.empty() ? (points.empty() ? 0 : static_cast<int>(points[0].x.size()))
                     : static_cast<int>(D[0].size());
  for (std::size_t i = 0; i < D.size(); ++i) {
    nd.omega.insert(nd.omega.end(), D[i].begin(), D[i].end());
    nd.weights.push_back(F[i]);
  }
  return oscillatory_sum(pf, nd, points, false);
}

}  // namespace osc
