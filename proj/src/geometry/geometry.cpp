#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillab/geometry.hpp"

namespace osc {

namespace {

// Core points of the tube inside the ball (center in R^n).
std::vector<Vec> core_points_in(const Tube& tube, const Vec& center, double radius, int samples) {
  std::vector<Vec> pts;
  if (tube.empty) return pts;
  const double tc = center.back();
  for (int i = 0; i < samples; ++i) {
    double t = tc - radius + 2.0 * radius * (i + 0.5) / samples;
    Vec p = tube.core_x(t);
    p.push_back(t);
    if (norm(sub(p, center)) <= radius) pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

bool tangency_check(const Tube& tube, const Grain& grain, double delta_m,
                    const TangencyConfig& cfg) {
  auto pts = core_points_in(tube, grain.center, grain.radius, cfg.samples);
  if (pts.empty()) return false;
  const double nbhd = std::pow(tube.r, 0.5 + delta_m);
  const double max_angle = cfg.constant * std::pow(tube.r, -0.5 + delta_m);
  const Vec dir = tube.direction();
  for (const auto& p : pts) {
    auto z = grain.variety.project(p);
    if (!z) return false;
    if (norm(sub(p, *z)) > nbhd) return false;
    if (angle_to_subspace(dir, grain.variety.tangent_basis(*z)) > max_angle) return false;
  }
  return true;
}

Vec phi_map(const PhaseField& pf, double t0, const Vec& omega, const Vec& x) {
  Vec y(x.size());
  double q = pf.lambda * pf.lambda;
  for (std::size_t a = 0; a < x.size(); ++a) {
    y[a] = x[a] - t0 * omega[a];
    q += y[a] * y[a];
  }
  return scale(pf.lambda / std::sqrt(q), y);
}

Eigen::MatrixXd phi_jacobian(const PhaseField& pf, double t0, const Vec& omega, const Vec& x) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd y(d);
  for (int a = 0; a < d; ++a) y(a) = x[a] - t0 * omega[a];
  const double s2 = pf.lambda * pf.lambda + y.squaredNorm();
  const double s = std::sqrt(s2);
  Eigen::MatrixXd J = s2 * Eigen::MatrixXd::Identity(d, d) - y * y.transpose();
  return J * (pf.lambda / (s2 * s));
}

namespace {

int numeric_rank(const Eigen::MatrixXd& A, double rel = 1e-8) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * std::max(sv(0), 1e-300)) ++r;
  return r;
}

}  // namespace

TransversalityResult transversality_sampler(const SmoothMap& phi, const AffineFamily& pi,
                                            const Vec& c, const Variety& Z,
                                            const std::vector<Vec>& seeds) {
  const int n = Z.ambient_dim;
  const int k = static_cast<int>(Z.polys.size());
  const int p = static_cast<int>(pi.M.rows());
  Eigen::Map<const Eigen::VectorXd> cv(c.data(), c.size());
  auto F = [&](const Vec& x) {
    Eigen::VectorXd r(k + p);
    for (int i = 0; i < k; ++i) r(i) = Z.polys[i].eval(x);
    Vec fx = phi.f(x);
    r.tail(p) = pi.M * Eigen::Map<const Eigen::VectorXd>(fx.data(), fx.size()) - cv;
    return r;
  };
  auto J = [&](const Vec& x) {
    Eigen::MatrixXd m(k + p, n);
    if (k) m.topRows(k) = Z.jacobian(x);
    m.bottomRows(p) = pi.M * phi.jac(x);
    return m;
  };

  std::vector<Vec> found;
  for (const auto& seed : seeds) {
    Vec x = seed;
    Eigen::VectorXd r = F(x);
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      Eigen::MatrixXd Jx = J(x);
      if (r.norm() <= 1e-10 * (1.0 + Jx.norm() * (1.0 + norm(x)))) {
        ok = true;
        break;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Jx, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Eigen::VectorXd step = svd.solve(r);
      double damp = 1.0;
      bool moved = false;
      for (int h = 0; h < 30; ++h) {
        Vec trial(n);
        for (int a = 0; a < n; ++a) trial[a] = x[a] - damp * step(a);
        Eigen::VectorXd rt = F(trial);
        if (rt.norm() < r.norm()) {
          x = std::move(trial);
          r = rt;
          moved = true;
          break;
        }
        damp *= 0.5;
      }
      if (!moved) break;
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& f : found)
      if (norm(sub(f, x)) <= 1e-6 * (1.0 + norm(x))) dup = true;
    if (!dup) found.push_back(x);
  }

  TransversalityResult res;
  res.points = static_cast<int>(found.size());
  res.min_singular = std::numeric_limits<double>::infinity();
  for (const auto& x : found) {
    Eigen::MatrixXd NZ = Z.jacobian(x);
    Eigen::MatrixXd NP = pi.M * phi.jac(x);
    Eigen::MatrixXd N(k + p, n);
    if (k) N.topRows(k) = NZ;
    N.bottomRows(p) = NP;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(N);
    const auto& sv = svd.singularValues();
    double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    if (k + p > n) smin = 0.0;
    res.min_singular = std::min(res.min_singular, smin);
    if (smin < 1e-8) res.rank_warning = true;
    if (numeric_rank(N) != numeric_rank(NZ) + numeric_rank(NP)) res.transverse = false;
  }
  if (found.empty()) res.min_singular = 0.0;
  return res;
}

double delta_level(int n, int m) { return 0.02 * std::pow(2.0, n - m); }

}  // namespace osc
