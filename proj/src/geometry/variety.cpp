#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "oscillab/geometry.hpp"

namespace osc {

int Variety::degree() const {
  int d = 0;
  for (const auto& p : polys) d = std::max(d, p.degree());
  return d;
}

Vec Variety::residual(const Vec& x) const {
  Vec r(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) r[i] = polys[i].eval(x);
  return r;
}

Eigen::MatrixXd Variety::jacobian(const Vec& x) const {
  Eigen::MatrixXd J(polys.size(), ambient_dim);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    Vec g = polys[i].gradient(x);
    for (int j = 0; j < ambient_dim; ++j) J(i, j) = g[j];
  }
  return J;
}

std::optional<Vec> Variety::project(const Vec& x, int iters, double tol) const {
  if (polys.empty()) return x;
  Vec cur = x;
  auto size = [](const Vec& r) { return norm(r); };
  Vec F = residual(cur);
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd J = jacobian(cur);
    const double thresh = tol * (1.0 + J.norm() * (1.0 + norm(cur)));
    if (size(F) <= thresh) return cur;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-14 * std::max(1.0, sv(0))) return std::nullopt;
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(F.data(), F.size());
    Eigen::VectorXd step = svd.solve(rhs);
    double damp = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k) {
      Vec trial(cur.size());
      for (std::size_t i = 0; i < cur.size(); ++i) trial[i] = cur[i] - damp * step(i);
      Vec Ft = residual(trial);
      if (size(Ft) < size(F)) {
        cur = std::move(trial);
        F = std::move(Ft);
        moved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!moved) break;
  }
  Eigen::MatrixXd J = jacobian(cur);
  if (size(F) <= tol * (1.0 + J.norm() * (1.0 + norm(cur)))) return cur;
  return std::nullopt;
}

std::vector<Vec> Variety::sample(const Vec& center, double radius, int count,
                                 CounterRng& rng) const {
  std::vector<Vec> out;
  const int n = ambient_dim;
  for (int attempt = 0; attempt < 50 * count && static_cast<int>(out.size()) < count; ++attempt) {
    Vec seed(n);
    double r2;
    do {
      r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        seed[a] = rng.uniform(-1.0, 1.0);
        r2 += seed[a] * seed[a];
      }
    } while (r2 > 1.0);
    for (int a = 0; a < n; ++a) seed[a] = center[a] + radius * seed[a];
    auto z = project(seed);
    if (z && norm(sub(*z, center)) <= radius) out.push_back(*z);
  }
  return out;
}

Eigen::MatrixXd Variety::tangent_basis(const Vec& z) const {
  const int n = ambient_dim;
  if (polys.empty()) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd J = jacobian(z);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const int k = static_cast<int>(polys.size());
  if (sv.size() < k || sv(k - 1) <= 1e-8 * std::max(J.norm(), 1e-300))
    throw DegenerateError("tangent_basis: gradients are linearly dependent at the sample");
  return svd.matrixV().rightCols(n - k);
}

bool Variety::contains(const Vec& x, double tol) const {
  for (const auto& p : polys)
    if (std::abs(p.eval(x)) > tol * (1.0 + norm(p.gradient(x)))) return false;
  return true;
}

Variety whole_space(int n) { return Variety{n, {}}; }

Variety hyperplane(const Vec& normal, double offset) {
  return Variety{static_cast<int>(normal.size()), {Polynomial::linear(normal, -offset)}};
}

Variety sphere(const Vec& center, double radius) {
  const int n = static_cast<int>(center.size());
  Polynomial p = Polynomial::constant(n, -radius * radius);
  for (int i = 0; i < n; ++i) {
    Polynomial d = Polynomial::variable(n, i) - Polynomial::constant(n, center[i]);
    p = p + d * d;
  }
  return Variety{n, {p}};
}

Subspace Subspace::span(const std::vector<Vec>& vectors, double tol) {
  Subspace s;
  if (vectors.empty()) return s;
  const int n = static_cast<int>(vectors[0].size());
  Eigen::MatrixXd A(n, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j)
    for (int i = 0; i < n; ++i) A(i, j) = vectors[j][i];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());
  Eigen::MatrixXd Q = qr.householderQ();
  s.basis = Q.leftCols(rank);
  return s;
}

Vec Subspace::project(const Vec& x) const {
  Eigen::Map<const Eigen::VectorXd> v(x.data(), x.size());
  Eigen::VectorXd p = basis * (basis.transpose() * v);
  return Vec(p.data(), p.data() + p.size());
}

Vec gauss_map(const Vec& omega) {
  Vec g = omega;
  g.push_back(1.0);
  return scale(1.0 / norm(g), g);
}

Vec generalized_cross(const std::vector<Vec>& vectors) {
  const int n = static_cast<int>(vectors.size()) + 1;
  Eigen::MatrixXd M(n, n - 1);
  for (int j = 0; j < n - 1; ++j)
    for (int i = 0; i < n; ++i) M(i, j) = vectors[j][i];
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (int r = 0, rr = 0; r < n; ++r) {
      if (r == i) continue;
      minor.row(rr++) = M.row(r);
    }
    double det = n == 1 ? 1.0 : minor.determinant();
    out[i] = ((i + n - 1) % 2 == 0 ? 1.0 : -1.0) * det;
  }
  return out;
}

double angle_to_subspace(const Vec& dir, const Eigen::MatrixXd& basis) {
  const double nd = norm(dir);
  if (basis.cols() == 0) return kPi / 2;
  Eigen::Map<const Eigen::VectorXd> v(dir.data(), dir.size());
  Eigen::VectorXd res = v - basis * (basis.transpose() * v);
  return std::asin(std::min(1.0, res.norm() / nd));
}

double angle_to_subspace(const Vec& dir, const Subspace& V) {
  return angle_to_subspace(dir, V.basis);
}

bool cap_in_V(const std::vector<Vec>& directions, const Subspace& V, double K) {
  for (const auto& d : directions)
    if (angle_to_subspace(d, V) < 1.0 / K) return true;
  return false;
}

std::vector<Vec> cap_directions(const Vec& centre, double side) {
  const int d = static_cast<int>(centre.size());
  std::vector<Vec> out{gauss_map(centre)};
  for (int c = 0; c < (1 << d); ++c) {
    Vec w = centre;
    for (int a = 0; a < d; ++a) w[a] += ((c >> a) & 1 ? 0.5 : -0.5) * side;
    out.push_back(gauss_map(w));
  }
  return out;
}

}  // namespace osc
