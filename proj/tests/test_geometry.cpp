#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oscillab/geometry.hpp"

using namespace osc;

namespace {

Tube line_tube(Vec omega, Vec offset, double r) {
  Tube T;
  T.omega = std::move(omega);
  T.offset = std::move(offset);
  T.r = r;
  T.radius = std::pow(r, 0.6);
  return T;
}

}  // namespace

TEST(Polynomial, ArithmeticMatchesPointwise) {
  const Polynomial x = Polynomial::variable(3, 0), y = Polynomial::variable(3, 1),
                   z = Polynomial::variable(3, 2);
  const Polynomial P = (x * x - y * 2.0 + Polynomial::constant(3, 1.5)) * (z - x * y);
  EXPECT_EQ(P.degree(), 4);
  CounterRng rng(1, "poly");
  for (int s = 0; s < 50; ++s) {
    const Vec p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double want = (p[0] * p[0] - 2 * p[1] + 1.5) * (p[2] - p[0] * p[1]);
    EXPECT_NEAR(P.eval(p), want, 1e-12 * std::max(1.0, std::abs(want)));
    const Vec g = P.gradient(p);
    for (int a = 0; a < 3; ++a) {
      Vec pp = p, pm = p;
      pp[a] += 1e-6;
      pm[a] -= 1e-6;
      EXPECT_NEAR(g[a], (P.eval(pp) - P.eval(pm)) / 2e-6, 1e-5 * std::max(1.0, std::abs(g[a])));
    }
    const Vec u{rng.normal(), rng.normal(), rng.normal()};
    const Vec c = P.restrict_to_line(p, u);
    for (double s2 : {-1.3, 0.2, 2.1}) {
      double horner = 0;
      for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) horner = horner * s2 + c[k];
      EXPECT_NEAR(horner, P.eval(axpy(s2, u, p)), 1e-9 * std::max(1.0, std::abs(horner)));
    }
  }
  const Polynomial zero = P - P;
  EXPECT_EQ(zero.eval({0.3, 0.1, 0.9}), 0.0);
}

TEST(Polynomial, RealRootsAndMonomials) {
  // (s - 1)(s - 2)(s + 3) = s^3 - 7 s + 6
  Vec r = real_roots({6, -7, 0, 1});
  std::sort(r.begin(), r.end());
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], -3, 1e-10);
  EXPECT_NEAR(r[1], 1, 1e-10);
  EXPECT_NEAR(r[2], 2, 1e-10);
  EXPECT_TRUE(real_roots({1, 0, 1}).empty());  // s^2 + 1
  // C(n + D, n) - 1 monomials of degree 1..D
  EXPECT_EQ(monomial_exponents(3, 2).size(), 9u);
  EXPECT_EQ(monomial_exponents(2, 3).size(), 9u);
}

TEST(Variety, ProjectionAndTangentSpace) {
  const Variety S = sphere({1.0, 2.0, 3.0}, 2.0);
  EXPECT_EQ(S.dim(), 2);
  CounterRng rng(4, "proj");
  for (int s = 0; s < 40; ++s) {
    const Vec x{rng.uniform(-1, 3), rng.uniform(0, 4), rng.uniform(1, 5)};
    const auto z = S.project(x);
    ASSERT_TRUE(z.has_value());
    EXPECT_NEAR(norm(sub(*z, {1.0, 2.0, 3.0})), 2.0, 1e-9);
    const Eigen::MatrixXd T = S.tangent_basis(*z);
    const Vec grad = S.polys[0].gradient(*z);
    for (int c = 0; c < T.cols(); ++c) {
      double d = 0;
      for (int a = 0; a < 3; ++a) d += T(a, c) * grad[a];
      EXPECT_NEAR(d, 0.0, 1e-9 * norm(grad));
    }
  }
  const Variety H = hyperplane({0.0, 0.0, 1.0}, 5.0);
  EXPECT_TRUE(H.contains({7.0, -3.0, 5.0}, 1e-12));
  EXPECT_FALSE(H.contains({7.0, -3.0, 5.1}, 1e-3));
  EXPECT_EQ(whole_space(4).dim(), 4);
}

TEST(Gauss, MapCrossAndAngles) {
  const Vec g0 = gauss_map({0.0, 0.0});
  EXPECT_EQ(g0, (Vec{0.0, 0.0, 1.0}));
  const Vec g1 = gauss_map({1.0, 0.0});
  EXPECT_NEAR(g1[0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g1[2], 1 / std::sqrt(2.0), 1e-15);
  const Vec a{1.0, 2.0, 0.5}, b{-0.3, 1.0, 4.0};
  const Vec c = generalized_cross({a, b});
  EXPECT_NEAR(dot(a, c), 0.0, 1e-12);
  EXPECT_NEAR(dot(b, c), 0.0, 1e-12);
  // agrees with the ordinary cross product in R^3
  EXPECT_NEAR(std::abs(c[0]), std::abs(a[1] * b[2] - a[2] * b[1]), 1e-12);
  const Subspace V = Subspace::span({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  EXPECT_NEAR(angle_to_subspace({0.6, 0.8, 0.0}, V), 0.0, 1e-12);
  EXPECT_NEAR(angle_to_subspace({0.0, 0.0, 1.0}, V), kPi / 2, 1e-12);
  EXPECT_NEAR(angle_to_subspace({std::cos(0.3), 0.0, std::sin(0.3)}, V), 0.3, 1e-12);
}

TEST(Tangency, AxisAlignedCases) {
  const double r = 256, dm = delta_level(2, 1);
  const Tube T = line_tube({0.0}, {-10.0}, r);  // core x = 10, direction e_t
  // {t = 500} has tangent space e_x; the tube is orthogonal to it
  EXPECT_FALSE(tangency_check(T, Grain{hyperplane({0.0, 1.0}, 500.0), {10.0, 500.0}, r}, dm));
  // {x = 10} contains the core
  EXPECT_TRUE(tangency_check(T, Grain{hyperplane({1.0, 0.0}, 10.0), {10.0, 500.0}, r}, dm));
}

TEST(Tangency, ConstructedAngles) {
  const double r = 256, dm = delta_level(3, 2);
  const double bound = TangencyConfig{}.constant * std::pow(r, -0.5 + dm);
  CounterRng rng(6, "tilt");
  for (int s = 0; s < 20; ++s) {
    const Vec w{rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)};
    const Tube T = line_tube(w, {0.0, 0.0}, r);
    const Vec dir = T.direction();
    // a unit normal to dir, then tilt the plane's normal towards dir by angle a
    Vec e{-dir[2], 0.0, dir[0]};
    e = scale(1.0 / norm(e), e);
    const Vec c{w[0] * 1000, w[1] * 1000, 1000};
    for (auto [factor, want] : {std::pair{2.0, false}, std::pair{0.1, true}}) {
      const double a = factor * bound;
      const Vec nu = axpy(std::sin(a), dir, scale(std::cos(a), e));
      const Grain G{hyperplane(nu, dot(nu, c)), c, r};
      EXPECT_EQ(tangency_check(T, G, dm), want) << "factor " << factor;
    }
  }
}

TEST(Tangency, MonotoneInDelta) {
  CounterRng rng(8, "mono");
  const double r = 100;
  for (int s = 0; s < 200; ++s) {
    const Tube T = line_tube({rng.uniform()}, {rng.uniform(-20, 20)}, r);
    const Vec nu{rng.normal(), rng.normal()};
    const Grain G{hyperplane(scale(1 / norm(nu), nu), rng.uniform(-5, 5)), {0.0, 50.0}, r};
    bool prev = false;
    for (double dm : {0.01, 0.05, 0.1, 0.2, 0.4}) {
      const bool now = tangency_check(T, G, dm);
      EXPECT_TRUE(!prev || now);
      prev = now;
    }
  }
}

TEST(PhiMap, ZeroOnConeAndJacobian) {
  const PhaseField pf{64, 4};
  const Vec w{0.3, 0.7};
  const double t0 = 90;
  EXPECT_NEAR(norm(phi_map(pf, t0, w, {27.0, 63.0})), 0.0, 1e-13);
  const Vec x{10.0, -40.0};
  const Eigen::MatrixXd J = phi_jacobian(pf, t0, w, x);
  for (int j = 0; j < 2; ++j) {
    Vec xp = x, xm = x;
    xp[j] += 1e-5;
    xm[j] -= 1e-5;
    const Vec a = phi_map(pf, t0, w, xp), b = phi_map(pf, t0, w, xm);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(J(i, j), (a[i] - b[i]) / 2e-5, 1e-7);
  }
  EXPECT_NEAR((J - J.transpose()).norm(), 0.0, 1e-15);
}

TEST(Transversality, DegenerateAndGeneric) {
  const SmoothMap id{[](const Vec& x) { return x; },
                     [](const Vec& x) { return Eigen::MatrixXd::Identity(x.size(), x.size()); }};
  AffineFamily pi;
  pi.M = Eigen::MatrixXd::Zero(1, 3);
  pi.M(0, 0) = 1;
  const Variety Z = hyperplane({1.0, 0.0, 0.0}, 0.0);
  std::vector<Vec> seeds;
  CounterRng rng(2, "seeds");
  for (int i = 0; i < 20; ++i) seeds.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
  EXPECT_FALSE(transversality_sampler(id, pi, {0.0}, Z, seeds).transverse);
  // disjoint: vacuous
  const auto far = transversality_sampler(id, pi, {5.0}, Z, seeds);
  EXPECT_TRUE(far.transverse);
  EXPECT_EQ(far.points, 0);
  // a tilted family against a sphere: generic c is transverse
  const Variety S = sphere({0.0, 0.0, 0.0}, 1.0);
  AffineFamily tilt;
  tilt.M = Eigen::MatrixXd(1, 3);
  tilt.M << 0.3, 0.5, 0.8;
  int ok = 0;
  for (int i = 0; i < 100; ++i)
    if (transversality_sampler(id, tilt, {rng.uniform(-0.9, 0.9)}, S, seeds).transverse) ++ok;
  EXPECT_GE(ok, 99);
}

TEST(Multigrain, DeltaLevelsAndNestedCounting) {
  EXPECT_DOUBLE_EQ(delta_level(3, 3), 0.02);
  EXPECT_DOUBLE_EQ(delta_level(3, 1), 0.08);
  const double r0 = 4096, r1 = 256;
  Multigrain all;
  all.grains = {Grain{whole_space(2), {0.0, 2000.0}, r0}, Grain{whole_space(2), {0.0, 2000.0}, r1}};
  all.scales = {r0, r1};
  all.deltas = {0.02, 0.02};
  EXPECT_EQ(nested_direction_count(all, {{}, {}}), 0);
  // three caps with tubes through the centre; a single planted direction per cap
  std::vector<std::vector<Tube>> tubes(2);
  for (int c = 0; c < 3; ++c) {
    Tube T = line_tube({0.1 + 0.3 * c}, {(0.1 + 0.3 * c) * 2000}, r0);
    T.cap = c;
    tubes[0].push_back(T);
    Tube S = line_tube(T.omega, T.offset, r1);
    S.cap = c;
    tubes[1].push_back(S);
  }
  EXPECT_EQ(nested_direction_count(all, tubes), 3);

  // nested hyperplanes: only the tube inside the plane survives at level 1
  Multigrain mg = all;
  mg.grains[1].variety = hyperplane({1.0, -0.4}, 0.0);  // x = 0.4 t
  mg.grains[1].center = {800.0, 2000.0};
  std::vector<std::vector<Tube>> planted(2);
  for (int c = 0; c < 3; ++c) {
    const double w = 0.1 + 0.3 * c;  // c = 1 gives w = 0.4
    Tube T = line_tube({w}, {w * 2000 - 800}, r0);
    T.cap = c;
    planted[0].push_back(T);
    Tube S = line_tube({w}, {w * 2000 - 800}, r1);
    S.cap = c;
    planted[1].push_back(S);
  }
  EXPECT_EQ(nested_direction_count(mg, planted), 1);
}
