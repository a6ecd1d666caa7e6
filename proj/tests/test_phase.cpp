#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/phase_core.hpp"

using namespace osc;

namespace {

SpaceTimePoint pt(Vec x, double t) { return SpaceTimePoint{std::move(x), t}; }

// Oracle: phi written out from scratch.
double phi_ref(double lambda, const Vec& x, double t, const Vec& w) {
  double q = lambda * lambda;
  for (std::size_t i = 0; i < x.size(); ++i) q += (x[i] - t * w[i]) * (x[i] - t * w[i]);
  return lambda / t * std::sqrt(q);
}

}  // namespace

TEST(Phase, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(phase({1, 4}, pt({0.0}, 1), {0.0}), 1.0);
  EXPECT_DOUBLE_EQ(phase({2, 4}, pt({1.0, 0.0}, 1), {1.0, 0.0}), 4.0);
  EXPECT_NEAR(phase({10, 4}, pt({3, 4}, 5), {0, 0}), 20.0 * std::sqrt(1.25), 1e-12);
  EXPECT_THROW(phase({1, 4}, pt({0.0}, 0.0), {0.0}), DomainError);
}

TEST(Phase, OnTheConeGradientsVanish) {
  const PhaseField pf{7.0, 4};
  const Vec w{0.3, 0.6};
  const auto p = pt({0.3 * 2.5, 0.6 * 2.5}, 2.5);
  for (double g : phase_grad_x(pf, p, w)) EXPECT_EQ(g, 0.0);
  EXPECT_NEAR(phase_dt(pf, p, w), -49.0 / 6.25, 1e-12);
  EXPECT_DOUBLE_EQ(mixed_hessian_det(pf, p, w), 1.0);
}

TEST(Phase, GradientsMatchCentralDifferences) {
  const PhaseField pf{50.0, 4};
  CounterRng rng(3, "phase-fd");
  for (int s = 0; s < 50; ++s) {
    Vec x{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const double t = rng.uniform(12.5, 200);
    Vec w{rng.uniform(), rng.uniform()};
    const double h = 1e-5 * pf.lambda;
    const Vec gx = phase_grad_x(pf, pt(x, t), w);
    for (int a = 0; a < 2; ++a) {
      Vec xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double fd = (phi_ref(pf.lambda, xp, t, w) - phi_ref(pf.lambda, xm, t, w)) / (2 * h);
      EXPECT_NEAR(gx[a], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
    const double fdt =
        (phi_ref(pf.lambda, x, t + h, w) - phi_ref(pf.lambda, x, t - h, w)) / (2 * h);
    EXPECT_NEAR(phase_dt(pf, pt(x, t), w), fdt, 1e-6 * std::max(1.0, std::abs(fdt)));
    const double hw = 1e-6;
    const Vec gw = phase_grad_omega(pf, pt(x, t), w);
    for (int a = 0; a < 2; ++a) {
      Vec wp = w, wm = w;
      wp[a] += hw;
      wm[a] -= hw;
      const double fd = (phi_ref(pf.lambda, x, t, wp) - phi_ref(pf.lambda, x, t, wm)) / (2 * hw);
      EXPECT_NEAR(gw[a], fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Phase, MixedHessianDeterminant) {
  // lambda = 1, n = 3, x - t w = (1, 0): the 2x2 matrix is -(I/s - y y^T/s^3) with s = sqrt 2,
  // eigenvalues 1/s^3 and 1/s, so |det| = 1/4
  const PhaseField pf{1.0, 4};
  const auto p = pt({1.0, 0.0}, 1.0);
  const Vec w{0.0, 0.0};
  EXPECT_NEAR(mixed_hessian_det(pf, p, w), 0.25, 1e-15);
  EXPECT_NEAR(std::abs(phase_mixed_hessian(pf, p, w).determinant()), 0.25, 1e-14);

  // finite differences of grad_omega in x as the numeric oracle
  const PhaseField pf2{30.0, 4};
  CounterRng rng(5, "hess-fd");
  for (int s = 0; s < 30; ++s) {
    Vec x{rng.uniform(-30, 30), rng.uniform(-30, 30)};
    const double t = rng.uniform(8, 120);
    Vec w{rng.uniform(), rng.uniform()};
    Eigen::Matrix2d M;
    const double h = 1e-4;
    for (int i = 0; i < 2; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const Vec gp = phase_grad_omega(pf2, pt(xp, t), w), gm = phase_grad_omega(pf2, pt(xm, t), w);
      for (int j = 0; j < 2; ++j) M(i, j) = (gp[j] - gm[j]) / (2 * h);
    }
    const double closed = mixed_hessian_det(pf2, pt(x, t), w);
    EXPECT_NEAR(std::abs(M.determinant()), closed, 1e-6 * closed);
  }
}

TEST(Phase, JetDerivativesMatchClosedForms) {
  const PhaseField pf{40.0, 4};
  const auto p = pt({5.0, -7.0}, 33.0);
  const Vec w{0.2, 0.7};
  const Vec gx = phase_grad_x(pf, p, w), gw = phase_grad_omega(pf, p, w);
  EXPECT_NEAR(phase_derivative(pf, p, w, {0, 0}, 0, {0, 0}), phase(pf, p, w), 1e-12);
  EXPECT_NEAR(phase_derivative(pf, p, w, {1, 0}, 0, {0, 0}), gx[0], 1e-12);
  EXPECT_NEAR(phase_derivative(pf, p, w, {0, 0}, 1, {0, 0}), phase_dt(pf, p, w), 1e-12);
  EXPECT_NEAR(phase_derivative(pf, p, w, {0, 0}, 0, {0, 1}), gw[1], 1e-10);
  const Eigen::MatrixXd H = phase_mixed_hessian(pf, p, w);
  EXPECT_NEAR(phase_derivative(pf, p, w, {0, 1}, 0, {1, 0}), H(1, 0), 1e-12);
  const Vec dtw = phase_dt_grad_omega(pf, p, w);
  EXPECT_NEAR(phase_derivative(pf, p, w, {0, 0}, 1, {1, 0}), dtw[0], 1e-12);
}

TEST(Phase, TaylorRemainderIsQuadratic) {
  // remainder after the linear term: halving the step quarters it
  const PhaseField pf{20.0, 4};
  const SpaceTimePoint x0 = pt({1.0}, 10.0);
  const Vec w{0.4};
  const double e1 = std::abs(taylor_remainder(pf, x0, pt({1.1}, 10.1), w));
  const double e2 = std::abs(taylor_remainder(pf, x0, pt({1.05}, 10.05), w));
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

TEST(ScaleLadder, KnownValuesAndBounds) {
  EXPECT_DOUBLE_EQ(scale_ladder(2, 100, 4 * 100.0, 1.0).value, 2.5 * 400);
  EXPECT_DOUBLE_EQ(scale_ladder(8, 100, 400, 4.0).value, 4.0 * 400);  // lambda / R < K
  CounterRng rng(1, "ladder");
  for (int s = 0; s < 200; ++s) {
    const int K = 2 + static_cast<int>(rng.uniform() * 8);
    const double R = rng.uniform(1, 100), lam = R * rng.uniform(1, 1e4), c = rng.uniform(1, 5);
    const double v = scale_ladder(K, R, lam, c).value / (c * lam);
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 3.0);
  }
}

TEST(PseudoConformal, ForwardAndInverse) {
  const PseudoPoint q = pseudo_forward({3.0}, 2.0);
  EXPECT_DOUBLE_EQ(q.u[0], 1.5);
  EXPECT_DOUBLE_EQ(q.t, 0.5);
  const PseudoPoint f = pseudo_forward({0.0}, 1.0);
  EXPECT_EQ(f.u[0], 0.0);
  EXPECT_EQ(f.t, 1.0);
  const PseudoPoint b = pseudo_inverse(q.u, q.t);
  EXPECT_NEAR(b.u[0], 3.0, 1e-15);
  EXPECT_NEAR(b.t, 2.0, 1e-15);
}

TEST(Operators, ZeroInputGivesZero) {
  const PhaseField pf{16, 4};
  const GridFunction g = GridFunction::zeros({0.0}, {1.0}, {64});
  for (const cplx& v : eval_H_lambda(pf, g, {pt({1.0}, 4.0), pt({-3.0}, 20.0)}))
    EXPECT_EQ(std::abs(v), 0.0);
}

TEST(Operators, OnePointOracle) {
  const PhaseField pf{16, 4};
  GridFunction g = GridFunction::zeros({0.0}, {1.0}, {256});
  const std::size_t j = 77;
  g.samples[j] = cplx(2.0, -1.0);
  const Vec w0 = g.node(j);
  for (const auto& p : {pt({1.0}, 4.0), pt({3.0}, 9.0)}) {
    const cplx v = eval_H_lambda(pf, g, {p})[0];
    const cplx want = g.samples[j] * g.cell_volume() * std::polar(1.0, kTwoPi * phase(pf, p, w0));
    EXPECT_LT(std::abs(v - want), 1e-3 * std::abs(want));
  }
}

TEST(Operators, MatchesIndependentQuadrature) {
  // Smooth g on a fine grid; oracle is a plain midpoint sum of g e^{2 pi i phi} written here.
  const PhaseField pf{20, 4};
  const int N = 2048;
  auto g_of = [](const Vec& w) { return cplx(std::exp(-20 * (w[0] - 0.5) * (w[0] - 0.5)), 0.3 * w[0]); };
  const GridFunction g = GridFunction::sample({0.0}, {1.0}, {N}, g_of);
  std::vector<SpaceTimePoint> pts{pt({2.0}, 5.0), pt({-6.0}, 30.0), pt({10.0}, 12.0)};
  const auto got = eval_H_lambda(pf, g, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cplx want = 0;
    for (int j = 0; j < N; ++j) {
      const Vec w{static_cast<double>(j) / N};
      want += g_of(w) * std::polar(1.0, kTwoPi * phi_ref(pf.lambda, pts[i].x, pts[i].t, w)) / double(N);
    }
    EXPECT_LT(std::abs(got[i] - want), 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST(Operators, GlobalPhaseInvariance) {
  const PhaseField pf{16, 4};
  const GridFunction g = GridFunction::sample({0.0}, {1.0}, {512}, [](const Vec& w) {
    return cplx(std::sin(3 * w[0]), w[0]);
  });
  GridFunction h = g;
  for (auto& s : h.samples) s *= std::polar(1.0, 0.77);
  const std::vector<SpaceTimePoint> pts{pt({1.0}, 5.0), pt({4.0}, 40.0)};
  const auto a = eval_H_lambda(pf, g, pts), b = eval_H_lambda(pf, h, pts);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a[i]), std::abs(b[i]), 1e-12);
}

TEST(Operators, ParallelMatchesSerial) {
  const PhaseField pf{32, 4};
  const GridFunction g = GridFunction::sample({0.0, 0.0}, {1.0, 1.0}, {128, 128}, [](const Vec& w) {
    return cplx(w[0] * w[1], std::cos(5 * w[0]));
  });
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(pt({0.5 * i, -0.25 * i}, 10 + i));
  const auto a = eval_H_lambda(pf, g, pts), b = eval_H_lambda_serial(pf, g, pts);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-12);
}

TEST(Operators, ResolutionGuard) {
  const PhaseField pf{4096, 4};
  const GridFunction g = GridFunction::sample({0.0}, {1.0}, {16}, [](const Vec&) { return cplx(1); });
  EXPECT_THROW(eval_H_lambda(pf, g, {pt({4000.0}, 100.0)}), ResolutionError);
}

TEST(Operators, CarlesonSjolinOnePoint) {
  GridFunction f = GridFunction::zeros({-1.0, -1.0}, {1.0, 1.0}, {64, 64});
  const std::size_t j = 1200;
  f.samples[j] = 1.0;
  const Vec y = f.node(j);
  const Amplitude a = [](const Vec&) { return 1.0; };
  const Vec x{3.0, 2.0};
  const cplx v = eval_S_lambda(5.0, f, a, {x})[0];
  const double d = norm(sub(x, y));
  const cplx want = f.cell_volume() * std::polar(1.0, kTwoPi * 5.0 * d);
  EXPECT_LT(std::abs(v - want), 1e-3 * std::abs(want));
  const GridFunction z = GridFunction::zeros({-1.0}, {1.0}, {64});
  EXPECT_EQ(std::abs(eval_S_lambda(5.0, z, [](const Vec&) { return 1.0; }, {Vec{1.0}})[0]), 0.0);
}

TEST(BochnerRiesz, SingleModes) {
  const int N = 32;
  const double L = 16;  // dual lattice spacing 1/16
  auto mode = [&](double k0, double k1) {
    return GridFunction::sample({0.0, 0.0}, {L, L}, {N, N}, [&](const Vec& x) {
      return std::polar(1.0, kTwoPi * (k0 * x[0] + k1 * x[1]) / L);
    });
  };
  auto ratio = [&](const GridFunction& in, double alpha) {
    const GridFunction out = apply_bochner_riesz(in, alpha);
    // least-squares multiple of the input
    cplx num = 0;
    double den = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      num += std::conj(in.samples[i]) * out.samples[i];
      den += std::norm(in.samples[i]);
    }
    return num / den;
  };
  EXPECT_NEAR(std::abs(ratio(mode(0, 0), 1.0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ratio(mode(16, 4), 1.0)), 0.0, 1e-12);
  // |xi|^2 = (8^2 + 8^2) / 16^2 = 0.5
  EXPECT_NEAR(std::abs(ratio(mode(8, 8), 1.0) - 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ratio(mode(8, 8), 2.0) - 0.25), 0.0, 1e-12);
}

TEST(L2Proxy, ZeroAndBounded) {
  const PhaseField pf{64, 4};
  const Vec ts{1.0, 8.0, 64.0};
  const GridFunction z = GridFunction::zeros({0.0}, {1.0}, {1024});
  EXPECT_EQ(l2_bound_check(pf, z, ts, 64, 0.25), 0.0);
  const GridFunction g = GridFunction::sample({0.0}, {1.0}, {1024}, [](const Vec& w) {
    const double u = (w[0] - 0.5) / 0.45;
    return std::abs(u) < 1 ? cplx(std::exp(1 - 1 / (1 - u * u))) : cplx(0);
  });
  const double v = l2_bound_check(pf, g, ts, 64, 0.25);
  EXPECT_GT(v, 0.1);
  EXPECT_LE(v, 10.0);
}

TEST(Rng, CounterBasedAndReproducible) {
  CounterRng a(9, "s"), b(9, "s"), c(9, "t");
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
  }
  CounterRng u(1, "mean");
  double m = 0;
  for (int i = 0; i < 100000; ++i) m += u.uniform();
  EXPECT_NEAR(m / 100000, 0.5, 0.01);
  EXPECT_EQ(CounterRng(4, "x").substream(3).next(), CounterRng(4, "x").substream(3).next());
  EXPECT_NE(CounterRng(4, "x").substream(3).next(), CounterRng(4, "x").substream(4).next());
}
