#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/broadnorm.hpp"

using namespace osc;

namespace {

// Oracle: the critical exponent built from doubles, product written as a ratio of factorial-like
// running terms instead of a per-factor fraction.
double p_critical_float(int n, int k) {
  double num = 1, den = 1;
  for (int i = k; i <= n - 1; ++i) {
    num *= 2.0 * i;
    den *= 2.0 * i + 1;
  }
  return 2 + 6 / (2.0 * (n - 1) + (k - 1) * num / den);
}

std::vector<CapDirections> grid_caps(int side) {
  std::vector<CapDirections> caps;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      caps.push_back(cap_directions({(i + 0.5) / side, (j + 0.5) / side}, 1.0 / side));
  return caps;
}

}  // namespace

TEST(Exponents, CriticalValues) {
  EXPECT_EQ(p_critical(3, 2), Rational(13, 4));
  EXPECT_EQ(p_critical(4, 3), Rational(25, 9));
  for (int n = 3; n <= 12; ++n) {
    // single factor 2(n-1)/(2n-1) when k = n - 1
    const Rational want = Rational(2) + Rational(6) / (Rational(2 * (n - 1)) +
                                                       Rational(n - 2) * Rational(2 * n - 2, 2 * n - 1));
    EXPECT_EQ(p_critical(n, n - 1), want);
    for (int k = 2; k <= n - 1; ++k)
      EXPECT_NEAR(to_double(p_critical(n, k)), p_critical_float(n, k), 1e-13);
  }
  EXPECT_THROW(p_critical(3, 3), DomainError);
}

TEST(Exponents, MonotoneInK) {
  for (int n = 3; n <= 20; ++n)
    for (int k = 2; k < n - 1; ++k) EXPECT_GT(p_critical(n, k), p_critical(n, k + 1));
}

TEST(Exponents, BoundRange) {
  const BoundRange b = bound_range(4, 3);
  EXPECT_EQ(b.low, Rational(14, 5));
  ASSERT_TRUE(b.high.has_value());
  EXPECT_EQ(*b.high, Rational(4));
  EXPECT_FALSE(bound_range(5, 2).high.has_value());
}

TEST(Exponents, TableAndM) {
  const ExponentTable flat = exponent_table(4, 2, {Rational(3), Rational(3), Rational(3)});
  for (int i = 2; i <= 4; ++i) {
    EXPECT_EQ(flat.alpha_at(i), 1);
    EXPECT_EQ(flat.beta_at(i), 1);
  }
  EXPECT_EQ(flat.beta_at(5), 1);
  const Vec r{100, 50, 10}, D{2, 3, 5};
  EXPECT_NEAR(m_constant(r, D, flat, 2, 0.1), std::pow(30.0, 2 * 0.1), 1e-12);

  const ExponentTable t = exponent_table(3, 2, {Rational(4), Rational(10, 3)});
  // (1/2 - 3/10) / (1/2 - 1/4) = 4/5
  EXPECT_EQ(t.beta_at(2), Rational(4, 5));
  EXPECT_EQ(t.alpha_at(2), Rational(4, 5));
  EXPECT_EQ(t.beta_at(3), 1);
  EXPECT_THROW(exponent_table(3, 2, {Rational(2), Rational(2)}), DomainError);
  EXPECT_THROW(exponent_table(3, 2, {Rational(3), Rational(4)}), DomainError);
}

TEST(Exponents, StepConstants) {
  const StepConstants z = step_constants(0, 4, 100, {0, 0}, 0.1, 4, 3, 0.02);
  EXPECT_EQ(z.c1, 1);
  EXPECT_EQ(z.c2, 1);
  EXPECT_EQ(z.c3, 1);
  EXPECT_EQ(z.c4, 1);
  EXPECT_NEAR(step_constants(1, 4, 100, {0, 1}, 0.1, 4, 3, 0.02).c1, std::pow(4.0, 0.1), 1e-14);
  const StepConstants a = step_constants(1, 4, std::exp(1.0), {1, 0}, 0.1, 4, 3, 0.02);
  EXPECT_NEAR(a.c1, 1.0, 1e-14);
  EXPECT_NEAR(a.c2, std::pow(4.0, 3 * 1.1), 1e-9);
  EXPECT_THROW(step_constants(2, 4, 100, {0, 1}, 0.1, 4, 3, 0.02), ArgumentError);
}

TEST(BroadLocal, VanishingCases) {
  const auto caps = grid_caps(8);
  BroadNormConfig cfg;
  cfg.K = 8;
  Vec m(caps.size(), 0.0);
  EXPECT_EQ(broad_local(m, caps, cfg), 0.0);
  m[13] = 5.0;
  EXPECT_EQ(broad_local(m, caps, cfg), 0.0);
}

TEST(BroadLocal, TwoCapsExhaustive) {
  const auto caps = grid_caps(8);
  BroadNormConfig cfg;
  cfg.K = 8;
  Vec m(caps.size(), 0.0);
  m[0] = 7.0;   // near omega = 0
  m[63] = 3.0;  // near omega = (1, 1)
  // a sample set holding a line through the heavy cap's centre direction
  const std::vector<Subspace> S{Subspace::span({caps[0][0]})};
  EXPECT_DOUBLE_EQ(broad_local(m, caps, S, cfg), 3.0);
  // with the line through the light cap only, the heavy one survives
  EXPECT_DOUBLE_EQ(broad_local(m, caps, {Subspace::span({caps[63][0]})}, cfg), 7.0);
}

TEST(BroadLocal, AntitoneInAAndBoundedByMax) {
  const auto caps = grid_caps(8);
  CounterRng rng(11, "antitone");
  for (int s = 0; s < 50; ++s) {
    Vec m(caps.size());
    for (auto& x : m) x = rng.uniform() < 0.2 ? rng.uniform(0, 3) : 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int A : {1, 2, 3, 4}) {
      BroadNormConfig cfg;
      cfg.K = 8;
      cfg.A = A;
      const double v = broad_local(m, caps, grassmann_samples(3, caps, m, cfg), cfg);
      EXPECT_LE(v, prev);
      EXPECT_LE(v, *std::max_element(m.begin(), m.end()));
      prev = v;
    }
  }
}

TEST(BroadNorm, EmptyRegionSubadditivityAndMaxBound) {
  const auto caps = grid_caps(4);
  const double K = 4, h = 2;
  CapField f{3, {0.0, 0.0, 0.0}, h, {16, 8, 8}, caps, {}};
  CounterRng rng(12, "field");
  f.values.assign(caps.size(), Vec(16 * 8 * 8, 0.0));
  for (auto& v : f.values)
    if (rng.uniform() < 0.5)
      for (auto& x : v) x = rng.uniform();
  BroadNormConfig cfg;
  cfg.K = K;
  const Box U{{0.0, 0.0, 0.0}, {32.0, 16.0, 16.0}};
  const Box empty{{0.0, 0.0, 0.0}, {0.0, 16.0, 16.0}};
  EXPECT_EQ(broad_norm(f, empty, cfg), 0.0);
  const double full = broad_norm(f, U, cfg);
  EXPECT_LE(full, max_cap_norm(f, U, cfg) * (1 + 1e-12));
  EXPECT_DOUBLE_EQ(full, broad_norm_serial(f, U, cfg));
  Box a = U, b = U;
  a.hi[0] = 16;
  b.lo[0] = 16;
  const double pa = std::pow(broad_norm(f, a, cfg), cfg.p), pb = std::pow(broad_norm(f, b, cfg), cfg.p);
  EXPECT_LE(std::pow(full, cfg.p), (pa + pb) * (1 + 1e-12));
}

TEST(BroadNorm, ConfigChecks) {
  BroadNormConfig cfg;
  cfg.k = 4;
  EXPECT_THROW(cfg.check(3), ArgumentError);
  cfg.k = 2;
  cfg.A = 0;
  EXPECT_THROW(cfg.check(3), ArgumentError);
}
