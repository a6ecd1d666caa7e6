#include <gtest/gtest.h>

#include <cmath>

#include "oscillab/explab.hpp"

using namespace osc;

namespace {

double rel_l2(const GridFunction& a, const GridFunction& b) {
  double e = 0, s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e += std::norm(a.samples[i] - b.samples[i]);
    s += std::norm(b.samples[i]);
  }
  return std::sqrt(e / s);
}

GridFunction smooth_1d(int nodes, std::uint64_t seed) {
  return random_smooth(1, nodes, CounterRng(seed, "wp-test"));
}

}  // namespace

TEST(Caps, SideAndCount) {
  const CapFamily c = make_caps(121, 1);
  EXPECT_DOUBLE_EQ(c.side, 9.0 / 121);
  EXPECT_DOUBLE_EQ(c.period, 1.0 / 11);
  // every cube meeting B(0, 2 + s) and no other
  int want = 0;
  for (int j = -40; j < 40; ++j) {
    const double lo = j * c.side, hi = lo + c.side;
    const double d = lo > 0 ? lo : (hi < 0 ? -hi : 0.0);
    if (d <= 2 + c.side) ++want;
  }
  EXPECT_EQ(static_cast<int>(c.size()), want);
}

TEST(Caps, PartitionOfUnityAndCovering) {
  const CapFamily c = make_caps(4, 2);
  CounterRng rng(2, "pou");
  for (int s = 0; s < 2000; ++s) {
    Vec w{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (norm(w) > 2) continue;
    EXPECT_NEAR(c.psi_sum(w), 1.0, 1e-12);
    const int i = c.locate(w);
    ASSERT_GE(i, 0);
    for (int a = 0; a < 2; ++a) {
      EXPECT_LE(c.caps[i].center[a] - c.side / 2, w[a] + 1e-12);
      EXPECT_GE(c.caps[i].center[a] + c.side / 2, w[a] - 1e-12);
    }
  }
  // psi_tilde is 1 where psi lives
  for (std::size_t i = 0; i < c.size(); i += 7) {
    const Vec w = c.caps[i].center;
    if (c.psi(i, w) > 0) {
      EXPECT_DOUBLE_EQ(c.psi_tilde(i, w), 1.0);
    }
  }
}

TEST(Tubes, CoreAndThreshold) {
  EXPECT_NEAR(empty_threshold({100, 1}), 1000 / std::sqrt(101.0), 1e-12);
  Tube T;
  T.omega = {0.3};
  T.offset = {0.0};
  EXPECT_DOUBLE_EQ(T.core_x(10)[0], 3.0);
  EXPECT_NEAR(T.distance({{3.0}, 10.0}), 0.0, 1e-12);
  const Vec d = T.direction();
  EXPECT_NEAR(d[0], 0.3 / std::sqrt(1.09), 1e-15);
}

TEST(Decompose, ZeroInputGivesZeroCoefficients) {
  const PhaseField pf{4096, 4};
  const GridFunction g = GridFunction::zeros({0.0}, {1.0}, {1024});
  const PacketSet s = decompose(g, 64, {{2048.0}, 4096.0}, pf, default_v_radius(64));
  for (const auto& P : s.packets) EXPECT_EQ(std::abs(P.coeff), 0.0);
}

TEST(Decompose, PlantedPacketDominates) {
  const PhaseField pf{4096, 4};
  const SpaceTimePoint x0{{2048.0}, 4096.0};
  const double r = 64;
  const CapFamily caps = make_caps(r, 1);
  const int c0 = caps.locate({0.43});
  const Vec wc = caps.caps[c0].center;
  const double sq = std::sqrt(r);
  const int lat = static_cast<int>(std::lround(phase_grad_omega(pf, x0, wc)[0] / sq)) + 3;
  const double v0 = sq * lat;
  const GridFunction g = GridFunction::sample({0.0}, {1.0}, {8192}, [&](const Vec& w) {
    return caps.psi(c0, w) * std::polar(1.0, kTwoPi * (v0 * w[0] - phase(pf, x0, w)));
  });
  const PacketSet s = decompose(g, r, x0, pf, default_v_radius(r));
  double total = 0, top = 0;
  for (const auto& P : s.packets) {
    total += std::norm(P.coeff);
    if (P.cap == c0 && P.v_lat[0] == lat) top = std::norm(P.coeff);
  }
  EXPECT_GE(top, 0.5 * total);
}

TEST(Decompose, ReconstructsAndIsDeterministicAcrossThreads) {
  const PhaseField pf{4096, 4};
  const SpaceTimePoint x0{{2048.0}, 4096.0};
  const GridFunction g = smooth_1d(4096, 1);
  const PacketSet a = decompose(g, 64, x0, pf, 64 * 8);
  const PacketSet b = decompose_serial(g, 64, x0, pf, 64 * 8);
  ASSERT_EQ(a.packets.size(), b.packets.size());
  for (std::size_t i = 0; i < a.packets.size(); ++i) {
    EXPECT_EQ(a.packets[i].cap, b.packets[i].cap);
    EXPECT_EQ(a.packets[i].v_lat, b.packets[i].v_lat);
    EXPECT_EQ(a.packets[i].coeff, b.packets[i].coeff);
  }
  EXPECT_LE(rel_l2(synthesize(a, a.all(), g), g), 1e-3);
}

TEST(Decompose, SingleScaleOneIsExact) {
  const PhaseField pf{64, 4};
  const GridFunction g = smooth_1d(4096, 2);
  const PacketSet s = decompose(g, 1, {{32.0}, 64.0}, pf, 512);
  EXPECT_LE(rel_l2(synthesize(s, s.all(), g), g), 1e-10);
}

TEST(Decompose, CorruptedCoefficientsBreakReconstruction) {
  const PhaseField pf{4096, 4};
  const GridFunction g = smooth_1d(4096, 3);
  PacketSet s = decompose(g, 64, {{2048.0}, 4096.0}, pf, 512);
  for (std::size_t i = 0; i < s.packets.size(); i += 2) s.packets[i].coeff = -s.packets[i].coeff;
  EXPECT_GT(rel_l2(synthesize(s, s.all(), g), g), 1e-3);
}

TEST(Decompose, OrthogonalityRatiosAreComparable) {
  const PhaseField pf{4096, 4};
  const GridFunction g = smooth_1d(4096, 4);
  const PacketSet s = decompose(g, 64, {{2048.0}, 4096.0}, pf, 512);
  const OrthogonalityReport o = l2_orthogonality_report(s, g);
  EXPECT_GE(o.total_ratio, 0.25);
  EXPECT_LE(o.total_ratio, 4.0);
  EXPECT_GE(o.fixed_cap_ratio, 0.25);
  EXPECT_LE(o.fixed_cap_ratio, 4.0);
}

TEST(Packets, EvaluationMatchesGridQuadratureOfSynthesis) {
  const PhaseField pf{256, 4};
  const SpaceTimePoint x0{{128.0}, 256.0};
  const GridFunction g = smooth_1d(2048, 5);
  const PacketSet s = decompose(g, 16, x0, pf, default_v_radius(16));
  // the five heaviest packets
  std::vector<std::size_t> idx = s.all();
  std::partial_sort(idx.begin(), idx.begin() + 5, idx.end(), [&](auto i, auto j) {
    return std::abs(s.packets[i].coeff) > std::abs(s.packets[j].coeff);
  });
  idx.resize(5);
  // packets live on (11/9)-dilated caps that may poke out of [0,1]
  const GridFunction wide = GridFunction::zeros({-0.5}, {1.5}, {32768});
  const GridFunction gT = synthesize(s, idx, wide);
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({{128.0 + 5 * i}, 250.0 + 3 * i});
  const auto got = eval_packets(s, idx, pts);
  const auto want = eval_H_lambda(pf, gT, pts);
  const auto serial = eval_packets_serial(s, idx, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LT(std::abs(got[i] - want[i]), 1e-6 * std::max(1.0, std::abs(want[i])));
    EXPECT_LT(std::abs(got[i] - serial[i]), 1e-12 * std::max(1.0, std::abs(want[i])));
  }
}

TEST(Packets, EssentialSupportRatioIsHomogeneous) {
  const PhaseField pf{1024, 4};
  const SpaceTimePoint x0{{512.0}, 1024.0};
  const GridFunction g = smooth_1d(4096, 6);
  PacketSet s = decompose(g, 64, x0, pf, default_v_radius(64));
  // heaviest packet whose tube passes through the ball
  std::size_t best = s.packets.size();
  for (std::size_t i = 0; i < s.packets.size(); ++i) {
    const Tube t = tube_of(s, i, 0.1);
    if (t.empty || t.distance(x0) > 8) continue;
    if (best == s.packets.size() || std::abs(s.packets[i].coeff) > std::abs(s.packets[best].coeff))
      best = i;
  }
  ASSERT_LT(best, s.packets.size());
  const Tube T = tube_of(s, best, 0.1);
  const Ball B{x0, 64};
  const double a = essential_support_ratio(s, best, T, B, 4.0);
  s.packets[best].coeff *= 3.7;
  const double b = essential_support_ratio(s, best, T, B, 4.0);
  ASSERT_TRUE(std::isfinite(a));
  EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
}

TEST(TwoScale, EqualScalesKeepTheParent) {
  const PhaseField pf{4096, 4};
  const SpaceTimePoint x0{{2048.0}, 4096.0};
  const GridFunction g = smooth_1d(4096, 7);
  const PacketSet s = decompose(g, 64, x0, pf, 512);
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.packets.size(); ++i)
    if (std::abs(s.packets[i].coeff) > std::abs(s.packets[best].coeff)) best = i;
  const TwoScaleLink link = two_scale_children(s, best, s, WaveConfig{});
  EXPECT_NE(std::find(link.children.begin(), link.children.end(), best), link.children.end());
  EXPECT_THROW(two_scale_children(s, best, decompose(g, 256, x0, pf, 512), WaveConfig{}),
               ArgumentError);
}

TEST(TwoScale, HausdorffOfParallelCores) {
  Tube a, b;
  a.omega = b.omega = {0.5};
  a.offset = {0.0};
  b.offset = {3.0};
  const Ball B{{{50.0}, 100.0}, 20};
  // horizontal gap 3, perpendicular distance 3 / sqrt(1 + 0.25)
  EXPECT_NEAR(core_hausdorff(a, b, B, 0.0), 3.0 / std::sqrt(1.25), 0.05);
  EXPECT_NEAR(core_hausdorff(a, a, B, 0.0), 0.0, 1e-12);
}

TEST(DiscreteSum, SinglePointAndZero) {
  const PhaseField pf{64, 4};
  const std::vector<SpaceTimePoint> pts{{{3.0}, 20.0}, {{-1.0}, 60.0}};
  const auto v = discrete_extension_sum(pf, {{0.25}}, {cplx(2, 1)}, pts, 0.1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx want = cplx(2, 1) * std::polar(1.0, kTwoPi * phase(pf, pts[i], {0.25}));
    EXPECT_LT(std::abs(v[i] - want), 1e-12);
  }
  const auto z = discrete_extension_sum(pf, {{0.1}, {0.6}}, {0.0, 0.0}, pts, 0.1);
  for (const auto& x : z) EXPECT_EQ(std::abs(x), 0.0);
  EXPECT_THROW(discrete_extension_sum(pf, {{0.1}, {0.15}}, {1.0, 1.0}, pts, 0.1), SeparationError);
}
