#include <spdlog/spdlog.h>

#include <cmath>

#include "detail.hpp"

namespace osc {

using detail::kv;
using detail::Params;

namespace {

double rel_error(const GridFunction& a, const GridFunction& b) {
  double e = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e += std::norm(a.samples[i] - b.samples[i]);
    s += std::norm(b.samples[i]);
  }
  return s > 0 ? std::sqrt(e / s) : kNaN;
}

// Lattice packet in `cap` whose tube is empty: |a| just above the threshold along e_1.
WavePacket empty_packet(const PacketSet& set, int cap) {
  const double thr = empty_threshold(set.pf);
  const double step = std::sqrt(set.r);
  const Vec c = phase_grad_omega(set.pf, set.x0, set.caps.caps[cap].center);
  WavePacket P{cap, std::vector<int>(c.size(), 0), cplx(1.0)};
  for (std::size_t a = 0; a < c.size(); ++a) P.v_lat[a] = static_cast<int>(std::lround(c[a] / step));
  P.v_lat[0] = static_cast<int>(std::floor((c[0] - 1.01 * thr) / step));
  return P;
}

}  // namespace

std::vector<ReportRow> run_wavepacket_suite(const ExperimentConfig& cfg) {
  const int n = cfg.n;
  const PhaseField pf{cfg.lambda, cfg.c_n};
  const double r = cfg.r, rho = cfg.rho, delta = cfg.delta;
  const SpaceTimePoint x0 = detail::centre_point(n, cfg.lambda);
  const double vr = cfg.v_radius > 0 ? cfg.v_radius : 64.0 * std::sqrt(r);
  const int nodes = n == 2 ? cfg.grid : 128;
  std::vector<ReportRow> rows;
  const Params base{kv("n", n), kv("lambda", cfg.lambda), kv("r", r), kv("delta", delta)};
  auto with = [&](Params extra) {
    Params p = base;
    p.insert(p.end(), extra.begin(), extra.end());
    return p;
  };

  const GridFunction g = random_smooth(n - 1, nodes, detail::rng_for(cfg, "wavepackets-g"));
  spdlog::info("wavepackets: decomposing at r = {}", r);
  const PacketSet set = decompose(g, r, x0, pf, vr);
  const GridFunction rec = synthesize(set, set.all(), g);
  rows.push_back(make_row("wavepackets", "reconstruction_error",
                          with({kv("v_radius", vr), kv("packets", set.packets.size())}),
                          rel_error(rec, g), "<=", 1e-3));

  const OrthogonalityReport orth = l2_orthogonality_report(set, g);
  rows.push_back(make_row("wavepackets", "total_orthogonality", with({}), orth.total_ratio, "in",
                          0.25, 4.0));
  rows.push_back(make_row("wavepackets", "fixed_cap_orthogonality", with({kv("cap", orth.cap)}),
                          orth.fixed_cap_ratio, "in", 0.25, 4.0));

  // Heaviest non-empty packet whose core passes within 64 of x0.
  std::size_t best = set.packets.size();
  double best_c = -1.0;
  for (std::size_t i = 0; i < set.packets.size(); ++i) {
    const Tube T = tube_of(set, i, delta);
    if (T.empty || T.distance(x0) > 64.0) continue;
    if (std::abs(set.packets[i].coeff) > best_c) {
      best_c = std::abs(set.packets[i].coeff);
      best = i;
    }
  }
  if (best == set.packets.size()) throw DegenerateError("wavepackets: no packet passes near x0");
  const Tube bt = tube_of(set, best, delta);
  const Ball ball{x0, r};
  spdlog::info("wavepackets: essential support of packet {}", best);
  rows.push_back(make_row("wavepackets", "essential_support_ratio",
                          with({kv("packet", best), kv("cap", bt.cap), kv("h", 4)}),
                          essential_support_ratio(set, best, bt, ball, 4.0), "<=", 0.05));

  {
    PacketSet one = set;
    one.packets = {empty_packet(set, bt.cap)};
    const Tube et = tube_of(one, 0, delta);
    double sup = kNaN;
    if (et.empty) {
      const auto vals = eval_packets(one, {0}, ball_grid(ball, 8.0));
      sup = 0.0;
      for (const auto& v : vals) sup = std::max(sup, std::abs(v));
      sup /= std::sqrt(packet_l2sq(one, 0));
    }
    rows.push_back(make_row("wavepackets", "empty_packet_sup",
                            with({kv("a_norm", norm(et.a)), kv("threshold", empty_threshold(pf))}),
                            sup, "<=", 0.05));
  }

  {
    // A few packets of the same and neighbouring caps, correlated against the best one.
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < set.packets.size(); ++i) {
      const double dw = norm(sub(set.caps.caps[set.packets[i].cap].center, bt.omega));
      if (i != best && dw <= 1.01 * set.caps.side && !tube_of(set, i, delta).empty) cand.push_back(i);
    }
    const int count = near_orthogonality_count(set, best, cand, ball, 8.0, 0.5);
    rows.push_back(make_row("wavepackets", "near_orthogonality_count",
                            with({kv("candidates", cand.size()), kv("threshold", 0.5)}), count,
                            "<=", 8.0));
  }

  // Two scales: the heaviest packet re-expanded at rho about a point of its core.
  {
    SpaceTimePoint xt;
    xt.t = x0.t + 0.5 * r / std::sqrt(1.0 + dot(bt.omega, bt.omega));
    xt.x = bt.core_x(xt.t);
    const GridFunction like = GridFunction::zeros(Vec(n - 1, 0.0), Vec(n - 1, 1.0),
                                                  std::vector<int>(n - 1, n == 2 ? 8192 : 256));
    const GridFunction gT = synthesize(set, {best}, like);
    spdlog::info("wavepackets: two-scale decomposition at rho = {}", rho);
    const PacketSet small = decompose(gT, rho, xt, pf, 64.0 * std::sqrt(rho));
    WaveConfig wc;
    wc.delta = delta;
    const TwoScaleLink link = two_scale_children(set, best, small, wc);
    const GridFunction kids = synthesize(small, link.children, gT);
    const double err = rel_error(kids, gT);
    const Ball sball{xt, rho};
    double haus = 0.0, angle = 0.0;
    for (std::size_t j : link.children) {
      const Tube ct = tube_of(small, j, delta);
      angle = std::max(angle, norm(sub(ct.omega, bt.omega)));
      if (!ct.empty) haus = std::max(haus, core_hausdorff(bt, ct, sball, 0.0));
    }
    const Params tp = with({kv("rho", rho), kv("children", link.children.size())});
    rows.push_back(make_row("wavepackets", "two_scale_capture", tp, 1.0 - err * err, ">=", 0.99));
    rows.push_back(make_row("wavepackets", "two_scale_hausdorff", tp, haus, "<=",
                            16.0 * std::pow(r, 0.5 + delta)));
    rows.push_back(make_row("wavepackets", "two_scale_cap_angle", tp, angle, "<=",
                            16.0 / std::sqrt(rho)));
  }
  return rows;
}

}  // namespace osc
