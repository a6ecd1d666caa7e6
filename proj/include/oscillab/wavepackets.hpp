#pragma once

#include <map>

#include "oscillab/phase_core.hpp"

namespace osc {

// Thresholds of the two-scale child selection.
struct WaveConfig {
  double delta = 0.1;
  double angle_const = 4.0;  // dist(theta, child) <= angle_const * rho^{-1/2}
  double disp_const = 8.0;   // |v~ - shifted v| <= disp_const * r^{(1+delta)/2}
};

// Lattice cube [j s, (j+1) s] with s = (9/11) r^{-1/2}.
struct Cap {
  std::vector<int> index;
  Vec center;
  double side = 0.0;
};

// Caps meeting B(0, 2 + s); the extra ring makes sum_theta psi_theta = 1 exactly on B(0, 2).
class CapFamily {
 public:
  double r = 1.0;
  int dim = 0;
  double side = 0.0;    // (9/11) r^{-1/2}
  double period = 0.0;  // r^{-1/2}, side of the (11/9)-dilate
  std::vector<Cap> caps;

  std::size_t size() const { return caps.size(); }
  int find(const std::vector<int>& index) const;  // -1 if absent
  // cap whose closed cube contains w; lexicographically smallest index on ties
  int locate(const Vec& w) const;
  double psi(std::size_t i, const Vec& w) const;        // supported in (11/10) theta
  double psi_tilde(std::size_t i, const Vec& w) const;  // 1 on (11/10) theta, supp in (11/9) theta
  double psi_sum(const Vec& w) const;
  Vec cell_lo(std::size_t i) const;  // lower corner of the (11/9)-dilate

 private:
  std::map<std::vector<int>, int> lookup_;
  friend CapFamily make_caps(double r, int dim);
};

CapFamily make_caps(double r, int dim);
// Per-axis factor of psi_theta in units of the cap side: S(u - j) - S(u - j - 1).
double psi_axis(double u, int j);

// v = r^{1/2} * v_lat
struct WavePacket {
  int cap = 0;
  std::vector<int> v_lat;
  cplx coeff;
};

struct PacketSet {
  PhaseField pf;
  double r = 1.0;
  double v_radius = 0.0;
  SpaceTimePoint x0;
  CapFamily caps;
  std::map<int, std::vector<int>> center_lat;  // per cap: round(grad_w phi(x0; w_theta) / r^{1/2})
  std::vector<WavePacket> packets;             // grouped by cap, caps ascending

  Vec v_of(const WavePacket& p) const;
  Vec v_of(std::size_t i) const { return v_of(packets[i]); }
  std::vector<std::size_t> all() const;
};

double default_v_radius(double r);

// coeff(theta, v) = r^{(n-1)/2} int (g e^{2 pi i phi(x0;.)} psi_theta)(w) e^{-2 pi i v.w} dw over the
// (11/9)-dilate, for |v - c_theta| <= v_radius with c_theta the lattice-rounded spectral centre.
PacketSet decompose(const GridFunction& g, double r, const SpaceTimePoint& x0, const PhaseField& pf,
                    double v_radius);
PacketSet decompose_serial(const GridFunction& g, double r, const SpaceTimePoint& x0,
                           const PhaseField& pf, double v_radius);

// sum over `which` of g_T = e^{-2 pi i phi(x0;.)} coeff e^{2 pi i v.w} psi~_theta, sampled on like's grid.
GridFunction synthesize(const PacketSet& set, const std::vector<std::size_t>& which,
                        const GridFunction& like);

// H^lambda of packets, by quadrature over each (11/9)-cap with node spacing resolving the
// recentred phase phi(x;.) - phi(x0;.) + v.w at the given points.
std::vector<cplx> eval_packets(const PacketSet& set, const std::vector<std::size_t>& which,
                               const std::vector<SpaceTimePoint>& points);
std::vector<cplx> eval_packets_serial(const PacketSet& set, const std::vector<std::size_t>& which,
                                      const std::vector<SpaceTimePoint>& points);
// One column per packet in `which`.
Eigen::MatrixXcd eval_packets_each(const PacketSet& set, const std::vector<std::size_t>& which,
                                   const std::vector<SpaceTimePoint>& points);

double psi_tilde_l2sq(const CapFamily& caps);  // ||psi~_theta||_2^2, same for every cap
double packet_l2sq(const PacketSet& set, std::size_t i);

struct Tube {
  int cap = 0;
  Vec omega;  // cap centre
  Vec a;      // grad_w phi(x0; w_theta) - v
  Vec offset; // core: x(t) = t w_theta - offset
  bool empty = false;
  double radius = 0.0;
  double r = 1.0;

  Vec core_x(double t) const;
  Vec direction() const;  // unit (w_theta, 1) / sqrt(1 + |w_theta|^2)
  double distance(const SpaceTimePoint& p) const;  // to the core line
};

double empty_threshold(const PhaseField& pf);
Tube tube_of(const PacketSet& set, std::size_t packet, double delta);

struct Ball {
  SpaceTimePoint center;
  double radius = 1.0;
  bool contains(const SpaceTimePoint& p) const;
};
// Grid of points of spacing h inside the ball.
std::vector<SpaceTimePoint> ball_grid(const Ball& b, double h);

// max |H g_T| over ball \ 2T divided by max over T cap ball; sampled on a grid of spacing h
// plus points along the core.
double essential_support_ratio(const PacketSet& set, std::size_t packet, const Tube& tube,
                               const Ball& ball, double h);

struct OrthogonalityReport {
  double total_ratio = 0.0;  // sum_T ||g_T||^2 / ||g||^2
  double fixed_cap_ratio = 0.0;  // ||sum_{T in theta} g_T||^2 / sum_{T in theta} ||g_T||^2
  int cap = -1;
};
OrthogonalityReport l2_orthogonality_report(const PacketSet& set, const GridFunction& g);

struct TwoScaleLink {
  std::size_t parent = 0;
  std::vector<std::size_t> children;  // indices into the small-scale set
  double angle_threshold = 0.0;
  double disp_threshold = 0.0;
};
// `small` is a decomposition (at scale rho, centre x~0) of the parent packet or of g.
TwoScaleLink two_scale_children(const PacketSet& big, std::size_t parent, const PacketSet& small,
                                const WaveConfig& cfg);
// Hausdorff distance between the two core segments inside the ball enlarged by `pad`.
// A core missing the ball is cut to the ball's time slab instead.
double core_hausdorff(const Tube& a, const Tube& b, const Ball& ball, double pad, int samples = 256);

// Number of T2 in `candidates` with |<H g_T1, H g_T2>| / (|H g_T1| |H g_T2|) > threshold over the ball grid.
int near_orthogonality_count(const PacketSet& set, std::size_t t1,
                             const std::vector<std::size_t>& candidates, const Ball& ball, double h,
                             double threshold);

// sum_{w in D} F(w) e^{2 pi i phi(x; w)}; D must be (1/R'')-separated.
std::vector<cplx> discrete_extension_sum(const PhaseField& pf, const std::vector<Vec>& D,
                                         const std::vector<cplx>& F,
                                         const std::vector<SpaceTimePoint>& points,
                                         double separation);

}  // namespace osc
