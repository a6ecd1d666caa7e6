#pragma once

#include <Eigen/Dense>
#include <functional>

#include "oscillab/common.hpp"

namespace osc {

// Scale lambda and the support-box constant C_n.
struct PhaseField {
  double lambda = 1.0;
  double c_n = 4.0;
  void validate() const;
};

// (x, t) with x in R^{n-1}.
struct SpaceTimePoint {
  Vec x;
  double t = 1.0;
};

// Complex samples on a uniform grid over an axis-aligned box. Node j on axis a
// sits at lo[a] + j * (hi[a] - lo[a]) / shape[a]; the last axis is fastest.
struct GridFunction {
  int dim = 0;
  std::vector<int> shape;
  std::vector<cplx> samples;
  Vec lo, hi;

  static GridFunction zeros(Vec lo, Vec hi, std::vector<int> shape);
  template <class F>
  static GridFunction sample(Vec lo, Vec hi, std::vector<int> shape, F&& f) {
    GridFunction g = zeros(std::move(lo), std::move(hi), std::move(shape));
    for (std::size_t i = 0; i < g.samples.size(); ++i) g.samples[i] = f(g.node(i));
    return g;
  }

  std::size_t size() const { return samples.size(); }
  double spacing(int axis) const { return (hi[axis] - lo[axis]) / shape[axis]; }
  double cell_volume() const;
  Vec node(std::size_t flat) const;
  std::vector<int> unravel(std::size_t flat) const;
  std::size_t ravel(const std::vector<int>& idx) const;
  double l2_norm() const;  // Riemann sum
  void validate() const;
};

struct ScaleLadder {
  int k_param = 2;
  double r = 1.0;
  double lambda = 1.0;
  double value = 1.0;
};

// Closed forms; all throw DomainError at t = 0.
double phase(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega);
Vec phase_grad_x(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega);
double phase_dt(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega);
Vec phase_grad_omega(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega);
// d/dt of grad_omega phi.
Vec phase_dt_grad_omega(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega);
// Entry (i, j) is d_{x_i} d_{omega_j} phi.
Eigen::MatrixXd phase_mixed_hessian(const PhaseField& pf, const SpaceTimePoint& p,
                                    const Vec& omega);
double mixed_hessian_det(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega);
// Exact mixed partial d_x^ax d_t^at d_omega^aw phi via truncated Taylor arithmetic.
double phase_derivative(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega,
                        const std::vector<int>& ax, int at, const std::vector<int>& aw);
// Second order Taylor remainder of phi in (x,t) around x0.
double taylor_remainder(const PhaseField& pf, const SpaceTimePoint& x0, const SpaceTimePoint& x,
                        const Vec& omega);

ScaleLadder scale_ladder(int K, double R, double lambda, double c_n);

// Smooth cutoff a_{lambda,R}: 1 on [-l_R, l_R]^{n-1} x [R/C_n, C_n lambda],
// supported in [-2 l_R, 2 l_R]^{n-1} x [R/(2C_n), 2 C_n lambda], l_R = lambda_{K,R}.
struct Cutoff {
  bool on = false;
  int K = 2;
  double R = 1.0;
};
double smooth_step(double u);  // C-infinity, 0 for u <= 0, 1 for u >= 1
double cutoff_bump(const PhaseField& pf, const Cutoff& c, const SpaceTimePoint& p);

// Quadrature nodes omega_j with complex weights (weight already includes the
// cell volume). weight_bandwidth bounds |grad| of the phase carried by the weights.
struct Nodes {
  int dim = 0;
  std::vector<double> omega;  // flattened, dim per node
  std::vector<cplx> weights;
  Vec lo, hi;                 // bounding box of the nodes
  Vec spacing;                // per-axis node spacing
  double weight_bandwidth = 0.0;
  std::size_t count() const { return weights.size(); }
};
Nodes nodes_from_grid(const GridFunction& g);

// sum_j w_j exp(2 pi i phi(x; omega_j)) per point. Throws ResolutionError when
// the phase advances more than pi/2 per cell at some point.
std::vector<cplx> oscillatory_sum(const PhaseField& pf, const Nodes& nodes,
                                  const std::vector<SpaceTimePoint>& points, bool check = true);
std::vector<cplx> oscillatory_sum_serial(const PhaseField& pf, const Nodes& nodes,
                                         const std::vector<SpaceTimePoint>& points,
                                         bool check = true);
void check_nyquist(const PhaseField& pf, const Nodes& nodes, const SpaceTimePoint& p);

std::vector<cplx> eval_H_lambda(const PhaseField& pf, const GridFunction& g,
                                const std::vector<SpaceTimePoint>& points, const Cutoff& cut = {});
std::vector<cplx> eval_H_lambda_serial(const PhaseField& pf, const GridFunction& g,
                                       const std::vector<SpaceTimePoint>& points,
                                       const Cutoff& cut = {});

// Carleson-Sjolin operator on R^n: int e^{2 pi i lambda |x-y|} a(x-y) f(y) dy.
using Amplitude = std::function<double(const Vec&)>;
std::vector<cplx> eval_S_lambda(double lambda, const GridFunction& f, const Amplitude& a,
                                const std::vector<Vec>& points);
// Frozen operator: int e^{2 pi i phi^lambda(u,t;w)} a(u/l - t w/l, t/l, w) g(w) dw.
using Amplitude3 = std::function<double(const Vec& z, double tau, const Vec& omega)>;
std::vector<cplx> eval_S_bar(const PhaseField& pf, const GridFunction& g, const Amplitude3& a,
                             const std::vector<SpaceTimePoint>& points);
// Slice y_n = 0 of S^lambda: int e^{2 pi i lambda |x - (y',0)|} a(x - (y',0)) f0(y') dy'.
std::vector<cplx> eval_S_slice(double lambda, const GridFunction& f0, const Amplitude& a,
                               const std::vector<Vec>& points);
// Slice after the pseudo-conformal change: int e^{2 pi i (lambda/t) sqrt(1+|u-ty'|^2)}
// a((u - t y')/t, 1/t) f0(y') dy'.
std::vector<cplx> eval_S_tilde(double lambda, const GridFunction& f0, const Amplitude& a,
                               const std::vector<SpaceTimePoint>& points);

struct PseudoPoint {
  Vec u;
  double t;
};
PseudoPoint pseudo_forward(const Vec& x_prime, double x_n);
PseudoPoint pseudo_inverse(const Vec& u, double t);

// Multiply the DFT of f by (1 - |xi|^2)_+^alpha on the grid's dual lattice.
// subsamples > 1 averages the multiplier over each frequency cell (needed for alpha < 0).
GridFunction apply_bochner_riesz(const GridFunction& f, double alpha, int subsamples = 1);
GridFunction apply_fourier_multiplier(const GridFunction& f,
                                      const std::function<double(const Vec&)>& m,
                                      int subsamples = 1);

// max over t of ||H g(., t)||_{L^2(R^{n-1})} / ||g||_2, spatial slice
// [-margin, t + margin]^{n-1} sampled with step dx.
double l2_bound_check(const PhaseField& pf, const GridFunction& g, const Vec& t_samples,
                      double margin = -1.0, double dx = 0.25);

}  // namespace osc
