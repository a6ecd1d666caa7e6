#pragma once

#include <functional>
#include <optional>

#include "oscillab/wavepackets.hpp"

namespace osc {

struct Monomial {
  std::vector<int> exponents;
  double coeff = 0.0;
};

// Sparse real polynomial in nvars variables; terms kept sorted by exponent after compress().
class Polynomial {
 public:
  int nvars = 0;
  std::vector<Monomial> terms;

  Polynomial() = default;
  explicit Polynomial(int n) : nvars(n) {}
  static Polynomial constant(int n, double c);
  static Polynomial variable(int n, int i);
  static Polynomial linear(const Vec& a, double b);  // a.x + b

  int degree() const;
  double eval(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  // coefficients c_0..c_D of s -> P(p + s u)
  Vec restrict_to_line(const Vec& p, const Vec& u) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  void compress();
};

// Exponent vectors of all monomials of total degree 1..D (graded, lexicographic within a degree).
std::vector<std::vector<int>> monomial_exponents(int n, int D);
// Real roots of sum_k c_k s^k (companion matrix eigenvalues with small imaginary part).
Vec real_roots(const Vec& coeffs, double imag_tol = 1e-9);

// Common zero set of polys in R^n; dimension n - #polys when transverse.
struct Variety {
  int ambient_dim = 0;
  std::vector<Polynomial> polys;

  int dim() const { return ambient_dim - static_cast<int>(polys.size()); }
  int degree() const;  // of this representation
  Vec residual(const Vec& x) const;
  Eigen::MatrixXd jacobian(const Vec& x) const;  // rows are gradients
  // Damped Newton with the pseudo-inverse (minimum-norm step).
  std::optional<Vec> project(const Vec& x, int iters = 60, double tol = 1e-11) const;
  // Projections of seeds drawn uniformly from the ball that land inside it.
  std::vector<Vec> sample(const Vec& center, double radius, int count, CounterRng& rng) const;
  // Orthonormal basis (columns) of T_z Z; DegenerateError when the gradients are dependent.
  Eigen::MatrixXd tangent_basis(const Vec& z) const;
  bool contains(const Vec& x, double tol) const;
};

Variety whole_space(int n);
Variety hyperplane(const Vec& normal, double offset);  // normal.x = offset
Variety sphere(const Vec& center, double radius);

struct Subspace {
  Eigen::MatrixXd basis;  // n x k, orthonormal columns
  static Subspace span(const std::vector<Vec>& vectors, double tol = 1e-12);
  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient() const { return static_cast<int>(basis.rows()); }
  Vec project(const Vec& x) const;
};

Vec gauss_map(const Vec& omega);
// Vector orthogonal to the n-1 given vectors in R^n with cofactor components.
Vec generalized_cross(const std::vector<Vec>& vectors);
// Angle between a unit vector and a subspace: asin |dir - proj_V dir|.
double angle_to_subspace(const Vec& dir, const Subspace& V);
double angle_to_subspace(const Vec& dir, const Eigen::MatrixXd& basis);
// True iff some sampled Gauss direction of the cap makes angle < 1/K with V.
bool cap_in_V(const std::vector<Vec>& directions, const Subspace& V, double K);
// Gauss directions of a cube cap: centre and corners.
std::vector<Vec> cap_directions(const Vec& centre, double side);

struct Grain {
  Variety variety;
  Vec center;  // in R^n, last coordinate is t
  double radius = 1.0;
};

struct TangencyConfig {
  double constant = 4.0;
  int samples = 64;
};
// Core points of the tube in the grain's ball lie in N_{r^{1/2+dm}}(Z), and at their
// projections z the tube direction makes angle <= C r^{-1/2+dm} with T_z Z.
bool tangency_check(const Tube& tube, const Grain& grain, double delta_m,
                    const TangencyConfig& cfg = {});

// Phi(x) = -grad_w phi(x, t0; w) = lambda (x - t0 w) / s
Vec phi_map(const PhaseField& pf, double t0, const Vec& omega, const Vec& x);
Eigen::MatrixXd phi_jacobian(const PhaseField& pf, double t0, const Vec& omega, const Vec& x);

struct SmoothMap {
  std::function<Vec(const Vec&)> f;
  std::function<Eigen::MatrixXd(const Vec&)> jac;
};
// Pi_c = {y : M y = c}.
struct AffineFamily {
  Eigen::MatrixXd M;
};
struct TransversalityResult {
  bool transverse = true;
  int points = 0;                 // points of Z cap Phi^{-1}(Pi_c) found
  double min_singular = 0.0;      // smallest singular value of the stacked normals
  bool rank_warning = false;      // min_singular < 1e-8
};
TransversalityResult transversality_sampler(const SmoothMap& phi, const AffineFamily& pi,
                                            const Vec& c, const Variety& Z,
                                            const std::vector<Vec>& seeds);

struct Multigrain {
  std::vector<Grain> grains;  // dimensions n, n-1, ..., m
  Vec scales;                 // r_n > ... > r_m
  Vec deltas;                 // delta_j per grain
  int complexity() const;
  void validate(CounterRng& rng, int samples = 1000, double tol = 1e-6) const;
};

double delta_level(int n, int m);  // 0.02 * 2^{n-m}

struct NestedConfig {
  double constant = 4.0;
  double delta = 0.1;
  int samples = 32;
};
// Number of caps (Tube::cap of level-0 tubes) owning a tube that starts a chain of tubes
// (one per grain, from tubes[level]) satisfying the nested tube hypothesis.
int nested_direction_count(const Multigrain& mg, const std::vector<std::vector<Tube>>& tubes,
                           const NestedConfig& cfg = {});

}  // namespace osc
