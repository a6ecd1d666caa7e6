#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>

#include "oscillab/geometry.hpp"

namespace osc {

using Rational = boost::multiprecision::cpp_rational;

// 2 + 6 / (2(n-1) + (k-1) prod_{i=k}^{n-1} 2i/(2i+1)), exact.
Rational p_critical(int n, int k);

struct BoundRange {
  Rational low;
  std::optional<Rational> high;  // nullopt is +infinity (k = 2)
};
// (2 + 4/(2n-k), 2 + 2/(k-2))
BoundRange bound_range(int n, int k);

struct ExponentTable {
  int n = 0, k = 0;
  std::vector<Rational> p;      // p_k .. p_n
  std::vector<Rational> alpha;  // alpha_k .. alpha_n
  std::vector<Rational> beta;   // beta_k .. beta_{n+1}
  Rational p_at(int i) const { return p.at(i - k); }
  Rational alpha_at(int i) const { return alpha.at(i - k); }
  Rational beta_at(int i) const { return beta.at(i - k); }
};
ExponentTable exponent_table(int n, int k, const std::vector<Rational>& p);

// M(r, D) = (prod D_i)^{(n-l) delta} prod r_i^{(beta_{i+1}-beta_i)/2} D_i^{(beta_{i+1}-beta_l)/2},
// with r and D indexed i = l..n.
double m_constant(const Vec& r, const Vec& D, const ExponentTable& table, int l, double delta);

struct StepCounters {
  int algebraic = 0;  // #a(j)
  int cellular = 0;   // #c(j)
};
struct StepConstants {
  double c1 = 1, c2 = 1, c3 = 1, c4 = 1;
};
// C^I..C^IV of the partitioning recursion; C is the unspecified constant multiplying delta_m.
StepConstants step_constants(int j, double d, double r, StepCounters counts, double delta,
                             double p, int n, double delta_m, double C = 1.0);

double to_double(const Rational& q);

struct BroadNormConfig {
  int k = 2;
  int A = 1;
  double K = 8.0;
  double p = 4.0;
  int grassmann_samples = 16;
  void check(int n) const;
};

// Directions making up the Gauss image of one cap.
using CapDirections = std::vector<Vec>;

bool cap_in_subspace(const CapDirections& dirs, const Subspace& V, double K);

// Fixed net of (k-1)-planes spanned by subsets of the 2(n-1) vectors (e_n +- e_i)/sqrt 2, after
// planes through the Gauss centres of the heaviest caps; truncated to cfg.grassmann_samples.
std::vector<Subspace> grassmann_samples(int n, const std::vector<CapDirections>& caps,
                                        const Vec& masses, const BroadNormConfig& cfg);

// min over A-subsets of the samples of the max mass over caps outside every chosen plane.
double broad_local(const Vec& masses, const std::vector<CapDirections>& caps,
                   const std::vector<Subspace>& samples, const BroadNormConfig& cfg);
double broad_local(const Vec& masses, const std::vector<CapDirections>& caps,
                   const BroadNormConfig& cfg);

// Per-cap samples of |H g_tau| on a grid of cells [lo + h j, lo + h (j+1)).
struct CapField {
  int dim = 0;
  Vec lo;
  double h = 1.0;
  std::vector<int> shape;
  std::vector<CapDirections> caps;
  std::vector<Vec> values;  // values[cap][flat node], last axis fastest
};

struct Box {
  Vec lo, hi;
};

// (sum over K^2-cubes Q anchored at U.lo of |Q cap U|/|Q| mu(Q))^{1/p}; mu(Q) uses every grid
// node of the field inside Q.
double broad_norm(const CapField& field, const Box& U, const BroadNormConfig& cfg);
double broad_norm_serial(const CapField& field, const Box& U, const BroadNormConfig& cfg);
// sum over cubes of |Q cap U|/|Q| max_tau mass, to the 1/p: the bound without the min.
double max_cap_norm(const CapField& field, const Box& U, const BroadNormConfig& cfg);

}  // namespace osc
