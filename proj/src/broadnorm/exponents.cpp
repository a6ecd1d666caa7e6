#include <cmath>

#include "oscillab/broadnorm.hpp"

namespace osc {

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational p_critical(int n, int k) {
  if (k < 2 || k > n - 1) throw DomainError("p_critical: need 2 <= k <= n-1");
  Rational prod = 1;
  for (int i = k; i <= n - 1; ++i) prod *= Rational(2 * i, 2 * i + 1);
  return Rational(2) + Rational(6) / (Rational(2 * (n - 1)) + Rational(k - 1) * prod);
}

BoundRange bound_range(int n, int k) {
  if (k < 2) throw DomainError("bound_range: need k >= 2");
  if (2 * n - k <= 0) throw DomainError("bound_range: need 2n > k");
  BoundRange b;
  b.low = Rational(2) + Rational(4, 2 * n - k);
  if (k > 2) b.high = Rational(2) + Rational(2, k - 2);
  return b;
}

ExponentTable exponent_table(int n, int k, const std::vector<Rational>& p) {
  if (k < 2 || k > n) throw DomainError("exponent_table: need 2 <= k <= n");
  if (static_cast<int>(p.size()) != n - k + 1)
    throw ArgumentError("exponent_table: expected p_k .. p_n");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 2) throw DomainError("exponent_table: exponents must be >= 2");
    if (i > 0 && p[i] > p[i - 1]) throw DomainError("exponent_table: p_i must not increase");
  }
  ExponentTable t{n, k, p, {}, {}};
  const Rational half(1, 2);
  auto gap = [&](const Rational& q) { return half - Rational(1) / q; };
  for (int i = k; i <= n; ++i) {
    if (i == n) {
      t.alpha.push_back(1);
      t.beta.push_back(1);
      break;
    }
    const Rational g = gap(t.p_at(i));
    if (g == 0) throw DomainError("exponent_table: p_" + std::to_string(i) + " = 2 is not invertible");
    t.alpha.push_back(gap(t.p_at(i + 1)) / g);
    t.beta.push_back(gap(t.p_at(n)) / g);
  }
  t.beta.push_back(1);  // beta_{n+1}
  return t;
}

double m_constant(const Vec& r, const Vec& D, const ExponentTable& t, int l, double delta) {
  const int n = t.n;
  if (l < t.k || l > n) throw DomainError("m_constant: level outside k..n");
  if (static_cast<int>(r.size()) != n - l + 1 || static_cast<int>(D.size()) != n - l + 1)
    throw ArgumentError("m_constant: r and D must be indexed l..n");
  double prodD = 1.0;
  for (double x : D) prodD *= x;
  double log_m = (n - l) * delta * std::log(prodD);
  const double bl = to_double(t.beta_at(l));
  for (int i = l; i <= n; ++i) {
    const double bi = to_double(t.beta_at(i)), bn = to_double(t.beta_at(i + 1));
    log_m += 0.5 * (bn - bi) * std::log(r[i - l]) + 0.5 * (bn - bl) * std::log(D[i - l]);
  }
  return std::exp(log_m);
}

StepConstants step_constants(int j, double d, double r, StepCounters c, double delta, double p,
                             int n, double delta_m, double C) {
  if (c.algebraic < 0 || c.cellular < 0 || c.algebraic + c.cellular != j)
    throw ArgumentError("step_constants: counters must sum to j");
  StepConstants s;
  const double la = c.algebraic, lc = c.cellular;
  s.c1 = std::pow(d, lc * delta) * std::pow(std::log(r), 2.0 * p * la * (1.0 + delta));
  s.c2 = std::pow(d, lc * delta + n * la * (1.0 + delta));
  s.c3 = std::pow(d, lc * delta + la * delta) * std::pow(r, C * la * delta_m);
  s.c4 = std::pow(d, j * delta) * std::pow(r, C * la * delta_m);
  return s;
}

}  // namespace osc
