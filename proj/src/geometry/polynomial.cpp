#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "oscillab/geometry.hpp"

namespace osc {

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p(n);
  if (c != 0.0) p.terms.push_back({std::vector<int>(n, 0), c});
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  Polynomial p(n);
  std::vector<int> e(n, 0);
  e[i] = 1;
  p.terms.push_back({e, 1.0});
  return p;
}

Polynomial Polynomial::linear(const Vec& a, double b) {
  const int n = static_cast<int>(a.size());
  Polynomial p = constant(n, b);
  for (int i = 0; i < n; ++i)
    if (a[i] != 0.0) p = p + variable(n, i) * a[i];
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& m : terms) {
    int s = 0;
    for (int e : m.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::eval(const Vec& x) const {
  double s = 0.0;
  for (const auto& m : terms) {
    double v = m.coeff;
    for (int i = 0; i < nvars; ++i)
      for (int k = 0; k < m.exponents[i]; ++k) v *= x[i];
    s += v;
  }
  return s;
}

Vec Polynomial::gradient(const Vec& x) const {
  Vec g(nvars, 0.0);
  for (const auto& m : terms)
    for (int j = 0; j < nvars; ++j) {
      if (m.exponents[j] == 0) continue;
      double v = m.coeff * m.exponents[j];
      for (int i = 0; i < nvars; ++i) {
        int e = m.exponents[i] - (i == j ? 1 : 0);
        for (int k = 0; k < e; ++k) v *= x[i];
      }
      g[j] += v;
    }
  return g;
}

namespace {

Vec poly_mul(const Vec& a, const Vec& b) {
  Vec r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

Vec Polynomial::restrict_to_line(const Vec& p, const Vec& u) const {
  Vec out(degree() + 1, 0.0);
  for (const auto& m : terms) {
    Vec acc{m.coeff};
    for (int i = 0; i < nvars; ++i)
      for (int k = 0; k < m.exponents[i]; ++k) acc = poly_mul(acc, Vec{p[i], u[i]});
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] += acc[k];
  }
  return out;
}

void Polynomial::compress() {
  std::sort(terms.begin(), terms.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
  std::vector<Monomial> out;
  for (auto& m : terms) {
    if (!out.empty() && out.back().exponents == m.exponents)
      out.back().coeff += m.coeff;
    else
      out.push_back(m);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Monomial& m) { return m.coeff == 0.0; }),
            out.end());
  terms = std::move(out);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(std::max(nvars, o.nvars));
  r.terms = terms;
  r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
  r.compress();
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(std::max(nvars, o.nvars));
  for (const auto& a : terms)
    for (const auto& b : o.terms) {
      std::vector<int> e(r.nvars, 0);
      for (int i = 0; i < r.nvars; ++i) e[i] = a.exponents[i] + b.exponents[i];
      r.terms.push_back({e, a.coeff * b.coeff});
    }
  r.compress();
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r = *this;
  for (auto& m : r.terms) m.coeff *= s;
  r.compress();
  return r;
}

std::vector<std::vector<int>> monomial_exponents(int n, int D) {
  std::vector<std::vector<int>> out;
  for (int deg = 1; deg <= D; ++deg) {
    std::vector<int> e(n, 0);
    // compositions of deg into n parts, lexicographically descending in the first variable
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == n - 1) {
        e[i] = left;
        out.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[i] = k;
        rec(i + 1, left - k);
      }
    };
    rec(0, deg);
  }
  return out;
}

Vec real_roots(const Vec& coeffs, double imag_tol) {
  Vec c = coeffs;
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= 1e-13 * scale) c.pop_back();
  const int D = static_cast<int>(c.size()) - 1;
  if (D < 1) return {};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(D, D);
  for (int i = 1; i < D; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < D; ++i) C(i, D - 1) = -c[i] / c[D];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  Vec roots;
  for (int i = 0; i < D; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace osc
