#include <array>
#include <cmath>
#include <unordered_map>

#include "oscillab/phase_core.hpp"

namespace osc {

void PhaseField::validate() const {
  if (!(lambda >= 1.0)) throw ArgumentError("PhaseField: lambda must be >= 1");
  if (!(c_n >= 1.0)) throw ArgumentError("PhaseField: c_n must be >= 1");
}

namespace {

void require_t(const SpaceTimePoint& p) {
  if (p.t == 0.0) throw DomainError("phase evaluated at t = 0");
}

// y = x - t omega, returns |y|^2
double offset(const SpaceTimePoint& p, const Vec& omega, Vec& y) {
  y.resize(p.x.size());
  double q = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = p.x[i] - p.t * omega[i];
    q += y[i] * y[i];
  }
  return q;
}

}  // namespace

double phase(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega) {
  require_t(p);
  Vec y;
  double q = offset(p, omega, y);
  return pf.lambda / p.t * std::sqrt(pf.lambda * pf.lambda + q);
}

Vec phase_grad_x(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega) {
  require_t(p);
  Vec y;
  double s = std::sqrt(pf.lambda * pf.lambda + offset(p, omega, y));
  return scale(pf.lambda / (p.t * s), y);
}

double phase_dt(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega) {
  require_t(p);
  Vec y;
  double s = std::sqrt(pf.lambda * pf.lambda + offset(p, omega, y));
  return -pf.lambda / (p.t * p.t * s) * (pf.lambda * pf.lambda + dot(p.x, y));
}

Vec phase_grad_omega(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega) {
  require_t(p);
  Vec y;
  double s = std::sqrt(pf.lambda * pf.lambda + offset(p, omega, y));
  return scale(-pf.lambda / s, y);
}

Vec phase_dt_grad_omega(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega) {
  require_t(p);
  Vec y;
  double q = offset(p, omega, y);
  double s2 = pf.lambda * pf.lambda + q;
  double s = std::sqrt(s2);
  double yw = dot(y, omega);
  Vec r(y.size());
  for (std::size_t j = 0; j < y.size(); ++j)
    r[j] = pf.lambda * (omega[j] * s2 - y[j] * yw) / (s2 * s);
  return r;
}

Eigen::MatrixXd phase_mixed_hessian(const PhaseField& pf, const SpaceTimePoint& p,
                                    const Vec& omega) {
  require_t(p);
  Vec y;
  double s2 = pf.lambda * pf.lambda + offset(p, omega, y);
  double s3 = s2 * std::sqrt(s2);
  const int d = static_cast<int>(y.size());
  Eigen::MatrixXd h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) h(i, j) = pf.lambda * (y[i] * y[j] - (i == j ? s2 : 0.0)) / s3;
  return h;
}

// The (n-1)x(n-1) matrix -lambda/s (I - y y^T / s^2) has eigenvalues lambda^3/s^3
// (along y) and lambda/s (n-2 times), so |det| = (lambda/s)^{n+1}.
double mixed_hessian_det(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega) {
  require_t(p);
  Vec y;
  double s = std::sqrt(pf.lambda * pf.lambda + offset(p, omega, y));
  const int n = static_cast<int>(y.size()) + 1;
  return std::pow(pf.lambda / s, n + 1);
}

namespace {

// Truncated multivariate Taylor polynomial in V variables up to total order N.
class Jet {
 public:
  struct Table {
    int V, N;
    std::vector<std::vector<int>> alpha;
    std::vector<int> degree;
    std::vector<long> code;
    std::unordered_map<long, int> pos;
    std::vector<std::array<int, 3>> products;  // (i, j, k) with alpha_i + alpha_j = alpha_k
    Table(int v, int n) : V(v), N(n) {
      std::vector<int> a(V, 0);
      enumerate(a, 0, N);
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        long c = 0;
        for (int k = 0; k < V; ++k) c = c * (N + 1) + alpha[i][k];
        code.push_back(c);
        pos[c] = static_cast<int>(i);
      }
      for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = 0; j < alpha.size(); ++j)
          if (degree[i] + degree[j] <= N)
            products.push_back({static_cast<int>(i), static_cast<int>(j),
                                pos.at(code[i] + code[j])});
    }
    void enumerate(std::vector<int>& a, int k, int left) {
      if (k == V) {
        alpha.push_back(a);
        int d = 0;
        for (int x : a) d += x;
        degree.push_back(d);
        return;
      }
      for (int e = 0; e <= left; ++e) {
        a[k] = e;
        enumerate(a, k + 1, left - e);
      }
      a[k] = 0;
    }
  };

  explicit Jet(const Table* t, double v = 0.0) : t_(t), c_(t->alpha.size(), 0.0) { c_[0] = v; }
  static Jet variable(const Table* t, int var, double v) {
    Jet j(t, v);
    std::vector<int> a(t->V, 0);
    if (t->N >= 1) {
      a[var] = 1;
      long c = 0;
      for (int k = 0; k < t->V; ++k) c = c * (t->N + 1) + a[k];
      j.c_[t->pos.at(c)] = 1.0;
    }
    return j;
  }
  Jet operator+(const Jet& o) const {
    Jet r(*this);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r(*this);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r(t_);
    r.c_[0] = 0.0;
    for (const auto& p : t_->products) r.c_[p[2]] += c_[p[0]] * o.c_[p[1]];
    return r;
  }
  Jet operator*(double s) const {
    Jet r(*this);
    for (double& x : r.c_) x *= s;
    return r;
  }
  // f(a0 + u) = sum_k d[k] u^k
  Jet compose(const std::vector<double>& d) const {
    Jet u(*this);
    u.c_[0] = 0.0;
    Jet acc(t_, d[0]);
    Jet pw(t_, 1.0);
    for (int k = 1; k <= t_->N; ++k) {
      pw = pw * u;
      acc = acc + pw * d[k];
    }
    return acc;
  }
  Jet sqrt() const {
    std::vector<double> d(t_->N + 1);
    double a0 = c_[0];
    double b = 1.0;  // binom(1/2, k)
    for (int k = 0; k <= t_->N; ++k) {
      d[k] = b * std::pow(a0, 0.5 - k);
      b *= (0.5 - k) / (k + 1);
    }
    return compose(d);
  }
  Jet inv() const {
    std::vector<double> d(t_->N + 1);
    double a0 = c_[0];
    for (int k = 0; k <= t_->N; ++k) d[k] = ((k % 2) ? -1.0 : 1.0) * std::pow(a0, -1.0 - k);
    return compose(d);
  }
  double coeff(const std::vector<int>& a) const {
    long c = 0;
    for (int k = 0; k < t_->V; ++k) c = c * (t_->N + 1) + a[k];
    return c_[t_->pos.at(c)];
  }

 private:
  const Table* t_;
  std::vector<double> c_;
};

}  // namespace

double phase_derivative(const PhaseField& pf, const SpaceTimePoint& p, const Vec& omega,
                        const std::vector<int>& ax, int at, const std::vector<int>& aw) {
  require_t(p);
  const int d = static_cast<int>(p.x.size());
  if (static_cast<int>(ax.size()) != d || static_cast<int>(aw.size()) != d)
    throw ArgumentError("phase_derivative: multi-index size mismatch");
  std::vector<int> alpha;
  alpha.insert(alpha.end(), ax.begin(), ax.end());
  alpha.push_back(at);
  alpha.insert(alpha.end(), aw.begin(), aw.end());
  int order = 0;
  double fact = 1.0;
  for (int a : alpha) {
    order += a;
    for (int k = 2; k <= a; ++k) fact *= k;
  }
  Jet::Table table(2 * d + 1, order);
  std::vector<Jet> xs, ws;
  for (int i = 0; i < d; ++i) xs.push_back(Jet::variable(&table, i, p.x[i]));
  Jet t = Jet::variable(&table, d, p.t);
  for (int i = 0; i < d; ++i) ws.push_back(Jet::variable(&table, d + 1 + i, omega[i]));
  Jet q(&table, pf.lambda * pf.lambda);
  for (int i = 0; i < d; ++i) {
    Jet y = xs[i] - t * ws[i];
    q = q + y * y;
  }
  Jet phi = q.sqrt() * t.inv() * pf.lambda;
  return fact * phi.coeff(alpha);
}

double taylor_remainder(const PhaseField& pf, const SpaceTimePoint& x0, const SpaceTimePoint& x,
                        const Vec& omega) {
  double lin = dot(phase_grad_x(pf, x0, omega), sub(x.x, x0.x)) +
               phase_dt(pf, x0, omega) * (x.t - x0.t);
  return phase(pf, x, omega) - phase(pf, x0, omega) - lin;
}

ScaleLadder scale_ladder(int K, double R, double lambda, double c_n) {
  if (K < 2) throw ArgumentError("scale_ladder: K must be >= 2");
  if (!(R >= 1.0)) throw ArgumentError("scale_ladder: R must be >= 1");
  if (R > lambda) throw ArgumentError("scale_ladder: R > lambda");
  ScaleLadder s{K, R, lambda, c_n * lambda};
  double ratio = lambda / R;
  if (ratio < K) return s;
  // m = [log_K(lambda/R)], computed without floating log
  int m = 0;
  double pw = 1.0;
  while (pw * K <= ratio * (1.0 + 1e-12)) {
    pw *= K;
    ++m;
  }
  double sum = 2.0, term = 1.0;
  for (int j = 1; j <= m - 1; ++j) {
    term /= K;
    sum += term;
  }
  s.value = c_n * lambda * sum;
  return s;
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double cutoff_bump(const PhaseField& pf, const Cutoff& c, const SpaceTimePoint& p) {
  if (!c.on) return 1.0;
  double lr = scale_ladder(c.K, c.R, pf.lambda, pf.c_n).value;
  double v = 1.0;
  for (double xi : p.x) v *= smooth_step((2.0 * lr - std::abs(xi)) / lr);
  double t_lo = c.R / (2.0 * pf.c_n);
  double t_hi = pf.c_n * pf.lambda;
  v *= smooth_step((p.t - t_lo) / t_lo);
  v *= smooth_step((2.0 * t_hi - p.t) / t_hi);
  return v;
}

PseudoPoint pseudo_forward(const Vec& x_prime, double x_n) {
  if (x_n == 0.0) throw DomainError("pseudo_forward: x_n = 0");
  return {scale(1.0 / x_n, x_prime), 1.0 / x_n};
}

PseudoPoint pseudo_inverse(const Vec& u, double t) {
  if (t == 0.0) throw DomainError("pseudo_inverse: t = 0");
  return {scale(1.0 / t, u), 1.0 / t};
}

}  // namespace osc
