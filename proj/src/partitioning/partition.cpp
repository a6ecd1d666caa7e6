#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>

#include "oscillab/partitioning.hpp"

namespace osc {

double WeightedPoints::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void WeightedPoints::check() const {
  if (points.size() != weights.size()) throw ArgumentError("WeightedPoints: size mismatch");
  if (points.empty()) throw ArgumentError("WeightedPoints: no points");
  const std::size_t n = points[0].size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) throw ArgumentError("WeightedPoints: mixed dimensions");
    if (!(weights[i] >= 0.0)) throw ArgumentError("WeightedPoints: negative weight");
  }
  if (!(total() > 0.0)) throw ArgumentError("WeightedPoints: total weight must be positive");
}

namespace {

// Bisectors are stored in unit coordinates u = (x - center) / scale.
struct Frame {
  Vec center;
  double scale = 1.0;
  Vec to_unit(const Vec& x) const {
    Vec u(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) u[a] = (x[a] - center[a]) / scale;
    return u;
  }
};

double eval_monomial(const std::vector<int>& e, const Vec& u) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) v *= u[i];
  return v;
}

Polynomial from_features(const std::vector<std::vector<int>>& exps, const Eigen::VectorXd& a,
                         int n) {
  Polynomial p(n);
  for (std::size_t k = 0; k < exps.size(); ++k)
    if (a(k) != 0.0) p.terms.push_back({exps[k], a(k)});
  if (a(exps.size()) != 0.0) p.terms.push_back({std::vector<int>(n, 0), a(exps.size())});
  p.compress();
  return p;
}

// p(u) with u = (x - c)/s, expanded in x.
Polynomial to_original(const Polynomial& p, const Frame& f) {
  const int n = p.nvars;
  std::vector<Polynomial> u;
  for (int i = 0; i < n; ++i)
    u.push_back((Polynomial::variable(n, i) - Polynomial::constant(n, f.center[i])) *
                (1.0 / f.scale));
  Polynomial out(n);
  for (const auto& m : p.terms) {
    Polynomial t = Polynomial::constant(n, m.coeff);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < m.exponents[i]; ++k) t = t * u[i];
    out = out + t;
  }
  return out;
}

// Magnitude scale of the evaluation, for a relative zero test.
double eval_scale(const Polynomial& p, const Vec& u) {
  double s = 0.0;
  for (const auto& m : p.terms) s += std::abs(m.coeff * eval_monomial(m.exponents, u));
  return s;
}

int sign_of(const Polynomial& p, const Vec& u) {
  const double v = p.eval(u);
  if (std::abs(v) <= 1e-13 * eval_scale(p, u)) return 0;
  return v > 0 ? 1 : -1;
}

struct Group {
  std::vector<int> idx;
  double weight = 0.0;
};

struct Search {
  Eigen::VectorXd a;
  double score = std::numeric_limits<double>::infinity();
};

// Worst relative imbalance over the groups for the hard sign of F a.
double imbalance(const Eigen::MatrixXd& F, const Vec& w, const std::vector<Group>& groups,
                 const Eigen::VectorXd& a) {
  double worst = 0.0;
  for (const auto& g : groups) {
    double s = 0.0;
    for (int i : g.idx) {
      const double z = F.row(i).dot(a);
      s += (z > 0 ? 1.0 : z < 0 ? -1.0 : 0.0) * w[i];
    }
    worst = std::max(worst, std::abs(s) / g.weight);
  }
  return worst;
}

// Gauss-Newton on the smoothed balance equations sum_c w tanh(beta F a) / W_c = 0, sharpening beta.
Search bisect_once(const Eigen::MatrixXd& F, const Vec& w, const std::vector<Group>& groups,
                   CounterRng rng, int sweeps) {
  const int M = static_cast<int>(F.cols());
  const int C = static_cast<int>(groups.size());
  Eigen::VectorXd a(M);
  for (int k = 0; k < M - 1; ++k) a(k) = rng.normal();
  a(M - 1) = 0.0;
  a.normalize();
  Search best{a, imbalance(F, w, groups, a)};
  auto residual = [&](const Eigen::VectorXd& x, double beta) {
    Eigen::VectorXd r(C);
    for (int c = 0; c < C; ++c) {
      double s = 0.0;
      for (int i : groups[c].idx) s += w[i] * std::tanh(beta * F.row(i).dot(x));
      r(c) = s / groups[c].weight;
    }
    return r;
  };
  for (double beta : {1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0}) {
    Eigen::VectorXd r = residual(a, beta);
    for (int it = 0; it < sweeps; ++it) {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(C, M);
      for (int c = 0; c < C; ++c) {
        for (int i : groups[c].idx) {
          const double t = std::tanh(beta * F.row(i).dot(a));
          J.row(c) += (w[i] * beta * (1.0 - t * t)) * F.row(i);
        }
        J.row(c) /= groups[c].weight;
      }
      Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(r);
      double damp = 1.0;
      bool moved = false;
      for (int h = 0; h < 20; ++h) {
        Eigen::VectorXd trial = (a - damp * step).normalized();
        Eigen::VectorXd rt = residual(trial, beta);
        if (rt.norm() < r.norm()) {
          a = trial;
          r = rt;
          moved = true;
          break;
        }
        damp *= 0.5;
      }
      if (!moved) break;
      const double s = imbalance(F, w, groups, a);
      if (s < best.score) best = {a, s};
    }
  }
  return best;
}

Partition build(const WeightedPoints& W, int d, const PartitionConfig& cfg, bool parallel) {
  W.check();
  if (d < 2) throw ArgumentError("equal_mass_partition: d must be at least 2");
  const int n = W.dim();
  const int N = static_cast<int>(W.points.size());
  if (static_cast<double>(N) < std::pow(d, n))
    throw ArgumentError("equal_mass_partition: need at least d^n points");

  Frame fr;
  fr.center.assign(n, 0.0);
  Vec lo(n, std::numeric_limits<double>::infinity()), hi(n, -lo[0]);
  for (const auto& p : W.points)
    for (int a = 0; a < n; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  double half = 0.0;
  for (int a = 0; a < n; ++a) {
    fr.center[a] = 0.5 * (lo[a] + hi[a]);
    half = std::max(half, 0.5 * (hi[a] - lo[a]));
  }
  if (!(half > 0.0)) throw DegenerateError("equal_mass_partition: all points coincide");
  fr.scale = half;
  std::vector<Vec> U(N);
  for (int i = 0; i < N; ++i) U[i] = fr.to_unit(W.points[i]);
  const double total = W.total();
  Vec w(N);
  for (int i = 0; i < N; ++i) w[i] = W.weights[i] / total;

  const int levels =
      cfg.levels > 0 ? cfg.levels : static_cast<int>(std::ceil(n * std::log2(d) - 1e-12));
  Partition part;
  part.dim = n;
  part.center = fr.center;
  part.scale = fr.scale;
  std::vector<std::string> pattern(N);
  std::vector<char> wall(N, 0);

  for (int j = 0; j < levels; ++j) {
    std::map<std::string, Group> by;
    for (int i = 0; i < N; ++i)
      if (!wall[i]) by[pattern[i]].idx.push_back(i);
    std::vector<Group> groups;
    for (auto& [pat, g] : by) {
      // groups whose weight sits at one location cannot be halved
      int first = -1;
      bool spread = false;
      for (int i : g.idx) {
        if (w[i] <= 0) continue;
        g.weight += w[i];
        if (first < 0)
          first = i;
        else if (norm(sub(U[i], U[first])) > 1e-12)
          spread = true;
      }
      if (g.weight > 0 && spread)
        groups.push_back(std::move(g));
      else if (g.weight > 0)
        part.degenerate = true;
    }
    const int D = bisector_degree(n, static_cast<int>(by.size()));
    const auto exps = monomial_exponents(n, D);
    const int M = static_cast<int>(exps.size()) + 1;
    Eigen::MatrixXd F(N, M);
    for (int i = 0; i < N; ++i) {
      for (int k = 0; k < M - 1; ++k) F(i, k) = eval_monomial(exps[k], U[i]);
      F(i, M - 1) = 1.0;
    }
    Eigen::VectorXd a = Eigen::VectorXd::Zero(M);
    if (!groups.empty()) {
      std::vector<Search> found(cfg.restarts);
      std::vector<std::exception_ptr> errs(cfg.restarts);
      CounterRng base(cfg.seed, "partition");
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 1) if (parallel)
      for (int s = 0; s < cfg.restarts; ++s) {
        try {
          found[s] = bisect_once(F, w, groups, base.substream(j * 1000 + s), cfg.sweeps);
        } catch (...) {
          errs[s] = std::current_exception();
        }
      }
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
      int pick = 0;
      for (int s = 1; s < cfg.restarts; ++s)
        if (found[s].score < found[pick].score) pick = s;
      a = found[pick].a;
    } else {
      a(0) = 1.0;  // nothing to split; any hyperplane
    }
    Polynomial b = from_features(exps, a, n);
    part.bisectors.push_back(b);
    for (int i = 0; i < N; ++i) {
      if (wall[i]) continue;
      const int s = sign_of(b, U[i]);
      if (s == 0)
        wall[i] = 1;
      else
        pattern[i].push_back(s > 0 ? '+' : '-');
    }
  }

  std::map<std::string, Cell> cells;
  for (int i = 0; i < N; ++i) {
    if (wall[i]) {
      part.wall_indices.push_back(i);
      continue;
    }
    Cell& c = cells[pattern[i]];
    c.sign_pattern = pattern[i];
    c.indices.push_back(i);
    c.weight += W.weights[i];
  }
  for (auto& [pat, c] : cells) part.cells.push_back(std::move(c));

  part.poly = Polynomial::constant(n, 1.0);
  for (const auto& b : part.bisectors) part.poly = part.poly * to_original(b, fr);
  return part;
}

Vec roots_on_line(const Polynomial& p, const Vec& q, const Vec& u, bool& vanishes) {
  Vec c = p.restrict_to_line(q, u);
  double size = 0.0;
  for (const auto& m : p.terms) {
    double v = std::abs(m.coeff);
    for (std::size_t i = 0; i < q.size(); ++i)
      for (int k = 0; k < m.exponents[i]; ++k) v *= std::abs(q[i]) + std::abs(u[i]);
    size += v;
  }
  double cmax = 0.0;
  for (double x : c) cmax = std::max(cmax, std::abs(x));
  vanishes = cmax <= 1e-12 * size;
  if (vanishes) return {};
  return real_roots(c);
}

Vec distinct(Vec r) {
  std::sort(r.begin(), r.end());
  Vec out;
  for (double x : r)
    if (out.empty() || std::abs(x - out.back()) > 1e-9 * (1.0 + std::abs(x))) out.push_back(x);
  return out;
}

// Distance along the first hit of +-axis lines; used when the gradient vanishes.
double axis_fallback(const Polynomial& p, const Vec& u) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < u.size(); ++a) {
    Vec e(u.size(), 0.0);
    e[a] = 1.0;
    bool vanish = false;
    for (double s : roots_on_line(p, u, e, vanish)) best = std::min(best, std::abs(s));
    if (vanish) return 0.0;
  }
  return best;
}

double first_order(const Polynomial& p, const Vec& u) {
  const double v = p.eval(u);
  if (v == 0.0) return 0.0;
  const double g = norm(p.gradient(u));
  if (g <= 1e-14 * std::max(1.0, eval_scale(p, u))) return axis_fallback(p, u);
  return std::abs(v) / g;
}

}  // namespace

int bisector_degree(int n, int cells) {
  for (int D = 1;; ++D) {
    // C(n + D, n) - 1 non-constant monomials
    double v = 1.0;
    for (int i = 1; i <= n; ++i) v = v * (D + i) / i;
    if (v - 1.0 >= cells - 1e-9) return D;
  }
}

std::optional<std::string> Partition::pattern_of(const Vec& x) const {
  Vec u(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) u[a] = (x[a] - center[a]) / scale;
  std::string s;
  for (const auto& b : bisectors) {
    const int g = sign_of(b, u);
    if (g == 0) return std::nullopt;
    s.push_back(g > 0 ? '+' : '-');
  }
  return s;
}

Polynomial Partition::bisector_in_x(std::size_t j) const {
  return to_original(bisectors.at(j), Frame{center, scale});
}

double Partition::max_cell_weight() const {
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, c.weight);
  return m;
}

Partition equal_mass_partition(const WeightedPoints& W, int d, const PartitionConfig& cfg) {
  return build(W, d, cfg, true);
}

Partition equal_mass_partition_serial(const WeightedPoints& W, int d, const PartitionConfig& cfg) {
  return build(W, d, cfg, false);
}

int line_cell_crossings(const Polynomial& P, const Line& line) {
  bool vanish = false;
  Vec r = distinct(roots_on_line(P, line.point, line.direction, vanish));
  if (vanish) return 0;
  return static_cast<int>(r.size()) + 1;
}

int line_cell_crossings(const Partition& part, const Line& line) {
  const int n = part.dim;
  Vec q(n), u(n);
  for (int a = 0; a < n; ++a) {
    q[a] = (line.point[a] - part.center[a]) / part.scale;
    u[a] = line.direction[a] / part.scale;
  }
  Vec all;
  for (const auto& b : part.bisectors) {
    bool vanish = false;
    Vec r = roots_on_line(b, q, u, vanish);
    if (vanish) return 0;
    all.insert(all.end(), r.begin(), r.end());
  }
  all = distinct(all);
  Vec probes;
  if (all.empty()) {
    probes.push_back(0.0);
  } else {
    probes.push_back(all.front() - 1.0);
    for (std::size_t i = 0; i + 1 < all.size(); ++i) probes.push_back(0.5 * (all[i] + all[i + 1]));
    probes.push_back(all.back() + 1.0);
  }
  std::set<std::string> seen;
  for (double s : probes) {
    Vec x = axpy(s, u, q);
    std::string pat;
    for (const auto& b : part.bisectors) pat.push_back(b.eval(x) >= 0 ? '+' : '-');
    seen.insert(pat);
  }
  return static_cast<int>(seen.size());
}

double wall_distance(const Partition& part, const Vec& x) {
  Vec u(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) u[a] = (x[a] - part.center[a]) / part.scale;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : part.bisectors) best = std::min(best, first_order(b, u));
  return best * part.scale;
}

double wall_distance(const Polynomial& P, const Vec& x) { return first_order(P, x); }

ShrunkenCells shrunken_cells(const Partition& part, const WeightedPoints& W, double r,
                             double delta_m) {
  const double thick = std::pow(r, 0.5 + delta_m);
  const int N = static_cast<int>(W.points.size());
  std::vector<double> dist(N);
#pragma omp parallel for num_threads(worker_count()) schedule(static)
  for (int i = 0; i < N; ++i) dist[i] = wall_distance(part, W.points[i]);
  ShrunkenCells sc;
  sc.removed = part.wall_indices;
  for (const auto& c : part.cells) {
    std::vector<int> keep;
    for (int i : c.indices) {
      if (dist[i] > thick) {
        keep.push_back(i);
        sc.retained_weight += W.weights[i];
      } else {
        sc.removed.push_back(i);
      }
    }
    sc.retained.push_back(std::move(keep));
  }
  std::sort(sc.removed.begin(), sc.removed.end());
  sc.wall_fraction = 1.0 - sc.retained_weight / W.total();
  return sc;
}

}  // namespace osc
