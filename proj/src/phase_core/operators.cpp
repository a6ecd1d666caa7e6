#include <omp.h>

#include <algorithm>
#include <cmath>

#include "oscillab/phase_core.hpp"

namespace osc {

GridFunction GridFunction::zeros(Vec lo, Vec hi, std::vector<int> shape) {
  GridFunction g;
  g.dim = static_cast<int>(shape.size());
  g.lo = std::move(lo);
  g.hi = std::move(hi);
  g.shape = std::move(shape);
  std::size_t n = 1;
  for (int s : g.shape) n *= static_cast<std::size_t>(std::max(s, 0));
  g.samples.assign(n, cplx(0.0, 0.0));
  g.validate();
  return g;
}

void GridFunction::validate() const {
  if (dim < 1) throw ArgumentError("GridFunction: dim must be >= 1");
  if (static_cast<int>(shape.size()) != dim || static_cast<int>(lo.size()) != dim ||
      static_cast<int>(hi.size()) != dim)
    throw ArgumentError("GridFunction: shape/domain dimension mismatch");
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) {
    if (shape[a] < 1) throw ArgumentError("GridFunction: empty axis");
    if (!(hi[a] > lo[a])) throw ArgumentError("GridFunction: domain has zero volume");
    n *= shape[a];
  }
  if (n != samples.size()) throw ArgumentError("GridFunction: sample count != shape product");
}

double GridFunction::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

std::vector<int> GridFunction::unravel(std::size_t flat) const {
  std::vector<int> idx(dim);
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % shape[a]);
    flat /= shape[a];
  }
  return idx;
}

std::size_t GridFunction::ravel(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (int a = 0; a < dim; ++a) f = f * shape[a] + idx[a];
  return f;
}

Vec GridFunction::node(std::size_t flat) const {
  auto idx = unravel(flat);
  Vec w(dim);
  for (int a = 0; a < dim; ++a) w[a] = lo[a] + idx[a] * spacing(a);
  return w;
}

double GridFunction::l2_norm() const {
  double s = 0;
  for (const auto& z : samples) s += std::norm(z);
  return std::sqrt(s * cell_volume());
}

Nodes nodes_from_grid(const GridFunction& g) {
  g.validate();
  Nodes nd;
  nd.dim = g.dim;
  nd.lo = g.lo;
  nd.hi.resize(g.dim);
  nd.spacing.resize(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    nd.spacing[a] = g.spacing(a);
    nd.hi[a] = g.lo[a] + (g.shape[a] - 1) * nd.spacing[a];
  }
  const double cv = g.cell_volume();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.samples[i] == cplx(0.0, 0.0)) continue;
    Vec w = g.node(i);
    nd.omega.insert(nd.omega.end(), w.begin(), w.end());
    nd.weights.push_back(g.samples[i] * cv);
  }
  return nd;
}

void check_nyquist(const PhaseField& pf, const Nodes& nodes, const SpaceTimePoint& p) {
  if (nodes.count() == 0) return;
  const double l2 = pf.lambda * pf.lambda;
  for (int a = 0; a < nodes.dim; ++a) {
    // |d_{w_a} phi| = lambda |y_a| / s <= lambda |y_a| / sqrt(lambda^2 + y_a^2), y_a = x_a - t w_a
    double ya = std::max(std::abs(p.x[a] - p.t * nodes.lo[a]), std::abs(p.x[a] - p.t * nodes.hi[a]));
    double grad = pf.lambda * ya / std::sqrt(l2 + ya * ya) + nodes.weight_bandwidth;
    if (grad * nodes.spacing[a] > 0.25)
      throw ResolutionError("oscillatory quadrature under-resolved: phase advances " +
                            std::to_string(grad * nodes.spacing[a]) +
                            " cycles per cell (limit 0.25)");
  }
}

namespace {

cplx sum_point(const PhaseField& pf, const Nodes& nodes, const SpaceTimePoint& p) {
  const int d = nodes.dim;
  const double l2 = pf.lambda * pf.lambda;
  const double pre = pf.lambda / p.t;
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < nodes.count(); ++j) {
    const double* w = &nodes.omega[j * d];
    double q = l2;
    for (int a = 0; a < d; ++a) {
      double y = p.x[a] - p.t * w[a];
      q += y * y;
    }
    double ph = pre * std::sqrt(q);
    ph -= std::floor(ph);
    double c = std::cos(kTwoPi * ph), s = std::sin(kTwoPi * ph);
    const cplx& wt = nodes.weights[j];
    re += wt.real() * c - wt.imag() * s;
    im += wt.real() * s + wt.imag() * c;
  }
  return {re, im};
}

void check_points(const PhaseField& pf, const Nodes& nodes,
                  const std::vector<SpaceTimePoint>& points, bool check) {
  pf.validate();
  for (const auto& p : points) {
    if (p.t == 0.0) throw DomainError("oscillatory_sum: point with t = 0");
    if (static_cast<int>(p.x.size()) != nodes.dim)
      throw ArgumentError("oscillatory_sum: point dimension mismatch");
    if (check) check_nyquist(pf, nodes, p);
  }
}

}  // namespace

std::vector<cplx> oscillatory_sum(const PhaseField& pf, const Nodes& nodes,
                                  const std::vector<SpaceTimePoint>& points, bool check) {
  check_points(pf, nodes, points, check);
  std::vector<cplx> out(points.size());
  const long np = static_cast<long>(points.size());
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 4)
  for (long i = 0; i < np; ++i) out[i] = sum_point(pf, nodes, points[i]);
  return out;
}

std::vector<cplx> oscillatory_sum_serial(const PhaseField& pf, const Nodes& nodes,
                                         const std::vector<SpaceTimePoint>& points, bool check) {
  check_points(pf, nodes, points, check);
  std::vector<cplx> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = sum_point(pf, nodes, points[i]);
  return out;
}

namespace {

void apply_cutoff(const PhaseField& pf, const Cutoff& cut,
                  const std::vector<SpaceTimePoint>& points, std::vector<cplx>& out) {
  if (!cut.on) return;
  for (std::size_t i = 0; i < points.size(); ++i) out[i] *= cutoff_bump(pf, cut, points[i]);
}

}  // namespace

std::vector<cplx> eval_H_lambda(const PhaseField& pf, const GridFunction& g,
                                const std::vector<SpaceTimePoint>& points, const Cutoff& cut) {
  auto out = oscillatory_sum(pf, nodes_from_grid(g), points, true);
  apply_cutoff(pf, cut, points, out);
  return out;
}

std::vector<cplx> eval_H_lambda_serial(const PhaseField& pf, const GridFunction& g,
                                       const std::vector<SpaceTimePoint>& points,
                                       const Cutoff& cut) {
  auto out = oscillatory_sum_serial(pf, nodes_from_grid(g), points, true);
  apply_cutoff(pf, cut, points, out);
  return out;
}

namespace {

cplx expi(double cycles) {
  cycles -= std::floor(cycles);
  return {std::cos(kTwoPi * cycles), std::sin(kTwoPi * cycles)};
}

void require_resolved(double lambda, const GridFunction& f) {
  for (int a = 0; a < f.dim; ++a)
    if (lambda * f.spacing(a) > 0.25)
      throw ResolutionError("kernel e^{2 pi i lambda |.|} under-resolved on axis " +
                            std::to_string(a));
}

}  // namespace

std::vector<cplx> eval_S_lambda(double lambda, const GridFunction& f, const Amplitude& a,
                                const std::vector<Vec>& points) {
  f.validate();
  require_resolved(lambda, f);
  const double cv = f.cell_volume();
  std::vector<cplx> out(points.size());
  const long np = static_cast<long>(points.size());
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 4)
  for (long i = 0; i < np; ++i) {
    cplx acc = 0.0;
    Vec z(f.dim);
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f.samples[j] == cplx(0.0, 0.0)) continue;
      Vec y = f.node(j);
      for (int k = 0; k < f.dim; ++k) z[k] = points[i][k] - y[k];
      double amp = a(z);
      if (amp == 0.0) continue;
      acc += expi(lambda * norm(z)) * amp * f.samples[j];
    }
    out[i] = acc * cv;
  }
  return out;
}

std::vector<cplx> eval_S_bar(const PhaseField& pf, const GridFunction& g, const Amplitude3& a,
                             const std::vector<SpaceTimePoint>& points) {
  Nodes nodes = nodes_from_grid(g);
  check_points(pf, nodes, points, true);
  const int d = g.dim;
  std::vector<cplx> out(points.size());
  const long np = static_cast<long>(points.size());
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 4)
  for (long i = 0; i < np; ++i) {
    const auto& p = points[i];
    cplx acc = 0.0;
    Vec w(d), z(d);
    for (std::size_t j = 0; j < nodes.count(); ++j) {
      for (int k = 0; k < d; ++k) {
        w[k] = nodes.omega[j * d + k];
        z[k] = (p.x[k] - p.t * w[k]) / pf.lambda;
      }
      double amp = a(z, p.t / pf.lambda, w);
      if (amp == 0.0) continue;
      acc += expi(phase(pf, p, w)) * amp * nodes.weights[j];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<cplx> eval_S_slice(double lambda, const GridFunction& f0, const Amplitude& a,
                               const std::vector<Vec>& points) {
  f0.validate();
  require_resolved(lambda, f0);
  const int d = f0.dim;
  const double cv = f0.cell_volume();
  std::vector<cplx> out(points.size());
  const long np = static_cast<long>(points.size());
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 4)
  for (long i = 0; i < np; ++i) {
    const Vec& x = points[i];
    cplx acc = 0.0;
    Vec z(d + 1);
    for (std::size_t j = 0; j < f0.size(); ++j) {
      if (f0.samples[j] == cplx(0.0, 0.0)) continue;
      Vec y = f0.node(j);
      for (int k = 0; k < d; ++k) z[k] = x[k] - y[k];
      z[d] = x[d];
      double amp = a(z);
      if (amp == 0.0) continue;
      acc += expi(lambda * norm(z)) * amp * f0.samples[j];
    }
    out[i] = acc * cv;
  }
  return out;
}

std::vector<cplx> eval_S_tilde(double lambda, const GridFunction& f0, const Amplitude& a,
                               const std::vector<SpaceTimePoint>& points) {
  f0.validate();
  for (const auto& p : points)
    if (p.t == 0.0) throw DomainError("eval_S_tilde: t = 0");
  const int d = f0.dim;
  const double cv = f0.cell_volume();
  std::vector<cplx> out(points.size());
  const long np = static_cast<long>(points.size());
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 4)
  for (long i = 0; i < np; ++i) {
    const auto& p = points[i];
    cplx acc = 0.0;
    Vec z(d + 1);
    for (std::size_t j = 0; j < f0.size(); ++j) {
      if (f0.samples[j] == cplx(0.0, 0.0)) continue;
      Vec y = f0.node(j);
      double q = 1.0;
      for (int k = 0; k < d; ++k) {
        double e = p.x[k] - p.t * y[k];
        q += e * e;
        z[k] = e / p.t;
      }
      z[d] = 1.0 / p.t;
      double amp = a(z);
      if (amp == 0.0) continue;
      acc += expi(lambda / p.t * std::sqrt(q)) * amp * f0.samples[j];
    }
    out[i] = acc * cv;
  }
  return out;
}

double l2_bound_check(const PhaseField& pf, const GridFunction& g, const Vec& t_samples,
                      double margin, double dx) {
  if (margin < 0) margin = pf.lambda;
  if (!(dx > 0)) throw ArgumentError("l2_bound_check: dx must be positive");
  double gn = g.l2_norm();
  if (gn == 0.0) return 0.0;
  Nodes nodes = nodes_from_grid(g);
  double worst = 0.0;
  for (double t : t_samples) {
    // spatial slice covering t * supp g plus margin
    std::vector<int> shape(g.dim);
    Vec lo(g.dim);
    std::size_t total = 1;
    for (int a = 0; a < g.dim; ++a) {
      double a0 = std::min(t * g.lo[a], t * g.hi[a]) - margin;
      double a1 = std::max(t * g.lo[a], t * g.hi[a]) + margin;
      lo[a] = a0;
      shape[a] = static_cast<int>(std::ceil((a1 - a0) / dx)) + 1;
      total *= shape[a];
    }
    std::vector<SpaceTimePoint> pts(total);
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t f = i;
      Vec x(g.dim);
      for (int a = g.dim - 1; a >= 0; --a) {
        x[a] = lo[a] + (f % shape[a]) * dx;
        f /= shape[a];
      }
      pts[i] = {std::move(x), t};
    }
    auto vals = oscillatory_sum(pf, nodes, pts, true);
    double s = 0.0;
    for (const auto& v : vals) s += std::norm(v);
    double norm_t = std::sqrt(s * std::pow(dx, g.dim));
    worst = std::max(worst, norm_t / gn);
  }
  return worst;
}

}  // namespace osc
