#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

#include "oscillab/wavepackets.hpp"

namespace osc {

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Vec PacketSet::v_of(const WavePacket& p) const {
  Vec v(p.v_lat.size());
  const double sr = std::sqrt(r);
  for (std::size_t a = 0; a < v.size(); ++a) v[a] = sr * p.v_lat[a];
  return v;
}

std::vector<std::size_t> PacketSet::all() const {
  std::vector<std::size_t> idx(packets.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

double default_v_radius(double r) { return std::sqrt(r) * (4.0 + std::log2(r)); }

namespace {

cplx expi(double cycles) {
  cycles -= std::floor(cycles);
  return {std::cos(kTwoPi * cycles), std::sin(kTwoPi * cycles)};
}

// Contract axis `axis` of a row-major tensor with E (rows x dims[axis]).
std::vector<cplx> mode_product(const std::vector<cplx>& t, std::vector<int>& dims, int axis,
                               const CMat& E) {
  long pre = 1, post = 1;
  for (int a = 0; a < axis; ++a) pre *= dims[a];
  for (int a = axis + 1; a < static_cast<int>(dims.size()); ++a) post *= dims[a];
  const long m = dims[axis], k = E.rows();
  std::vector<cplx> out(static_cast<std::size_t>(pre * k * post));
  for (long p = 0; p < pre; ++p) {
    Eigen::Map<const CMat> in(t.data() + p * m * post, m, post);
    Eigen::Map<CMat> o(out.data() + p * k * post, k, post);
    o.noalias() = E * in;
  }
  dims[axis] = static_cast<int>(k);
  return out;
}

// Node index range [first, last] of g's grid inside [lo, hi] on one axis.
std::pair<int, int> node_range(const GridFunction& g, int axis, double lo, double hi) {
  const double h = g.spacing(axis);
  int first = static_cast<int>(std::ceil((lo - g.lo[axis]) / h - 1e-12));
  int last = static_cast<int>(std::floor((hi - g.lo[axis]) / h + 1e-12));
  first = std::max(first, 0);
  last = std::min(last, g.shape[axis] - 1);
  return {first, last};
}

std::vector<int> spectral_centre(const PhaseField& pf, const SpaceTimePoint& x0, const Vec& w,
                                 double r) {
  Vec grad = phase_grad_omega(pf, x0, w);
  std::vector<int> c(grad.size());
  const double sr = std::sqrt(r);
  for (std::size_t a = 0; a < c.size(); ++a) c[a] = static_cast<int>(std::lround(grad[a] / sr));
  return c;
}

struct CapResult {
  bool used = false;
  std::vector<int> centre;
  std::vector<WavePacket> packets;
};

CapResult decompose_cap(const GridFunction& g, const CapFamily& caps, std::size_t ci,
                        const SpaceTimePoint& x0, const PhaseField& pf, double v_radius) {
  CapResult res;
  const int d = g.dim;
  const Cap& cap = caps.caps[ci];
  std::vector<int> first(d), count(d);
  for (int a = 0; a < d; ++a) {
    double lo = (cap.index[a] - 0.05) * caps.side;
    double hi = (cap.index[a] + 1.05) * caps.side;
    auto [f, l] = node_range(g, a, lo, hi);
    if (l < f) return res;
    first[a] = f;
    count[a] = l - f + 1;
  }
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= count[a];

  const double sr = std::sqrt(caps.r);
  res.centre = spectral_centre(pf, x0, cap.center, caps.r);
  Vec c(d);
  for (int a = 0; a < d; ++a) c[a] = sr * res.centre[a];

  std::vector<cplx> G(total);
  Vec spread(d, 0.0);
  bool any = false;
  std::vector<int> local(d), gidx(d);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t f = i;
    for (int a = d - 1; a >= 0; --a) {
      local[a] = static_cast<int>(f % count[a]);
      f /= count[a];
      gidx[a] = first[a] + local[a];
    }
    const cplx gv = g.samples[g.ravel(gidx)];
    Vec w(d);
    for (int a = 0; a < d; ++a) w[a] = g.lo[a] + gidx[a] * g.spacing(a);
    double ps = caps.psi(ci, w);
    Vec grad = phase_grad_omega(pf, x0, w);
    for (int a = 0; a < d; ++a) spread[a] = std::max(spread[a], std::abs(grad[a] - c[a]));
    if (gv == cplx(0.0, 0.0) || ps == 0.0) continue;
    any = true;
    G[i] = gv * ps * expi(phase(pf, x0, w) - dot(c, w));
  }
  if (!any) return res;
  for (int a = 0; a < d; ++a)
    if (g.spacing(a) * (v_radius + spread[a]) > 0.5)
      throw ResolutionError("decompose: grid spacing " + std::to_string(g.spacing(a)) +
                            " cannot resolve modes up to " + std::to_string(v_radius + spread[a]));

  const int kmax = static_cast<int>(std::floor(v_radius / sr + 1e-9));
  const int nk = 2 * kmax + 1;
  std::vector<int> dims = count;
  std::vector<cplx> T = std::move(G);
  for (int a = 0; a < d; ++a) {
    CMat E(nk, count[a]);
    for (int k = 0; k < nk; ++k)
      for (int i = 0; i < count[a]; ++i) {
        double w = g.lo[a] + (first[a] + i) * g.spacing(a);
        E(k, i) = expi(-(k - kmax) * sr * w);
      }
    T = mode_product(T, dims, a, E);
  }
  const double norm = std::pow(caps.r, 0.5 * d) * g.cell_volume();
  std::size_t nt = T.size();
  std::vector<int> k(d);
  for (std::size_t i = 0; i < nt; ++i) {
    std::size_t f = i;
    long k2 = 0;
    for (int a = d - 1; a >= 0; --a) {
      k[a] = static_cast<int>(f % nk) - kmax;
      f /= nk;
      k2 += static_cast<long>(k[a]) * k[a];
    }
    if (k2 * caps.r > v_radius * v_radius * (1.0 + 1e-12)) continue;
    WavePacket p;
    p.cap = static_cast<int>(ci);
    p.v_lat.resize(d);
    for (int a = 0; a < d; ++a) p.v_lat[a] = res.centre[a] + k[a];
    p.coeff = T[i] * norm;
    res.packets.push_back(std::move(p));
  }
  res.used = true;
  return res;
}

PacketSet assemble(const GridFunction& g, double r, const SpaceTimePoint& x0, const PhaseField& pf,
                   double v_radius, std::vector<CapResult>& parts, CapFamily caps) {
  PacketSet set;
  set.pf = pf;
  set.r = r;
  set.v_radius = v_radius;
  set.x0 = x0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parts[i].used) continue;
    set.center_lat[static_cast<int>(i)] = parts[i].centre;
    for (auto& p : parts[i].packets) set.packets.push_back(std::move(p));
  }
  set.caps = std::move(caps);
  (void)g;
  return set;
}

void check_decompose_args(const GridFunction& g, double r, const SpaceTimePoint& x0,
                          const PhaseField& pf, double v_radius) {
  g.validate();
  pf.validate();
  if (!(r >= 1.0)) throw ArgumentError("decompose: r must be >= 1");
  if (static_cast<int>(x0.x.size()) != g.dim) throw ArgumentError("decompose: x0 dimension");
  if (x0.t == 0.0) throw DomainError("decompose: x0 with t = 0");
  if (!(v_radius >= 0.0)) throw ArgumentError("decompose: negative v_radius");
}

}  // namespace

PacketSet decompose(const GridFunction& g, double r, const SpaceTimePoint& x0, const PhaseField& pf,
                    double v_radius) {
  check_decompose_args(g, r, x0, pf, v_radius);
  CapFamily caps = make_caps(r, g.dim);
  std::vector<CapResult> parts(caps.size());
  std::exception_ptr err;
  const long nc = static_cast<long>(caps.size());
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 1)
  for (long i = 0; i < nc; ++i) {
    try {
      parts[i] = decompose_cap(g, caps, static_cast<std::size_t>(i), x0, pf, v_radius);
    } catch (...) {
#pragma omp critical(osc_decompose_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return assemble(g, r, x0, pf, v_radius, parts, std::move(caps));
}

PacketSet decompose_serial(const GridFunction& g, double r, const SpaceTimePoint& x0,
                           const PhaseField& pf, double v_radius) {
  check_decompose_args(g, r, x0, pf, v_radius);
  CapFamily caps = make_caps(r, g.dim);
  std::vector<CapResult> parts(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i)
    parts[i] = decompose_cap(g, caps, i, x0, pf, v_radius);
  return assemble(g, r, x0, pf, v_radius, parts, std::move(caps));
}

namespace {

// Packets of `which` grouped by cap, ascending.
std::map<int, std::vector<std::size_t>> by_cap(const PacketSet& set,
                                               const std::vector<std::size_t>& which) {
  std::map<int, std::vector<std::size_t>> m;
  for (std::size_t i : which) {
    if (i >= set.packets.size()) throw ArgumentError("packet index out of range");
    m[set.packets[i].cap].push_back(i);
  }
  return m;
}

// Relative lattice offsets k = v_lat - centre for the packets of one cap, and the box bound.
int offsets(const PacketSet& set, int cap, const std::vector<std::size_t>& ids,
            std::vector<std::vector<int>>& ks) {
  const auto& c = set.center_lat.at(cap);
  int kc = 0;
  ks.clear();
  for (std::size_t i : ids) {
    std::vector<int> k(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) {
      k[a] = set.packets[i].v_lat[a] - c[a];
      kc = std::max(kc, std::abs(k[a]));
    }
    ks.push_back(std::move(k));
  }
  return kc;
}

// sum_k coeff_k e^{2 pi i k r^{1/2} w} on the tensor grid of axis node vectors.
std::vector<cplx> trig_sum(const PacketSet& set, int cap, const std::vector<std::size_t>& ids,
                           const std::vector<Vec>& axes) {
  const int d = static_cast<int>(axes.size());
  std::vector<std::vector<int>> ks;
  const int kc = offsets(set, cap, ids, ks);
  const int nk = 2 * kc + 1;
  std::vector<int> dims(d, nk);
  std::size_t nt = 1;
  for (int a = 0; a < d; ++a) nt *= nk;
  std::vector<cplx> T(nt);
  for (std::size_t q = 0; q < ids.size(); ++q) {
    std::size_t f = 0;
    for (int a = 0; a < d; ++a) f = f * nk + (ks[q][a] + kc);
    T[f] += set.packets[ids[q]].coeff;
  }
  const double sr = std::sqrt(set.r);
  for (int a = 0; a < d; ++a) {
    CMat E(axes[a].size(), nk);
    for (std::size_t i = 0; i < axes[a].size(); ++i)
      for (int k = 0; k < nk; ++k) E(i, k) = expi((k - kc) * sr * axes[a][i]);
    T = mode_product(T, dims, a, E);
  }
  return T;
}

Vec tensor_node(const std::vector<Vec>& axes, std::size_t flat) {
  const int d = static_cast<int>(axes.size());
  Vec w(d);
  for (int a = d - 1; a >= 0; --a) {
    w[a] = axes[a][flat % axes[a].size()];
    flat /= axes[a].size();
  }
  return w;
}

}  // namespace

GridFunction synthesize(const PacketSet& set, const std::vector<std::size_t>& which,
                        const GridFunction& like) {
  GridFunction out = GridFunction::zeros(like.lo, like.hi, like.shape);
  const int d = like.dim;
  auto groups = by_cap(set, which);
  std::vector<std::pair<int, std::vector<std::size_t>>> list(groups.begin(), groups.end());
  struct Piece {
    std::vector<int> first, count;
    std::vector<cplx> vals;
  };
  std::vector<Piece> pieces(list.size());
  const long ng = static_cast<long>(list.size());
  const double sr = std::sqrt(set.r);
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 1)
  for (long gi = 0; gi < ng; ++gi) {
    const int cap = list[gi].first;
    Vec lo = set.caps.cell_lo(cap);
    Piece& pc = pieces[gi];
    pc.first.resize(d);
    pc.count.resize(d);
    std::vector<Vec> axes(d);
    bool empty = false;
    for (int a = 0; a < d; ++a) {
      auto [f, l] = node_range(like, a, lo[a], lo[a] + set.caps.period);
      if (l < f) {
        empty = true;
        break;
      }
      pc.first[a] = f;
      pc.count[a] = l - f + 1;
      for (int i = f; i <= l; ++i) axes[a].push_back(like.lo[a] + i * like.spacing(a));
    }
    if (empty) continue;
    pc.vals = trig_sum(set, cap, list[gi].second, axes);
    const auto& cl = set.center_lat.at(cap);
    Vec c(d);
    for (int a = 0; a < d; ++a) c[a] = sr * cl[a];
    for (std::size_t i = 0; i < pc.vals.size(); ++i) {
      Vec w = tensor_node(axes, i);
      double pt = set.caps.psi_tilde(cap, w);
      pc.vals[i] = pt == 0.0 ? cplx(0.0) : pc.vals[i] * pt * expi(dot(c, w) - phase(set.pf, set.x0, w));
    }
  }
  std::vector<int> idx(d);
  for (const auto& pc : pieces) {
    if (pc.vals.empty()) continue;
    for (std::size_t i = 0; i < pc.vals.size(); ++i) {
      std::size_t f = i;
      for (int a = d - 1; a >= 0; --a) {
        idx[a] = pc.first[a] + static_cast<int>(f % pc.count[a]);
        f /= pc.count[a];
      }
      out.samples[out.ravel(idx)] += pc.vals[i];
    }
  }
  return out;
}

namespace {

// Quadrature of H^lambda over one (11/9)-cap for the packets `ids`.
struct CapQuad {
  int cap = 0;
  std::vector<Vec> axes;
  std::vector<double> omega;  // flattened nodes
  std::vector<double> base;   // cycles: c.w - phi(x0; w)
  std::vector<double> amp;    // h^d psi~(w)
  std::size_t count() const { return amp.size(); }
};

CapQuad build_quad(const PacketSet& set, int cap, const std::vector<std::size_t>& ids,
                   const std::vector<SpaceTimePoint>& points) {
  const int d = set.caps.dim;
  const double sr = std::sqrt(set.r);
  const double P = set.caps.period;
  Vec lo = set.caps.cell_lo(cap);
  std::vector<std::vector<int>> ks;
  const int kc = offsets(set, cap, ids, ks);
  const auto& cl = set.center_lat.at(cap);
  Vec c(d);
  for (int a = 0; a < d; ++a) c[a] = sr * cl[a];

  // bandwidth of w -> phi(x;w) - phi(x0;w) + v.w over the cap, sampled at 5 points per axis
  Vec band(d, 0.0);
  const int ns = 5;
  int combos = 1;
  for (int a = 0; a < d; ++a) combos *= ns;
  std::vector<Vec> probes;
  std::vector<Vec> g0;
  for (int s = 0; s < combos; ++s) {
    int rem = s;
    Vec w(d);
    for (int a = 0; a < d; ++a) {
      w[a] = lo[a] + P * (rem % ns) / (ns - 1.0);
      rem /= ns;
    }
    g0.push_back(phase_grad_omega(set.pf, set.x0, w));
    probes.push_back(std::move(w));
  }
  for (const auto& p : points)
    for (std::size_t s = 0; s < probes.size(); ++s) {
      Vec gx = phase_grad_omega(set.pf, p, probes[s]);
      for (int a = 0; a < d; ++a) band[a] = std::max(band[a], std::abs(gx[a] - g0[s][a] + c[a]));
    }
  CapQuad q;
  q.cap = cap;
  q.axes.resize(d);
  double hvol = 1.0;
  for (int a = 0; a < d; ++a) {
    double B = 1.25 * (band[a] + kc * sr) + 1.0;
    int m = std::max(160, static_cast<int>(std::ceil(4.0 * B * P)));
    double h = P / m;
    hvol *= h;
    for (int i = 0; i < m; ++i) q.axes[a].push_back(lo[a] + (i + 0.5) * h);
  }
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= q.axes[a].size();
  q.omega.reserve(total * d);
  for (std::size_t i = 0; i < total; ++i) {
    Vec w = tensor_node(q.axes, i);
    double pt = set.caps.psi_tilde(cap, w);
    q.omega.insert(q.omega.end(), w.begin(), w.end());
    q.base.push_back(dot(c, w) - phase(set.pf, set.x0, w));
    q.amp.push_back(hvol * pt);
  }
  return q;
}

cplx quad_point(const PhaseField& pf, const CapQuad& q, const std::vector<cplx>& weights,
                const SpaceTimePoint& p) {
  const int d = static_cast<int>(q.axes.size());
  const double l2 = pf.lambda * pf.lambda;
  const double pre = pf.lambda / p.t;
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < q.count(); ++j) {
    if (q.amp[j] == 0.0) continue;
    const double* w = &q.omega[j * d];
    double s = l2;
    for (int a = 0; a < d; ++a) {
      double y = p.x[a] - p.t * w[a];
      s += y * y;
    }
    double ph = pre * std::sqrt(s) + q.base[j];
    ph -= std::floor(ph);
    double cs = std::cos(kTwoPi * ph), sn = std::sin(kTwoPi * ph);
    const cplx& wt = weights[j];
    re += wt.real() * cs - wt.imag() * sn;
    im += wt.real() * sn + wt.imag() * cs;
  }
  return {re, im};
}

std::vector<cplx> eval_packets_impl(const PacketSet& set, const std::vector<std::size_t>& which,
                                    const std::vector<SpaceTimePoint>& points, bool parallel) {
  for (const auto& p : points)
    if (p.t == 0.0) throw DomainError("eval_packets: t = 0");
  std::vector<cplx> out(points.size());
  for (const auto& [cap, ids] : by_cap(set, which)) {
    CapQuad q = build_quad(set, cap, ids, points);
    auto trig = trig_sum(set, cap, ids, q.axes);
    std::vector<cplx> weights(q.count());
    for (std::size_t j = 0; j < q.count(); ++j) weights[j] = trig[j] * q.amp[j];
    const long np = static_cast<long>(points.size());
    if (parallel) {
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 16)
      for (long i = 0; i < np; ++i) out[i] += quad_point(set.pf, q, weights, points[i]);
    } else {
      for (long i = 0; i < np; ++i) out[i] += quad_point(set.pf, q, weights, points[i]);
    }
  }
  return out;
}

}  // namespace

std::vector<cplx> eval_packets(const PacketSet& set, const std::vector<std::size_t>& which,
                               const std::vector<SpaceTimePoint>& points) {
  return eval_packets_impl(set, which, points, true);
}

std::vector<cplx> eval_packets_serial(const PacketSet& set, const std::vector<std::size_t>& which,
                                      const std::vector<SpaceTimePoint>& points) {
  return eval_packets_impl(set, which, points, false);
}

Eigen::MatrixXcd eval_packets_each(const PacketSet& set, const std::vector<std::size_t>& which,
                                   const std::vector<SpaceTimePoint>& points) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(points.size(), which.size());
  std::map<std::size_t, std::size_t> column;
  for (std::size_t c = 0; c < which.size(); ++c) column[which[c]] = c;
  const double sr = std::sqrt(set.r);
  const int d = set.caps.dim;
  for (const auto& [cap, ids] : by_cap(set, which)) {
    CapQuad q = build_quad(set, cap, ids, points);
    std::vector<std::vector<int>> ks;
    offsets(set, cap, ids, ks);
    const long m = static_cast<long>(q.count());
    Eigen::MatrixXcd E(m, ids.size());
    for (long j = 0; j < m; ++j)
      for (std::size_t k = 0; k < ids.size(); ++k) {
        double cyc = 0.0;
        for (int a = 0; a < d; ++a) cyc += ks[k][a] * sr * q.omega[j * d + a];
        E(j, k) = expi(cyc) * set.packets[ids[k]].coeff;
      }
    const long np = static_cast<long>(points.size());
    const long chunk = 1024;
    for (long p0 = 0; p0 < np; p0 += chunk) {
      const long rows = std::min(chunk, np - p0);
      Eigen::MatrixXcd U(rows, m);
#pragma omp parallel for num_threads(worker_count()) schedule(static)
      for (long i = 0; i < rows; ++i) {
        const auto& p = points[p0 + i];
        const double l2 = set.pf.lambda * set.pf.lambda;
        for (long j = 0; j < m; ++j) {
          double s = l2;
          for (int a = 0; a < d; ++a) {
            double y = p.x[a] - p.t * q.omega[j * d + a];
            s += y * y;
          }
          U(i, j) = q.amp[j] * expi(set.pf.lambda / p.t * std::sqrt(s) + q.base[j]);
        }
      }
      Eigen::MatrixXcd block = U * E;
      for (std::size_t k = 0; k < ids.size(); ++k)
        out.block(p0, column[ids[k]], rows, 1) = block.col(k);
    }
  }
  return out;
}

double psi_tilde_l2sq(const CapFamily& caps) {
  // product of identical one-dimensional integrals over the (11/9)-dilate
  const int m = 20000;
  const double h = caps.period / m;
  Vec w(caps.dim, 0.0);
  double s = 0.0;
  const Cap& c0 = caps.caps.front();
  for (int i = 0; i < m; ++i) {
    double u = c0.center[0] - 0.5 * caps.period + (i + 0.5) * h;
    double x = std::abs(u - c0.center[0]) / caps.side;
    double v = smooth_step((0.5 * 11.0 / 9.0 - x) / (0.5 * 11.0 / 9.0 - 0.55));
    s += v * v * h;
  }
  return std::pow(s, caps.dim);
}

double packet_l2sq(const PacketSet& set, std::size_t i) {
  return std::norm(set.packets[i].coeff) * psi_tilde_l2sq(set.caps);
}

OrthogonalityReport l2_orthogonality_report(const PacketSet& set, const GridFunction& g) {
  OrthogonalityReport rep;
  double gn = g.l2_norm();
  if (gn == 0.0) return rep;
  const double lpsi = psi_tilde_l2sq(set.caps);
  std::map<int, double> cap_mass;
  double total = 0.0;
  for (const auto& p : set.packets) {
    double m = std::norm(p.coeff) * lpsi;
    total += m;
    cap_mass[p.cap] += m;
  }
  rep.total_ratio = total / (gn * gn);
  double best = -1.0;
  for (const auto& [cap, m] : cap_mass)
    if (m > best) {
      best = m;
      rep.cap = cap;
    }
  if (rep.cap < 0 || best == 0.0) return rep;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < set.packets.size(); ++i)
    if (set.packets[i].cap == rep.cap) ids.push_back(i);
  std::vector<std::vector<int>> ks;
  const int kc = offsets(set, rep.cap, ids, ks);
  const int d = set.caps.dim;
  const int m = std::max(256, 8 * (2 * kc + 1));
  const double h = set.caps.period / m;
  Vec lo = set.caps.cell_lo(rep.cap);
  std::vector<Vec> axes(d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < m; ++i) axes[a].push_back(lo[a] + (i + 0.5) * h);
  auto vals = trig_sum(set, rep.cap, ids, axes);
  double s = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double pt = set.caps.psi_tilde(rep.cap, tensor_node(axes, i));
    s += std::norm(vals[i]) * pt * pt;
  }
  s *= std::pow(h, d);
  rep.fixed_cap_ratio = s / best;
  return rep;
}

}  // namespace osc
