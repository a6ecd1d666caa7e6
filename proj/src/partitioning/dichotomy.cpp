#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oscillab/partitioning.hpp"

namespace osc {

namespace {

double distance_to(const Variety& V, const Vec& p) {
  auto z = V.project(p);
  return z ? norm(sub(p, *z)) : std::numeric_limits<double>::infinity();
}

double captured(const Variety& Y, const WeightedPoints& W, double thick) {
  const int N = static_cast<int>(W.points.size());
  std::vector<char> in(N, 0);
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 64)
  for (int i = 0; i < N; ++i) in[i] = distance_to(Y, W.points[i]) <= thick;
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    if (in[i]) s += W.weights[i];
  return s / W.total();
}

// Splits a cell at the weighted median of its widest box axis until the box diagonal is <= cap.
void split_cell(const WeightedPoints& W, std::vector<int> idx, double cap,
                std::vector<std::vector<int>>& out, int& splits) {
  const int n = W.dim();
  Vec lo(n, std::numeric_limits<double>::infinity()), hi(n, -lo[0]);
  for (int i : idx)
    for (int a = 0; a < n; ++a) {
      lo[a] = std::min(lo[a], W.points[i][a]);
      hi[a] = std::max(hi[a], W.points[i][a]);
    }
  double diag = 0.0;
  int axis = 0;
  for (int a = 0; a < n; ++a) {
    diag += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  if (idx.size() < 2 || std::sqrt(diag) <= cap) {
    out.push_back(std::move(idx));
    return;
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return W.points[a][axis] < W.points[b][axis]; });
  double half = 0.0, acc = 0.0;
  for (int i : idx) half += W.weights[i];
  half *= 0.5;
  std::size_t cut = 1;
  for (; cut < idx.size(); ++cut) {
    acc += W.weights[idx[cut - 1]];
    if (acc >= half) break;
  }
  cut = std::clamp<std::size_t>(cut, 1, idx.size() - 1);
  ++splits;
  split_cell(W, std::vector<int>(idx.begin(), idx.begin() + cut), cap, out, splits);
  split_cell(W, std::vector<int>(idx.begin() + cut, idx.end()), cap, out, splits);
}

}  // namespace

DichotomyOutcome dichotomy_step(const WeightedPoints& W, const Variety& Z, int d, double r,
                                double delta_m, const PartitionConfig& cfg) {
  W.check();
  const int n = W.dim();
  const int m = Z.dim();
  if (Z.ambient_dim != n) throw ArgumentError("dichotomy_step: dimension mismatch");
  if (m < 1) throw ArgumentError("dichotomy_step: Z must have positive dimension");
  const double thick = std::pow(r, 0.5 + delta_m);
  const double total = W.total();

  Vec mean(n, 0.0);
  for (std::size_t i = 0; i < W.points.size(); ++i)
    mean = axpy(W.weights[i] / total, W.points[i], mean);
  // sampled support check: B_r (seen from the mean) and the neighbourhood of Z
  const std::size_t stride = std::max<std::size_t>(1, W.points.size() / 1000);
  for (std::size_t i = 0; i < W.points.size(); i += stride) {
    if (W.weights[i] <= 0) continue;
    if (norm(sub(W.points[i], mean)) > 2.0 * r)
      throw ArgumentError("dichotomy_step: weight is not supported in a ball of radius r");
    if (distance_to(Z, W.points[i]) > thick * (1.0 + 1e-6) + 1e-9)
      throw ArgumentError("dichotomy_step: weight is not supported near Z");
  }

  // algebraic candidates: Z cut by principal hyperplanes through the mean
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < W.points.size(); ++i) {
    Eigen::VectorXd y(n);
    for (int a = 0; a < n; ++a) y(a) = W.points[i][a] - mean[a];
    cov += (W.weights[i] / total) * y * y.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  double best = -1.0;
  Variety bestY;
  std::string source;
  auto consider = [&](const Polynomial& q, const char* kind) {
    Variety Y = Z;
    Y.polys.push_back(q);
    auto z = Y.project(mean);
    if (!z) return;
    try {
      Y.tangent_basis(*z);
    } catch (const DegenerateError&) {
      return;
    }
    const double c = captured(Y, W, thick);
    if (c > best) {
      best = c;
      bestY = std::move(Y);
      source = kind;
    }
  };
  for (int e = 0; e < n; ++e) {
    Vec normal(n);
    for (int a = 0; a < n; ++a) normal[a] = es.eigenvectors()(a, e);
    consider(Polynomial::linear(normal, -dot(normal, mean)), "hyperplane");
    if (best >= 0.5) break;
  }

  PartitionConfig pc = cfg;
  if (pc.levels == 0) pc.levels = static_cast<int>(std::ceil(m * std::log2(d) - 1e-12));
  Partition part;
  bool partitioned = true;
  try {
    part = equal_mass_partition(W, d, pc);
  } catch (const DegenerateError&) {
    partitioned = false;
  } catch (const ArgumentError&) {
    partitioned = false;  // too few points to partition
  }
  if (best < 0.5 && partitioned) {
    for (std::size_t j = 0; j < part.bisectors.size(); ++j) {
      consider(part.bisector_in_x(j), "wall");
      if (best >= 0.5) break;
    }
  }
  if (best >= 0.5) return AlgebraicOutcome{std::move(bestY), best, source};

  if (!partitioned)
    throw NeitherCaseError("dichotomy_step: no algebraic capture and the weight cannot be partitioned");
  ShrunkenCells sc = shrunken_cells(part, W, r, delta_m);
  CellularOutcome out;
  for (auto& cell : sc.retained)
    if (!cell.empty()) split_cell(W, cell, r / 2.0, out.cells, out.diameter_splits);
  for (const auto& c : out.cells) {
    double s = 0.0;
    for (int i : c) s += W.weights[i];
    out.cell_weights.push_back(s);
  }
  out.retained_fraction = sc.retained_weight / total;
  if (out.retained_fraction < 0.5 || out.cells.empty()) {
    std::ostringstream msg;
    msg << "dichotomy_step: neither case holds (best algebraic capture " << best
        << ", retained cellular fraction " << out.retained_fraction << ")";
    throw NeitherCaseError(msg.str());
  }
  Vec sorted = out.cell_weights;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double unit = std::pow(static_cast<double>(d), -m) * total;
  out.c_high = sorted.front() / unit;
  out.c_low = sorted[(sorted.size() - 1) / 2] / unit;
  out.partition = std::move(part);
  return out;
}

}  // namespace osc
