#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace osc {

using detail::kv;
using detail::Params;

namespace {

struct Sample {
  SpaceTimePoint x;
  Vec omega;
};

// x in [-lambda, lambda]^{n-1}, t in [lambda/C_n, C_n lambda], omega in [0,1]^{n-1}.
Sample draw(int n, const PhaseField& pf, CounterRng& rng) {
  Sample s;
  s.x.x.resize(n - 1);
  for (auto& v : s.x.x) v = rng.uniform(-pf.lambda, pf.lambda);
  s.x.t = rng.uniform(pf.lambda / pf.c_n, pf.c_n * pf.lambda);
  s.omega.resize(n - 1);
  for (auto& v : s.omega) v = rng.uniform();
  return s;
}

std::vector<int> unit(int d, int i) {
  std::vector<int> e(d, 0);
  e[i] = 1;
  return e;
}

}  // namespace

std::vector<ReportRow> check_gauss_map(const ExperimentConfig& cfg) {
  const PhaseField pf{cfg.lambda, cfg.c_n};
  std::vector<ReportRow> rows;
  for (int n : {2, 3}) {
    const int d = n - 1;
    CounterRng rng = detail::rng_for(cfg, "gauss", n);
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
      const Sample S = draw(n, pf, rng);
      // columns d_{omega_j} grad_{x,t} phi
      std::vector<Vec> cols;
      for (int j = 0; j < d; ++j) {
        Vec c(n);
        for (int k = 0; k < d; ++k)
          c[k] = phase_derivative(pf, S.x, S.omega, unit(d, k), 0, unit(d, j));
        c[d] = phase_derivative(pf, S.x, S.omega, std::vector<int>(d, 0), 1, unit(d, j));
        cols.push_back(c);
      }
      Vec nu = generalized_cross(cols);
      nu = scale(1.0 / norm(nu), nu);
      const Vec G = gauss_map(S.omega);
      if (dot(nu, G) < 0) nu = scale(-1.0, nu);
      // chord form of the angle, accurate near 0
      const double ang = 2.0 * std::asin(std::min(1.0, 0.5 * norm(sub(nu, G))));
      worst = std::max(worst, ang);
    }
    rows.push_back(make_row("gauss", "max_angle_error",
                            {kv("n", n), kv("lambda", cfg.lambda), kv("samples", cfg.samples)}, worst,
                            "<=", 1e-6));
  }
  return rows;
}

std::vector<ReportRow> check_hessian_det(const ExperimentConfig& cfg) {
  const PhaseField pf{cfg.lambda, cfg.c_n};
  std::vector<ReportRow> rows;
  for (int n : {2, 3}) {
    const int d = n - 1;
    CounterRng rng = detail::rng_for(cfg, "hessian", n);
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
      const Sample S = draw(n, pf, rng);
      Eigen::MatrixXd M(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          M(i, j) = phase_derivative(pf, S.x, S.omega, unit(d, i), 0, unit(d, j));
      const double numeric = std::abs(M.partialPivLu().determinant());
      const double closed = mixed_hessian_det(pf, S.x, S.omega);
      worst = std::max(worst, std::abs(numeric - closed) / closed);
    }
    rows.push_back(make_row("hessian", "max_relative_error",
                            {kv("n", n), kv("lambda", cfg.lambda), kv("samples", cfg.samples)}, worst,
                            "<=", 1e-8));
    // on the light cone x = t omega
    CounterRng rc = detail::rng_for(cfg, "hessian-cone", n);
    double dev = 0.0;
    for (int s = 0; s < 16; ++s) {
      Sample S = draw(n, pf, rc);
      for (int a = 0; a < d; ++a) S.x.x[a] = S.x.t * S.omega[a];
      dev = std::max(dev, std::abs(mixed_hessian_det(pf, S.x, S.omega) - 1.0));
    }
    rows.push_back(make_row("hessian", "cone_deviation_from_one", {kv("n", n), kv("samples", 16)}, dev,
                            "==", 0.0));
  }
  return rows;
}

std::vector<ReportRow> check_phi_spectra(const ExperimentConfig& cfg) {
  const int n = cfg.n;
  const int d = n - 1;
  const PhaseField pf{cfg.lambda, cfg.c_n};
  CounterRng rng = detail::rng_for(cfg, "spectra");
  double asym = 0.0, C = 1.0;
  const double rad = 3.0 * cfg.c_n * cfg.lambda;
  for (int s = 0; s < cfg.samples; ++s) {
    // uniform in the ball B(0, 3 C_n lambda) by rejection
    Vec x(d);
    do {
      for (auto& v : x) v = rng.uniform(-rad, rad);
    } while (norm(x) > rad);
    const double t0 = rng.uniform(cfg.lambda / cfg.c_n, cfg.c_n * cfg.lambda);
    Vec w(d);
    for (auto& v : w) v = rng.uniform();
    const Eigen::MatrixXd J = phi_jacobian(pf, t0, w, x);
    asym = std::max(asym, (J - J.transpose()).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (J + J.transpose()));
    const auto& ev = es.eigenvalues();
    C = std::max({C, ev.maxCoeff(), 1.0 / ev.minCoeff()});
  }
  const Params prm{kv("n", n), kv("c_n", cfg.c_n), kv("lambda", cfg.lambda),
                   kv("samples", cfg.samples)};
  return {make_row("spectra", "max_asymmetry", prm, asym, "<=", 1e-12),
          make_row("spectra", "eigenvalue_constant", prm, C, "<=", 8.0)};
}

std::vector<ReportRow> check_l2_proxy(const ExperimentConfig& cfg) {
  const PhaseField pf{cfg.lambda, cfg.c_n};
  Vec ts;
  const double t_hi = cfg.c_n * cfg.lambda;
  for (int i = 0; i < 8; ++i) ts.push_back(std::exp(std::log(t_hi) * i / 7.0));
  double worst = 0.0;
  for (int i = 0; i < cfg.instances; ++i) {
    const GridFunction g = random_smooth(cfg.n - 1, cfg.grid, detail::rng_for(cfg, "l2proxy", i));
    worst = std::max(worst, l2_bound_check(pf, g, ts, cfg.lambda, 0.25));
  }
  return {make_row("l2proxy", "max_norm_ratio",
                   {kv("n", cfg.n), kv("lambda", cfg.lambda), kv("inputs", cfg.instances),
                    kv("slices", ts.size())},
                   worst, "<=", 10.0)};
}

std::vector<ReportRow> check_broad_norm(const ExperimentConfig& cfg) {
  const int n = cfg.n;
  const double K = cfg.K;
  const int side = static_cast<int>(K);  // caps per axis
  std::vector<CapDirections> dirs;
  {
    int total = 1;
    for (int a = 0; a < n - 1; ++a) total *= side;
    for (int c = 0; c < total; ++c) {
      Vec centre(n - 1);
      for (int a = n - 2, rem = c; a >= 0; --a, rem /= side) centre[a] = (rem % side + 0.5) / side;
      dirs.push_back(cap_directions(centre, 1.0 / side));
    }
  }
  const double h = 8.0;
  Box U{Vec(n, 0.0), Vec(n, K * K)};
  U.hi[0] = 2 * K * K;
  Box U1 = U, U2 = U;
  U1.hi[0] = K * K;
  U2.lo[0] = K * K;
  std::vector<int> shape(n);
  for (int a = 0; a < n; ++a) shape[a] = static_cast<int>(std::round((U.hi[a] - U.lo[a]) / h));
  std::size_t nodes = 1;
  for (int s : shape) nodes *= s;

  std::vector<int> As = cfg.a_values.empty() ? std::vector<int>{1, 2, 4} : cfg.a_values;
  std::sort(As.begin(), As.end());
  int vanish_bad = 0, antitone_bad = 0, subadd_bad = 0;
  double vanish_max = 0.0;
  for (int inst = 0; inst < cfg.instances; ++inst) {
    CounterRng rng = detail::rng_for(cfg, "broadnorm", inst);
    CapField f{n, U.lo, h, shape, dirs, {}};
    f.values.assign(dirs.size(), Vec(nodes, 0.0));
    const int active = 1 + static_cast<int>(rng.uniform() * 12);
    for (int j = 0; j < active; ++j) {
      const std::size_t c = static_cast<std::size_t>(rng.uniform() * dirs.size());
      const double amp = rng.uniform(0.1, 2.0);
      for (auto& v : f.values[c]) v += amp * rng.uniform();
    }
    CapField single = f;
    const std::size_t keep = static_cast<std::size_t>(rng.uniform() * dirs.size());
    for (std::size_t c = 0; c < dirs.size(); ++c)
      if (c != keep) std::fill(single.values[c].begin(), single.values[c].end(), 0.0);
    for (auto& v : single.values[keep]) v = rng.uniform(0.5, 1.5);

    double prev = std::numeric_limits<double>::infinity();
    for (int A : As) {
      BroadNormConfig bc;
      bc.k = cfg.k;
      bc.A = A;
      bc.K = K;
      bc.p = cfg.p;
      bc.grassmann_samples = std::max(16, A);
      const double z = broad_norm(single, U, bc);
      vanish_max = std::max(vanish_max, z);
      if (z != 0.0) ++vanish_bad;
      const double full = broad_norm(f, U, bc);
      if (full > prev) ++antitone_bad;
      prev = full;
      const double a = broad_norm(f, U1, bc), b = broad_norm(f, U2, bc);
      if (std::pow(full, bc.p) > (std::pow(a, bc.p) + std::pow(b, bc.p)) * (1 + 1e-12)) ++subadd_bad;
    }
  }
  const Params prm{kv("n", n), kv("K", K), kv("k", cfg.k), kv("p", cfg.p),
                   kv("instances", cfg.instances), kv("caps", dirs.size())};
  return {make_row("broadnorm", "single_cap_max_value", prm, vanish_max, "==", 0.0),
          make_row("broadnorm", "single_cap_violations", prm, vanish_bad, "==", 0.0),
          make_row("broadnorm", "antitone_violations", prm, antitone_bad, "==", 0.0),
          make_row("broadnorm", "subadditivity_violations", prm, subadd_bad, "==", 0.0)};
}

}  // namespace osc
