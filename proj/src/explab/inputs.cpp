#include <cmath>

#include "oscillab/explab.hpp"

namespace osc {

namespace {

// exp(1 - 1/(1-u^2)) on (-1, 1): peak value 1.
double bump(double u) { return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0; }

}  // namespace

GridFunction random_smooth(int dim, int nodes, CounterRng rng, int modes) {
  if (dim < 1) throw ArgumentError("random_smooth: dim must be positive");
  if (nodes < 8) throw ArgumentError("random_smooth: need at least 8 nodes per axis");
  if (modes < 0) throw ArgumentError("random_smooth: modes must be non-negative");
  const int side = 2 * modes + 1;
  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) count *= side;
  std::vector<cplx> c(count);
  for (auto& z : c) {
    const double re = rng.normal();
    z = {re, rng.normal()};
  }
  return GridFunction::sample(Vec(dim, 0.0), Vec(dim, 1.0), std::vector<int>(dim, nodes),
                              [&](const Vec& w) {
                                double b = 1.0;
                                for (double x : w) b *= bump((x - 0.5) / 0.45);
                                if (b == 0.0) return cplx(0.0);
                                cplx s = 0.0;
                                for (std::size_t i = 0; i < count; ++i) {
                                  std::size_t rem = i;
                                  double ph = 0.0;
                                  for (int a = dim - 1; a >= 0; --a) {
                                    ph += (static_cast<int>(rem % side) - modes) * w[a];
                                    rem /= side;
                                  }
                                  s += c[i] * std::polar(1.0, kTwoPi * ph);
                                }
                                return b * s;
                              });
}

GridFunction knapp_input(int n, int N, double L, double delta) {
  if (n < 2) throw ArgumentError("knapp_input: n must be at least 2");
  if (!(delta > 0 && delta < 1)) throw ArgumentError("knapp_input: delta must be in (0, 1)");
  double total = std::pow(static_cast<double>(N), n);
  if (total > (1u << 26)) throw ArgumentError("knapp_input: grid too large");
  // The frequency cell is 1/L; the annulus of width 2 delta needs a few cells across.
  if (2.0 * delta * L < 4.0)
    throw ResolutionError("knapp_input: frequency spacing 1/L does not resolve width delta");
  if (N / L < 2.5) throw ResolutionError("knapp_input: band N/(2L) must exceed the unit sphere");
  GridFunction f = GridFunction::zeros(Vec(n, -L / 2), Vec(n, L / 2), std::vector<int>(n, N));
  f.samples[0] = 1.0;
  const double sd = std::sqrt(delta);
  return apply_fourier_multiplier(f, [delta, sd](const Vec& xi) {
    if (xi[0] <= 0) return 0.0;
    double v = bump((std::sqrt(dot(xi, xi)) - 1.0) / delta);
    for (std::size_t i = 1; i < xi.size() && v != 0.0; ++i) v *= bump(xi[i] / sd);
    return v;
  });
}

std::optional<double> knapp_ratio(const GridFunction& f, double alpha, double p, int subsamples) {
  double den = 0.0;
  for (const auto& z : f.samples) den += std::pow(std::abs(z), p);
  if (!(den > 0)) return std::nullopt;
  const GridFunction g = apply_bochner_riesz(f, alpha, subsamples);
  double num = 0.0;
  for (const auto& z : g.samples) num += std::pow(std::abs(z), p);
  return std::pow(num / den, 1.0 / p);
}

}  // namespace osc
