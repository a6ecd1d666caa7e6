#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "oscillab/phase_core.hpp"

namespace osc {

namespace {

std::mutex plan_mutex;  // FFTW planning is not thread-safe

void fft_inplace(std::vector<cplx>& data, const std::vector<int>& shape, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), buf, buf, sign,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(plan_mutex);
  fftw_destroy_plan(plan);
}

double freq(int k, int n, double length) {
  int kk = (k < (n + 1) / 2) ? k : k - n;
  return kk / length;
}

}  // namespace

GridFunction apply_fourier_multiplier(const GridFunction& f,
                                      const std::function<double(const Vec&)>& m,
                                      int subsamples) {
  f.validate();
  if (subsamples < 1) throw ArgumentError("apply_fourier_multiplier: subsamples < 1");
  GridFunction out = f;
  fft_inplace(out.samples, out.shape, FFTW_FORWARD);

  const int d = f.dim;
  Vec len(d), dxi(d);
  for (int a = 0; a < d; ++a) {
    len[a] = f.hi[a] - f.lo[a];
    dxi[a] = 1.0 / len[a];
  }
  int cells = 1;
  for (int a = 0; a < d; ++a) cells *= subsamples;
  const double inv_n = 1.0 / static_cast<double>(f.size());
  const long total = static_cast<long>(f.size());

#pragma omp parallel for num_threads(worker_count()) schedule(static)
  for (long i = 0; i < total; ++i) {
    auto idx = f.unravel(static_cast<std::size_t>(i));
    Vec xi(d), probe(d);
    for (int a = 0; a < d; ++a) xi[a] = freq(idx[a], f.shape[a], len[a]);
    double mv;
    if (subsamples == 1) {
      mv = m(xi);
    } else {
      double acc = 0.0;
      for (int c = 0; c < cells; ++c) {
        int rem = c;
        for (int a = 0; a < d; ++a) {
          int s = rem % subsamples;
          rem /= subsamples;
          probe[a] = xi[a] + ((s + 0.5) / subsamples - 0.5) * dxi[a];
        }
        acc += m(probe);
      }
      mv = acc / cells;
    }
    out.samples[i] *= mv * inv_n;
  }

  fft_inplace(out.samples, out.shape, FFTW_BACKWARD);
  return out;
}

GridFunction apply_bochner_riesz(const GridFunction& f, double alpha, int subsamples) {
  // alpha in (-1, 0) keeps the multiplier locally integrable; cell averaging
  // (subsamples > 1) is then what makes the discrete multiplier meaningful.
  if (!(alpha > -1.0)) throw ArgumentError("apply_bochner_riesz: alpha must exceed -1");
  return apply_fourier_multiplier(
      f,
      [alpha](const Vec& xi) {
        double q = 1.0 - dot(xi, xi);
        if (q <= 0.0) return 0.0;
        return alpha == 0.0 ? 1.0 : std::pow(q, alpha);
      },
      subsamples);
}

}  // namespace osc
