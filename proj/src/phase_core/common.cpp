#include "oscillab/common.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>

namespace osc {

int worker_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("OSCILLAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1 && cap < n) n = static_cast<int>(cap);
  }
  return n < 1 ? 1 : n;
}

namespace {
std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view stream, std::uint64_t counter)
    : seed_(seed), stream_(hash_name(stream)), counter_(counter) {}

std::uint64_t CounterRng::next() {
  std::uint64_t k = splitmix(seed_ ^ splitmix(stream_ + 0x632be59bd9b4e019ULL));
  return splitmix(k ^ splitmix(counter_++));
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double CounterRng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

CounterRng CounterRng::substream(std::uint64_t index) const {
  return CounterRng(seed_, splitmix(stream_ ^ splitmix(index + 1)), 0);
}

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec axpy(double a, const Vec& x, const Vec& y) {
  Vec r(y);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec scale(double a, const Vec& x) {
  Vec r(x);
  for (double& v : r) v *= a;
  return r;
}

}  // namespace osc
