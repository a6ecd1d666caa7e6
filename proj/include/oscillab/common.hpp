#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace osc {

using cplx = std::complex<double>;
using Vec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
// Grid too coarse for the oscillation it has to integrate or represent.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SeparationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Worker count for OpenMP regions: omp_get_max_threads() capped by OSCILLAB_THREADS.
int worker_count();

// Counter-based generator: value i of stream (seed, stream) is a pure function
// of (seed, stream, i), so parallel consumers can draw without coordination.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter = 0)
      : seed_(seed), stream_(stream), counter_(counter) {}
  CounterRng(std::uint64_t seed, std::string_view stream, std::uint64_t counter = 0);

  std::uint64_t next();
  double uniform();                    // [0, 1)
  double uniform(double a, double b);  // [a, b)
  double normal();                     // standard normal, Box-Muller
  std::uint64_t counter() const { return counter_; }
  CounterRng substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_, stream_, counter_;
};

std::uint64_t hash_name(std::string_view s);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec axpy(double a, const Vec& x, const Vec& y);  // a*x + y
Vec sub(const Vec& a, const Vec& b);
Vec scale(double a, const Vec& x);

}  // namespace osc
