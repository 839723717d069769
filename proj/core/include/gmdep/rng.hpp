#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gmdep {

// Deterministic random stream: a seeded mt19937_64 with hand-rolled
// variate transforms, so a given seed reproduces the same draws on any
// platform we build on.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // uniform on (0,1), endpoints excluded
  double uniform();
  double uniform(double lo, double hi);
  // standard normal via Box-Muller, one draw per call (no spare cache)
  double normal();
  double normal(double mean, double sd);
  // Marsaglia-Tsang; any shape > 0, rate parameterization
  double gamma(double shape, double rate = 1.0);
  double beta(double a, double b);
  double inverse_gamma(double shape, double rate);
  double exponential(double rate = 1.0);
  // index draw proportional to weights (need not be normalized)
  int categorical(std::span<const double> weights);
  // index draw from log-weights, normalized internally
  int categorical_log(std::span<const double> log_weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace gmdep
