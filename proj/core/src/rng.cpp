#include "gmdep/rng.hpp"

#include <algorithm>
#include <cmath>

#include "gmdep/errors.hpp"

namespace gmdep {

double RngStream::uniform() {
  // 53-bit mantissa, strictly inside (0,1)
  const uint64_t r = engine_() >> 11;
  double u = (static_cast<double>(r) + 0.5) * 0x1.0p-53;
  return u;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::normal() {
  // Box-Muller without the usual cached sine half: a spare drawn during a
  // rejection loop (the gamma sampler) is conditioned on its partner's
  // rejection through the shared radius, and reusing it later biases
  // whatever consumes it. One clean draw per call.
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double RngStream::normal(double mean, double sd) {
  return mean + sd * normal();
}

double RngStream::exponential(double rate) { return -std::log(uniform()) / rate; }

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw DomainError("RngStream::gamma: shape and rate must be > 0");
  if (shape < 1.0) {
    // boost: X ~ Ga(shape+1), X * U^{1/shape} ~ Ga(shape)
    const double g = gamma(shape + 1.0, 1.0);
    return g * std::pow(uniform(), 1.0 / shape) / rate;
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double cc = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + cc * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v / rate;
  }
}

double RngStream::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

double RngStream::inverse_gamma(double shape, double rate) {
  return 1.0 / gamma(shape, rate);
}

int RngStream::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("categorical: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("categorical: all weights zero");
  double u = uniform() * total;
  for (size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return static_cast<int>(i);
    u -= weights[i];
  }
  return static_cast<int>(weights.size()) - 1;
}

int RngStream::categorical_log(std::span<const double> log_weights) {
  const double m = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(m)) throw DomainError("categorical_log: no finite weight");
  std::vector<double> w(log_weights.size());
  for (size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - m);
  return categorical(w);
}

}  // namespace gmdep
