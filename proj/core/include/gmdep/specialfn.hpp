#pragma once

#include <functional>
#include <limits>

#include "gmdep/errors.hpp"

namespace gmdep {

// log of the rising factorial a(a+1)...(a+n-1); n = 0 gives 0.
double log_pochhammer(double a, long n);

// Parameters of 3F2(a1,a2,a3; b1,b2; 1).
struct Hyp3F2Params {
  double a1, a2, a3;
  double b1, b2;

  // b1 + b2 - a1 - a2 - a3; the series at unit argument converges iff > 0.
  double margin() const { return b1 + b2 - a1 - a2 - a3; }
};

struct Hyp3F2Options {
  double rel_tol = 1e-10;
  long max_terms = 10'000'000;
};

// Direct summation of the series at x = 1. Terms are built from the ratio
// t_{j+1}/t_j = (a1+j)(a2+j)(a3+j) / ((b1+j)(b2+j)(1+j)) with a rescaling
// guard, so intermediate sums never overflow. Throws DomainError when a
// denominator parameter is a nonpositive integer or the margin is <= 0,
// NumericError when max_terms is exhausted before the tolerance is met.
double hyp3f2_unit(const Hyp3F2Params& p, double rel_tol,
                   long max_terms = Hyp3F2Options{}.max_terms);
double log_hyp3f2_unit(const Hyp3F2Params& p, double rel_tol,
                       long max_terms = Hyp3F2Options{}.max_terms);

// Same value as hyp3f2_unit but evaluated through a Thomae-type two-term
// relation chosen to maximize the convergence margin, with Levin-u series
// acceleration as a fallback when even the best representation is slow.
double hyp3f2_accelerated(const Hyp3F2Params& p, double rel_tol = 1e-10);
double log_hyp3f2_accelerated(const Hyp3F2Params& p, double rel_tol = 1e-10);

enum class IntegrandMode { smooth, endpoint_singular };

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_level = 12;
};

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  long evaluations = 0;
  bool converged = false;
};

// Tanh-sinh quadrature on (0,1). The two-argument overload passes the
// complement 1-x computed without cancellation, which matters for
// integrands singular at 1. Throws NumericError if the integrand returns
// a non-finite value at an interior node or the levels are exhausted far
// from tolerance.
double integrate_unit_interval(const std::function<double(double)>& f,
                               IntegrandMode mode = IntegrandMode::smooth,
                               const QuadratureOptions& opts = {});
double integrate_unit_interval(
    const std::function<double(double, double)>& f_x_xc,
    IntegrandMode mode = IntegrandMode::smooth,
    const QuadratureOptions& opts = {});
QuadratureResult integrate_unit_interval_full(
    const std::function<double(double, double)>& f_x_xc, IntegrandMode mode,
    const QuadratureOptions& opts);

// Log-space tanh-sinh on (0,1) for nonnegative integrands given as
// log f(log x, log(1-x)). Returns log of the integral. Never under- or
// overflows for power-law endpoint behavior, which is what the partition
// integrals need when exponents get close to 0.
double log_integrate_unit_interval(
    const std::function<double(double, double)>& log_f,
    const QuadratureOptions& opts = {});

// Iterated quadrature over (0,inf)^2 after mapping each axis through
// u = t/(1-t). Inner integral runs at a tighter tolerance than the outer.
double integrate_positive_quadrant(
    const std::function<double(double, double)>& f,
    const QuadratureOptions& opts = {.abs_tol = 1e-8, .rel_tol = 1e-8});

// Single-axis version of the same mapping, for (0,inf) integrals.
double integrate_positive_axis(const std::function<double(double)>& f,
                               const QuadratureOptions& opts = {});

// Log-space versions for nonnegative integrands with power-law behavior
// too wild for linear arithmetic: the integrand is supplied as
// log f(log u) (resp. log f(log u, log v)) and the log of the integral
// comes back.
double log_integrate_positive_axis(const std::function<double(double)>& log_f,
                                   const QuadratureOptions& opts = {});
double log_integrate_positive_quadrant(
    const std::function<double(double, double)>& log_f,
    const QuadratureOptions& opts = {.abs_tol = 1e-9, .rel_tol = 1e-9});

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
double log_add_exp(double a, double b);

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace gmdep
