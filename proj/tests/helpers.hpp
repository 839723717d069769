#pragma once

#include <cmath>
#include <vector>

#include "gmdep/crm.hpp"
#include "gmdep/partition.hpp"
#include "gmdep/peppf.hpp"
#include "gmdep/specialfn.hpp"

namespace gmdep::testing {

// Plain partial summation of the 3F2(1) series, independent of the library
// evaluation path. Reports a crude remainder bound alongside the sum.
struct BruteSeriesResult {
  double sum = 1.0;
  double tail_bound = 0.0;
  long terms = 0;
};

inline BruteSeriesResult brute_hyp3f2(const Hyp3F2Params& p, long max_terms) {
  BruteSeriesResult r;
  double term = 1.0;
  long j = 0;
  for (; j < max_terms; ++j) {
    term *= ((p.a1 + j) * (p.a2 + j) * (p.a3 + j)) /
            ((p.b1 + j) * (p.b2 + j) * (1.0 + j));
    if (term == 0.0) break;
    r.sum += term;
    if (std::abs(term) < 1e-16 * std::abs(r.sum) && j > 4) break;
  }
  r.terms = j;
  r.tail_bound = std::abs(term) * (j + 2) / std::max(p.margin(), 1e-3);
  return r;
}

// Numeric moment kernel straight from its defining integral; assembled in
// log space so extreme quadrature nodes cannot overflow s^q.
inline double tau_by_quadrature(const CrmFamily& fam, int q, double u) {
  return integrate_positive_axis(
      [&](double s) {
        double log_rho;
        if (fam.kind == CrmFamily::Kind::gamma)
          log_rho = -s - std::log(s);
        else
          log_rho = std::log(fam.sigma) - (1.0 + fam.sigma) * std::log(s) -
                    std::lgamma(1.0 - fam.sigma);
        return std::exp(q * std::log(s) - u * s + log_rho);
      },
      {.abs_tol = 1e-12, .rel_tol = 1e-11});
}

// All frequency vectors of partitions of (n1, n2), canonical order.
inline std::vector<FrequencyData> all_frequency_data(int n1, int n2) {
  std::vector<FrequencyData> out;
  enumerate_partitions(n1, n2, [&](const TwoSamplePartition& p) {
    out.push_back(frequencies_of(p));
  });
  return out;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Weight-pair log density evaluated from (w, 1-w) pairs; the complements
// must be supplied exactly because 1 - w1 w2 cancels catastrophically near
// the (1,1) corner where the density has its ridge.
inline double olkin_liu_log_density_c(double c, double z, double w1,
                                      double w1c, double w2, double w2c) {
  const double cz = c * z;
  const double norm =
      std::lgamma(c + cz) - 2.0 * std::lgamma(cz) - std::lgamma(c - cz);
  const double one_minus_prod = w1c + w1 * w2c;  // 1 - w1 w2, cancellation-free
  return norm + (cz - 1.0) * (std::log(w1) + std::log(w2)) +
         (c - 1.0) * (std::log(w1c) + std::log(w2c)) -
         (c + cz) * std::log(one_minus_prod);
}

// int g(w1,w2) f(w1,w2) dw1 dw2 against the Olkin-Liu weight-pair density f.
// The density has a ridge at the (1,1) corner that plain (0,1)^2 quadrature
// cannot resolve, so integrate over logistic coordinates w = sigmoid(eta)
// with everything assembled in log space. The integration region is the
// quadrant {w1 > a1, w2 > a2}; a = 0 spans the whole axis.
template <typename Fn>
double olkin_liu_mass_above(double c, double z, double a1, double a2, Fn&& g) {
  const double cz = c * z;
  const double norm = std::lgamma(c + cz) - 2.0 * std::lgamma(cz) -
                      std::lgamma(c - cz);
  auto log_sig = [](double eta) {
    return eta >= 0 ? -std::log1p(std::exp(-eta))
                    : eta - std::log1p(std::exp(eta));
  };
  auto term = [&](double e1, double e2) {
    const double lw1 = log_sig(e1), lw1c = log_sig(-e1);
    const double lw2 = log_sig(e2), lw2c = log_sig(-e2);
    const double log_one_minus_prod = log_add_exp(lw1c, lw1 + lw2c);
    const double lf = norm + (cz - 1.0) * (lw1 + lw2) +
                      (c - 1.0) * (lw1c + lw2c) -
                      (c + cz) * log_one_minus_prod;
    // jacobian of w = sigmoid(eta) is w (1-w)
    return g(std::exp(lw1), std::exp(lw2)) *
           std::exp(lf + lw1 + lw1c + lw2 + lw2c);
  };
  QuadratureOptions in{.abs_tol = 1e-12, .rel_tol = 1e-9};
  QuadratureOptions out{.abs_tol = 1e-11, .rel_tol = 1e-8};
  auto logit = [](double w) { return std::log(w) - std::log1p(-w); };
  auto line = [&](double lo, auto&& h, const QuadratureOptions& opts) {
    if (lo == -std::numeric_limits<double>::infinity()) {
      return integrate_positive_axis([&](double u) { return h(u); }, opts) +
             integrate_positive_axis([&](double u) { return h(-u); }, opts);
    }
    return integrate_positive_axis([&](double u) { return h(lo + u); }, opts);
  };
  const double lo1 =
      a1 > 0 ? logit(a1) : -std::numeric_limits<double>::infinity();
  const double lo2 =
      a2 > 0 ? logit(a2) : -std::numeric_limits<double>::infinity();
  return line(
      lo1,
      [&](double e1) {
        return line(lo2, [&](double e2) { return term(e1, e2); }, in);
      },
      out);
}

template <typename Fn>
double olkin_liu_mass(double c, double z, Fn&& g) {
  return olkin_liu_mass_above(c, z, 0.0, 0.0, std::forward<Fn>(g));
}

}  // namespace gmdep::testing
