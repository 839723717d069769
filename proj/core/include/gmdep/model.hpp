#pragma once

#include <span>

#include "gmdep/errors.hpp"
#include "gmdep/rng.hpp"

namespace gmdep {

// Normal/inverse-gamma base measure: V ~ IG(s,S), M | V ~ N(m, tau V).
struct NigBase {
  double m = 0.0;
  double tau = 1.0;
  double s = 1.0;
  double S = 1.0;

  void validate() const {
    if (!(tau > 0) || !(s > 0) || !(S > 0))
      throw DomainError("NigBase: tau, s, S must be > 0");
  }
};

// Hyperpriors on the base-measure location scale and on the total mass:
// tau^{-1} ~ Ga(w/2, W/2), m ~ N(a, A), c ~ Ga(a0, b0); z and sigma uniform.
struct Hyperpriors {
  double w = 1.0, W = 100.0;
  double a = 0.0, A = 2.0;
  double a0 = 2.0, b0 = 1.0;

  void validate() const {
    if (!(w > 0) || !(W > 0) || !(A > 0) || !(a0 > 0) || !(b0 > 0))
      throw DomainError("Hyperpriors: scale parameters must be > 0");
  }
};

// One mixture component.
struct ClusterParam {
  double mean = 0.0;
  double var = 1.0;
};

double log_kernel_density(double x, const ClusterParam& theta);
double kernel_density(double x, const ClusterParam& theta);

// Prior predictive density int h(x; theta) P0(dtheta): Student-t with 2s
// degrees of freedom, location m and scale sqrt(S(1+tau)/s).
double log_marginal_density(double x, const NigBase& base);
double marginal_density(double x, const NigBase& base);

// Conjugate posterior of (M,V) given members; empty input returns the base.
NigBase nig_posterior(const NigBase& base, std::span<const double> xs);

// Sequential one-observation update; composing it over a dataset matches
// nig_posterior exactly.
NigBase nig_posterior_one(const NigBase& base, double x);

ClusterParam draw_cluster_param(const NigBase& base, RngStream& rng);
ClusterParam posterior_cluster_draw(std::span<const double> xs,
                                    const NigBase& base, RngStream& rng);

}  // namespace gmdep
