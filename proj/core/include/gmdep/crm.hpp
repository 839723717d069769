#pragma once

#include "gmdep/errors.hpp"

namespace gmdep {

// Marginal CRM family: gamma (rho(s) = exp(-s)/s) or sigma-stable
// (rho(s) = sigma * s^{-1-sigma} / Gamma(1-sigma), sigma in (0,1)).
struct CrmFamily {
  enum class Kind { gamma, stable };

  Kind kind = Kind::gamma;
  double sigma = 0.5;  // meaningful only for Kind::stable

  static CrmFamily Gamma() { return {Kind::gamma, 0.0}; }
  static CrmFamily Stable(double sigma);

  bool is_stable() const { return kind == Kind::stable; }
};

// Parameters of the dependent pair: total mass c > 0 and idiosyncrasy
// weight z in [0,1]. z = 1 gives independent marginals, z = 0 identical ones.
struct GmDependenceParams {
  double c = 1.0;
  double z = 0.5;

  GmDependenceParams() = default;
  GmDependenceParams(double c_, double z_);
};

// Laplace exponent at a constant: log(1+u) for gamma, u^sigma for stable.
double psi(const CrmFamily& family, double u);

// Moment kernel tau_q(u) = int s^q exp(-u s) rho(s) ds, q >= 1.
// Gamma: Gamma(q) (1+u)^{-q}; stable: sigma (1-sigma)_{q-1} u^{sigma-q}.
double tau(const CrmFamily& family, int q, double u);
double log_tau(const CrmFamily& family, int q, double u);

// Joint Laplace exponent shape: z (psi(u) + psi(v)) + (1-z) psi(u+v).
// The exponent of the pair at constants (u,v) is c * h_z(u,v).
double h_z(const CrmFamily& family, const GmDependenceParams& params, double u,
           double v);

// Log-argument variants, usable across the entire double range of log u;
// the quadrature engines hand them log-space nodes.
double psi_log(const CrmFamily& family, double log_u);
double log_tau_log(const CrmFamily& family, int q, double log_u);
double h_z_log(const CrmFamily& family, double z, double log_u, double log_v);

}  // namespace gmdep
