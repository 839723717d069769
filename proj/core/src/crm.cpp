#include "gmdep/crm.hpp"

#include <cmath>
#include <limits>

#include "gmdep/specialfn.hpp"

namespace gmdep {

CrmFamily CrmFamily::Stable(double sigma) {
  if (!(sigma > 0.0) || !(sigma < 1.0))
    throw DomainError("CrmFamily::Stable: sigma must lie strictly in (0,1)");
  return {Kind::stable, sigma};
}

GmDependenceParams::GmDependenceParams(double c_, double z_) : c(c_), z(z_) {
  if (!(c > 0.0)) throw DomainError("GmDependenceParams: c must be > 0");
  if (!(z >= 0.0) || !(z <= 1.0))
    throw DomainError("GmDependenceParams: z must lie in [0,1]");
}

double psi(const CrmFamily& family, double u) {
  if (!(u >= 0.0)) throw DomainError("psi: requires u >= 0");
  if (family.kind == CrmFamily::Kind::gamma) return std::log1p(u);
  return std::pow(u, family.sigma);
}

double log_tau(const CrmFamily& family, int q, double u) {
  if (q < 1) throw DomainError("tau: requires q >= 1");
  if (family.kind == CrmFamily::Kind::gamma) {
    if (!(u >= 0.0)) throw DomainError("tau: requires u >= 0");
    return std::lgamma(static_cast<double>(q)) - q * std::log1p(u);
  }
  if (!(u > 0.0)) throw DomainError("tau: stable family requires u > 0");
  const double s = family.sigma;
  return std::log(s) + log_pochhammer(1.0 - s, q - 1) + (s - q) * std::log(u);
}

double tau(const CrmFamily& family, int q, double u) {
  return std::exp(log_tau(family, q, u));
}

double h_z(const CrmFamily& family, const GmDependenceParams& params, double u,
           double v) {
  const double z = params.z;
  if (z == 0.0) return psi(family, u + v);
  if (z == 1.0) return psi(family, u) + psi(family, v);
  return z * (psi(family, u) + psi(family, v)) + (1.0 - z) * psi(family, u + v);
}

double psi_log(const CrmFamily& family, double log_u) {
  if (family.kind == CrmFamily::Kind::gamma)
    return log_add_exp(0.0, log_u);  // log(1 + u)
  const double e = family.sigma * log_u;
  return e > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(e);
}

double log_tau_log(const CrmFamily& family, int q, double log_u) {
  if (q < 1) throw DomainError("tau: requires q >= 1");
  if (family.kind == CrmFamily::Kind::gamma)
    return std::lgamma(static_cast<double>(q)) -
           q * log_add_exp(0.0, log_u);
  const double s = family.sigma;
  return std::log(s) + log_pochhammer(1.0 - s, q - 1) + (s - q) * log_u;
}

double h_z_log(const CrmFamily& family, double z, double log_u, double log_v) {
  const double log_uv = log_add_exp(log_u, log_v);
  if (z == 0.0) return psi_log(family, log_uv);
  if (z == 1.0) return psi_log(family, log_u) + psi_log(family, log_v);
  return z * (psi_log(family, log_u) + psi_log(family, log_v)) +
         (1.0 - z) * psi_log(family, log_uv);
}

}  // namespace gmdep
