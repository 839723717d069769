#include "gmdep/peppf.hpp"

#include <bit>
#include <cmath>

#include "gmdep/specialfn.hpp"

namespace gmdep {

std::vector<int> FrequencyData::qstar() const {
  std::vector<int> out(q1.size());
  for (size_t r = 0; r < q1.size(); ++r) out[r] = q1[r] + q2[r];
  return out;
}

void FrequencyData::validate() const {
  if (q1.size() != q2.size())
    throw DomainError("FrequencyData: q1/q2 length mismatch");
  int t1 = 0, t2 = 0;
  for (int v : n1_sizes) {
    if (v < 1) throw DomainError("FrequencyData: nonpositive frequency");
    t1 += v;
  }
  for (int v : n2_sizes) {
    if (v < 1) throw DomainError("FrequencyData: nonpositive frequency");
    t2 += v;
  }
  for (size_t r = 0; r < q1.size(); ++r) {
    if (q1[r] < 1 || q2[r] < 1)
      throw DomainError("FrequencyData: shared cluster needs both sides >= 1");
    t1 += q1[r];
    t2 += q2[r];
  }
  if (t1 != n1 || t2 != n2)
    throw DomainError("FrequencyData: frequencies do not sum to sample sizes");
}

FrequencyData frequencies_of(const TwoSamplePartition& p) {
  return frequency_layout(p).freq;
}

FrequencyLayout frequency_layout(const TwoSamplePartition& p) {
  FrequencyLayout lay;
  lay.freq.n1 = p.n1();
  lay.freq.n2 = p.n2();
  for (int b = 0; b < p.num_blocks(); ++b) {
    const int c1 = p.count1(b), c2 = p.count2(b);
    if (c1 > 0 && c2 > 0) {
      lay.freq.q1.push_back(c1);
      lay.freq.q2.push_back(c2);
      lay.shared_blocks.push_back(b);
    } else if (c1 > 0) {
      lay.freq.n1_sizes.push_back(c1);
      lay.n1_blocks.push_back(b);
    } else {
      lay.freq.n2_sizes.push_back(c2);
      lay.n2_blocks.push_back(b);
    }
  }
  return lay;
}

int LabelAssignment::ktilde1() const {
  int k = 0;
  for (int v : zeta1) k += (v == 1);
  return k;
}

int LabelAssignment::ktilde2() const {
  int k = 0;
  for (int v : zeta2) k += (v == 2);
  return k;
}

namespace {

// z^a (1-z)^b in logs with the 0^0 = 1 convention; -inf when truly zero.
double log_zpow(double z, int a, int b) {
  double out = 0.0;
  if (a > 0) {
    if (z == 0.0) return kNegInf;
    out += a * std::log(z);
  }
  if (b > 0) {
    if (z == 1.0) return kNegInf;
    out += b * std::log1p(-z);
  }
  return out;
}

void check_z(double z) {
  if (!(z >= 0.0) || !(z <= 1.0)) throw DomainError("z must lie in [0,1]");
}

// Sum of frequencies flagged 1 in a {0,1} mask given by bits of `mask`.
int masked_sum(const std::vector<int>& f, unsigned mask) {
  int s = 0;
  for (size_t j = 0; j < f.size(); ++j)
    if (mask >> j & 1u) s += f[j];
  return s;
}

double log_ewens(double c, const std::vector<int>& sizes, int n) {
  double lp = sizes.size() * std::log(c) + std::lgamma(c) - std::lgamma(c + n);
  for (int v : sizes) lp += std::lgamma(static_cast<double>(v));
  return lp;
}

double log_stable_eppf_local(double sigma, const std::vector<int>& sizes,
                             int n) {
  const int k = static_cast<int>(sizes.size());
  double lp = (k - 1) * std::log(sigma) + std::lgamma(static_cast<double>(k)) -
              std::lgamma(static_cast<double>(n));
  for (int v : sizes) lp += log_pochhammer(1.0 - sigma, v - 1);
  return lp;
}

}  // namespace

double log_xi(const FrequencyData& f, double sigma) {
  double lp = 0.0;
  for (int v : f.n1_sizes) lp += log_pochhammer(1.0 - sigma, v - 1);
  for (int v : f.n2_sizes) lp += log_pochhammer(1.0 - sigma, v - 1);
  for (auto q : f.qstar()) lp += log_pochhammer(1.0 - sigma, q - 1);
  return lp;
}

double log_dirichlet_partition_integral(double c, double z, int n1, int n2,
                                        int nbar1, int nbar2, double rel_tol) {
  // assemble integer differences first; adding c to a large integer and
  // subtracting it back would absorb a small c entirely
  const double alpha = c + static_cast<double>(n2 - nbar2);
  const double beta = c + static_cast<double>(n1 - nbar1);
  Hyp3F2Params p{c * (1.0 - z) + static_cast<double>((n2 - nbar2) + (n1 - nbar1)),
                 static_cast<double>(n1), static_cast<double>(n2), alpha + n1,
                 beta + n2};
  return -log_pochhammer(alpha, n1) - log_pochhammer(beta, n2) +
         log_hyp3f2_accelerated(p, rel_tol);
}

double log_stable_partition_integral(double sigma, double z, double A,
                                     double B, int k) {
  if (!(A > 0.0) || !(B > 0.0))
    throw DomainError("log_stable_partition_integral: exponents must be > 0");
  if (z == 0.0)  // denominator is identically 1
    return std::lgamma(A) + std::lgamma(B) - std::lgamma(A + B);
  return log_integrate_unit_interval([&](double log_x, double log_xc) {
    const double excess =
        std::exp(sigma * log_x) + std::exp(sigma * log_xc) - 1.0;
    const double log_den = std::log1p(z * excess);
    return (A - 1.0) * log_x + (B - 1.0) * log_xc - k * log_den;
  });
}

namespace {

double xlogy(double a, double y) { return a == 0.0 ? 0.0 : a * std::log(y); }

// Shared engine for the two closed-form families: exact sum over the label
// vectors of the label-conditional mass.
template <typename TermFn>
double log_label_sum(const FrequencyData& f, double z, TermFn&& log_term) {
  const int k1 = f.k1(), k2 = f.k2();
  const int k = f.k();
  if (k1 + k2 > 20)
    throw DomainError("pEPPF label sum: more than 2^20 label vectors");
  double acc = kNegInf;
  for (unsigned m1 = 0; m1 < (1u << k1); ++m1) {
    const int kt1 = static_cast<int>(std::popcount(m1));
    const int nb1 = masked_sum(f.n1_sizes, m1);
    for (unsigned m2 = 0; m2 < (1u << k2); ++m2) {
      const int kt2 = static_cast<int>(std::popcount(m2));
      const int nb2 = masked_sum(f.n2_sizes, m2);
      const double lz = log_zpow(z, kt1 + kt2, k - kt1 - kt2);
      if (lz == kNegInf) continue;
      acc = log_add_exp(acc, lz + log_term(kt1, kt2, nb1, nb2));
    }
  }
  return acc;
}

}  // namespace

double log_peppf_dirichlet(double c, double z, const FrequencyData& f,
                           double rel_tol) {
  f.validate();
  check_z(z);
  if (!(c > 0.0)) throw DomainError("peppf_dirichlet: c must be > 0");
  if (f.n2 == 0) return log_ewens(c, f.n1_sizes, f.n1);
  if (f.n1 == 0) return log_ewens(c, f.n2_sizes, f.n2);
  const double base = f.k() * std::log(c) + log_xi(f, 0.0);
  const double sum = log_label_sum(f, z, [&](int, int, int nb1, int nb2) {
    return log_dirichlet_partition_integral(c, z, f.n1, f.n2, nb1, nb2,
                                            rel_tol);
  });
  return base + sum;
}

double peppf_dirichlet(double c, double z, const FrequencyData& f,
                       double rel_tol) {
  return std::exp(log_peppf_dirichlet(c, z, f, rel_tol));
}

double log_peppf_stable(double sigma, double z, const FrequencyData& f) {
  f.validate();
  check_z(z);
  if (!(sigma > 0.0) || !(sigma < 1.0))
    throw DomainError("peppf_stable: sigma must lie in (0,1)");
  if (f.n2 == 0) return log_stable_eppf_local(sigma, f.n1_sizes, f.n1);
  if (f.n1 == 0) return log_stable_eppf_local(sigma, f.n2_sizes, f.n2);
  const int k = f.k();
  const double base = (k - 1) * std::log(sigma) +
                      std::lgamma(static_cast<double>(k)) + log_xi(f, sigma) -
                      std::lgamma(static_cast<double>(f.n1)) -
                      std::lgamma(static_cast<double>(f.n2));
  const double sum = log_label_sum(f, z, [&](int kt1, int kt2, int nb1, int nb2) {
    return log_stable_partition_integral(sigma, z, f.n1 - nb1 + kt1 * sigma,
                                         f.n2 - nb2 + kt2 * sigma, k);
  });
  return base + sum;
}

double peppf_stable(double sigma, double z, const FrequencyData& f) {
  return std::exp(log_peppf_stable(sigma, z, f));
}

double log_label_conditional_density(const CrmFamily& family,
                                     const GmDependenceParams& params,
                                     const FrequencyData& f,
                                     const LabelAssignment& labels,
                                     double rel_tol) {
  f.validate();
  check_z(params.z);
  if (static_cast<int>(labels.zeta1.size()) != f.k1() ||
      static_cast<int>(labels.zeta2.size()) != f.k2())
    throw DomainError("label_conditional_density: labels do not match clusters");
  for (int v : labels.zeta1)
    if (v != 0 && v != 1) throw DomainError("zeta1 entries must be 0 or 1");
  for (int v : labels.zeta2)
    if (v != 0 && v != 2) throw DomainError("zeta2 entries must be 0 or 2");

  const double z = params.z;
  const int k = f.k();
  const int kt1 = labels.ktilde1(), kt2 = labels.ktilde2();
  int nb1 = 0, nb2 = 0;
  for (int j = 0; j < f.k1(); ++j)
    if (labels.zeta1[j] == 1) nb1 += f.n1_sizes[j];
  for (int j = 0; j < f.k2(); ++j)
    if (labels.zeta2[j] == 2) nb2 += f.n2_sizes[j];

  const double lz = log_zpow(z, kt1 + kt2, k - kt1 - kt2);
  if (lz == kNegInf) return kNegInf;

  if (family.kind == CrmFamily::Kind::gamma) {
    const double c = params.c;
    if (f.n2 == 0)
      return log_ewens(c, f.n1_sizes, f.n1) +
             log_zpow(z, kt1, f.k1() - kt1);
    if (f.n1 == 0)
      return log_ewens(c, f.n2_sizes, f.n2) +
             log_zpow(z, kt2, f.k2() - kt2);
    return k * std::log(c) + log_xi(f, 0.0) + lz +
           log_dirichlet_partition_integral(c, z, f.n1, f.n2, nb1, nb2,
                                            rel_tol);
  }
  const double sigma = family.sigma;
  if (!(sigma > 0.0) || !(sigma < 1.0))
    throw DomainError("label_conditional_density: sigma must lie in (0,1)");
  if (f.n2 == 0)
    return log_stable_eppf_local(sigma, f.n1_sizes, f.n1) +
           log_zpow(z, kt1, f.k1() - kt1);
  if (f.n1 == 0)
    return log_stable_eppf_local(sigma, f.n2_sizes, f.n2) +
           log_zpow(z, kt2, f.k2() - kt2);
  return (k - 1) * std::log(sigma) + std::lgamma(static_cast<double>(k)) +
         log_xi(f, sigma) - std::lgamma(static_cast<double>(f.n1)) -
         std::lgamma(static_cast<double>(f.n2)) + lz +
         log_stable_partition_integral(sigma, z, f.n1 - nb1 + kt1 * sigma,
                                       f.n2 - nb2 + kt2 * sigma, k);
}

double label_conditional_density(const CrmFamily& family,
                                 const GmDependenceParams& params,
                                 const FrequencyData& f,
                                 const LabelAssignment& labels,
                                 double rel_tol) {
  return std::exp(
      log_label_conditional_density(family, params, f, labels, rel_tol));
}

// ---------------------------------------------------------------------------
// General double-integral form. The label sum factorizes cluster by cluster
// into two-point mixtures z tau(own axis) + (1-z) tau(u+v), so the integrand
// costs O(k) per evaluation instead of O(2^k).

double log_peppf_general(const CrmFamily& family,
                         const GmDependenceParams& params,
                         const FrequencyData& f, int cap) {
  f.validate();
  const double c = params.c, z = params.z;
  if (f.n1 + f.n2 > cap)
    throw DomainError("peppf_general: n1+n2 exceeds the oracle cap");

  // per-cluster two-point mixture log( z tau_q(own) + (1-z) tau_q(u+v) )
  auto log_mix = [&](int q, double log_own, double log_uv) {
    double acc = kNegInf;
    if (z > 0.0) acc = std::log(z) + log_tau_log(family, q, log_own);
    if (z < 1.0)
      acc = log_add_exp(acc, std::log1p(-z) + log_tau_log(family, q, log_uv));
    return acc;
  };

  if (f.n1 + f.n2 == 0)
    throw DomainError("peppf_general: empty dataset");
  if (f.n2 == 0 || f.n1 == 0) {
    const int n = (f.n2 == 0) ? f.n1 : f.n2;
    const auto& sizes = (f.n2 == 0) ? f.n1_sizes : f.n2_sizes;
    const double log_integral = log_integrate_positive_axis([&](double log_u) {
      double lg = (n - 1) * log_u - c * psi_log(family, log_u);
      for (int q : sizes) lg += log_tau_log(family, q, log_u);
      return lg;
    });
    return f.k() * std::log(c) - std::lgamma(static_cast<double>(n)) +
           log_integral;
  }

  if (z == 1.0 && f.k0() > 0) return kNegInf;  // shared clusters impossible
  const auto qs = f.qstar();
  const double log_integral = log_integrate_positive_quadrant(
      [&](double log_u, double log_v) {
        const double log_uv = log_add_exp(log_u, log_v);
        double lg = (f.n1 - 1) * log_u + (f.n2 - 1) * log_v -
                    c * h_z_log(family, z, log_u, log_v);
        for (int q : f.n1_sizes) lg += log_mix(q, log_u, log_uv);
        for (int q : f.n2_sizes) lg += log_mix(q, log_v, log_uv);
        for (int q : qs) lg += std::log1p(-z) + log_tau_log(family, q, log_uv);
        return lg;
      },
      {.abs_tol = 1e-12, .rel_tol = 1e-10});
  return f.k() * std::log(c) - std::lgamma(static_cast<double>(f.n1)) -
         std::lgamma(static_cast<double>(f.n2)) + log_integral;
}

double peppf_general(const CrmFamily& family, const GmDependenceParams& params,
                     const FrequencyData& f, int cap) {
  if (params.z == 1.0 && f.k0() > 0) return 0.0;
  return std::exp(log_peppf_general(family, params, f, cap));
}

// ---------------------------------------------------------------------------
// Dependence functionals.

double dependence_factor(const CrmFamily& family,
                         const GmDependenceParams& params) {
  const double c = params.c, z = params.z;
  check_z(z);
  if (family.kind == CrmFamily::Kind::gamma) {
    Hyp3F2Params p{c - c * z + 2.0, 1.0, 1.0, c + 2.0, c + 2.0};
    return c / (c + 1.0) * hyp3f2_accelerated(p, 1e-10);
  }
  const double sigma = family.sigma;
  const double integral = integrate_unit_interval(
      [&](double w, double wc) {
        const double den =
            1.0 + z * std::pow(1.0 - std::pow(w, 1.0 / sigma), sigma) - z * wc;
        return std::pow(w, 1.0 / sigma - 1.0) / den;
      },
      IntegrandMode::endpoint_singular);
  return integral / sigma;
}

double mixed_moment(const CrmFamily& family, const GmDependenceParams& params,
                    double p0A, double p0B, double p0AB) {
  check_z(params.z);
  if (!(p0A >= 0 && p0A <= 1) || !(p0B >= 0 && p0B <= 1))
    throw DomainError("mixed_moment: masses must lie in [0,1]");
  if (p0AB < -1e-15 || p0AB > std::min(p0A, p0B) + 1e-15)
    throw DomainError("mixed_moment: P0(A and B) must lie in [0, min(P0A,P0B)]");
  const double indep = p0A * p0B;
  if (params.z == 1.0 || p0AB == indep) return indep;
  const double c = params.c, z = params.z;
  const double log_d = log_integrate_positive_quadrant(
      [&](double log_u, double log_v) {
        return -c * h_z_log(family, z, log_u, log_v) +
               log_tau_log(family, 2, log_add_exp(log_u, log_v));
      },
      {.abs_tol = 1e-12, .rel_tol = 1e-10});
  return indep + (p0AB - indep) * c * (1.0 - z) * std::exp(log_d);
}

double correlation(const CrmFamily& family, const GmDependenceParams& params,
                   double p0A, double p0B, double p0AB) {
  if (!(p0A > 0 && p0A < 1) || !(p0B > 0 && p0B < 1))
    throw DomainError("correlation: needs nondegenerate sets");
  const double num = (1.0 - params.z) * (p0AB - p0A * p0B);
  const double den =
      std::sqrt(p0A * (1.0 - p0A)) * std::sqrt(p0B * (1.0 - p0B));
  return num / den * dependence_factor(family, params);
}

DependenceReport dependence_report(const CrmFamily& family,
                                   const GmDependenceParams& params,
                                   double p0A, double p0B, double p0AB) {
  DependenceReport rep;
  rep.i_cz = dependence_factor(family, params);
  rep.mixed_moment = mixed_moment(family, params, p0A, p0B, p0AB);
  rep.correlation = correlation(family, params, p0A, p0B, p0AB);
  return rep;
}

}  // namespace gmdep
