#pragma once

#include <vector>

#include "gmdep/crm.hpp"
#include "gmdep/partition.hpp"

namespace gmdep {

// Cluster frequencies of a two-sample partition. Shared clusters enter all
// mass functions only through the componentwise sums q1[r] + q2[r].
struct FrequencyData {
  int n1 = 0, n2 = 0;
  std::vector<int> n1_sizes;  // unshared sample-1 cluster sizes
  std::vector<int> n2_sizes;  // unshared sample-2 cluster sizes
  std::vector<int> q1, q2;    // per-shared-cluster contributions, both >= 1

  int k1() const { return static_cast<int>(n1_sizes.size()); }
  int k2() const { return static_cast<int>(n2_sizes.size()); }
  int k0() const { return static_cast<int>(q1.size()); }
  int k() const { return k1() + k2() + k0(); }
  std::vector<int> qstar() const;
  void validate() const;
};

FrequencyData frequencies_of(const TwoSamplePartition& p);

// Same, plus which partition block each frequency entry came from.
struct FrequencyLayout {
  FrequencyData freq;
  std::vector<int> n1_blocks, n2_blocks, shared_blocks;
};
FrequencyLayout frequency_layout(const TwoSamplePartition& p);

// Latent urn labels for the unshared clusters, aligned with
// FrequencyData::n1_sizes / n2_sizes. Shared clusters are implicitly 0.
struct LabelAssignment {
  std::vector<int> zeta1;  // values in {0,1}
  std::vector<int> zeta2;  // values in {0,2}

  int ktilde1() const;
  int ktilde2() const;
};

// --- partition mass functions (log scale primary, linear convenience) ------

// Dirichlet family closed form, summed exactly over the 2^{k1+k2} label
// vectors. n2 == 0 or n1 == 0 reduce to the Ewens EPPF.
double log_peppf_dirichlet(double c, double z, const FrequencyData& f,
                           double rel_tol = 1e-10);
double peppf_dirichlet(double c, double z, const FrequencyData& f,
                       double rel_tol = 1e-10);

// Normalized sigma-stable family; one-dimensional integrals, no total-mass
// parameter. n2 == 0 or n1 == 0 reduce to the stable EPPF.
double log_peppf_stable(double sigma, double z, const FrequencyData& f);
double peppf_stable(double sigma, double z, const FrequencyData& f);

// Oracle-grade direct evaluation of the general double-integral form; the
// label sum is folded into per-cluster two-point mixtures inside the
// integrand. Guarded to n1+n2 <= cap.
double log_peppf_general(const CrmFamily& family,
                         const GmDependenceParams& params,
                         const FrequencyData& f, int cap = 12);
double peppf_general(const CrmFamily& family, const GmDependenceParams& params,
                     const FrequencyData& f, int cap = 12);

// Joint mass of (partition, labels): the kernel-free factor g. Summing over
// all label vectors returns the pEPPF. For the Dirichlet family params.c is
// the total mass; for the stable family params.c is ignored.
double log_label_conditional_density(const CrmFamily& family,
                                     const GmDependenceParams& params,
                                     const FrequencyData& f,
                                     const LabelAssignment& labels,
                                     double rel_tol = 1e-10);
double label_conditional_density(const CrmFamily& family,
                                 const GmDependenceParams& params,
                                 const FrequencyData& f,
                                 const LabelAssignment& labels,
                                 double rel_tol = 1e-10);

// --- building blocks shared with the sampler -------------------------------

// log of 3F2(alpha-cz+n1-nbar1, n1, n2; alpha+n1, beta+n2; 1)
//         / ((alpha)_{n1} (beta)_{n2}),
// alpha = c+n2-nbar2, beta = c+n1-nbar1: the label-conditional integral of
// the gamma family up to cluster-local factors. Requires n1, n2 >= 1.
double log_dirichlet_partition_integral(double c, double z, int n1, int n2,
                                        int nbar1, int nbar2,
                                        double rel_tol = 1e-10);

// log of int_0^1 w^{A-1} (1-w)^{B-1} [1-z+z w^sigma+z(1-w)^sigma]^{-k} dw,
// the stable-family label-conditional integral. Endpoint-singular safe for
// any A, B > 0.
double log_stable_partition_integral(double sigma, double z, double A,
                                     double B, int k);

// log xi_sigma: product of (1-sigma)-Pochhammer factors over all cluster
// frequencies; sigma = 0 gives the factorial product of the Dirichlet case.
double log_xi(const FrequencyData& f, double sigma);

// --- dependence functionals (Prop. 1 machinery) -----------------------------

// I(c,z): gamma family via the 3F2 closed form, stable family via a
// one-dimensional integral. Correlation between the two random measures on
// a common set equals (1-z) * I.
double dependence_factor(const CrmFamily& family,
                         const GmDependenceParams& params);

// E[p1(A) p2(B)] for base-measure masses p0A, p0B, p0AB = P0(A cap B);
// the double integral is evaluated by quadrature for either family.
double mixed_moment(const CrmFamily& family, const GmDependenceParams& params,
                    double p0A, double p0B, double p0AB);

// Corr(p1(A), p2(B)); requires nondegenerate A and B.
double correlation(const CrmFamily& family, const GmDependenceParams& params,
                   double p0A, double p0B, double p0AB);

struct DependenceReport {
  double correlation = 0;   // at the given sets (defaults: A = B, mass 1/2)
  double i_cz = 0;
  double mixed_moment = 0;
};

DependenceReport dependence_report(const CrmFamily& family,
                                   const GmDependenceParams& params,
                                   double p0A = 0.5, double p0B = 0.5,
                                   double p0AB = 0.5);

}  // namespace gmdep
