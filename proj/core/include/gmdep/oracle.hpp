#pragma once

#include <span>
#include <vector>

#include "gmdep/rng.hpp"

namespace gmdep {

// Test-grade forward simulators and closed-form references. Nothing here is
// used by the inference path; the CLI exposes the simulator for sanity runs.

struct StickBreakingTruncation {
  int level = 1000;  // atoms per component measure
};

struct DiscreteMeasure {
  std::vector<int> atoms;       // globally unique atom ids
  std::vector<double> weights;  // sums to 1
};

// A draw of the dependent Dirichlet pair via its mixture representation:
// p_i = w_i q_i + (1 - w_i) q_0 with independent stick-breaking components
// and gamma-total mixture weights. Both measures list the common atoms of
// q_0 with the same ids; atom_location[id] is an iid uniform base draw.
struct GmDirichletPair {
  DiscreteMeasure p1, p2;
  std::vector<double> atom_location;
  double w1 = 0, w2 = 0;
  double truncation_tail_bound = 0;
};

GmDirichletPair simulate_gm_dirichlet(double c, double z,
                                      const StickBreakingTruncation& trunc,
                                      RngStream& rng);

// One atom id drawn from the measure.
int sample_atom(const DiscreteMeasure& m, RngStream& rng);

// Mass the measure puts on atoms with location < threshold.
double mass_below(const DiscreteMeasure& m, std::span<const double> location,
                  double threshold);

// Joint density of the mixture weight pair (w1, w2) in the Dirichlet case
// (bivariate beta). Requires 0 < z < 1 and w1, w2 strictly inside (0,1).
double olkin_liu_density(double c, double z, double w1, double w2);
double olkin_liu_log_density(double c, double z, double w1, double w2);

// Single-sample partition references.
double log_ewens_eppf(double c, std::span<const int> sizes);
double ewens_eppf(double c, std::span<const int> sizes);
double log_stable_eppf(double sigma, std::span<const int> sizes);
double stable_eppf(double sigma, std::span<const int> sizes);

// Regularized upper incomplete gamma Q(a, x); used for chi-square p-values
// in goodness-of-fit checks.
double gamma_q(double a, double x);
double chi_square_sf(double stat, double dof);

}  // namespace gmdep
