#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmdep/model.hpp"
#include "gmdep/partition.hpp"
#include "gmdep/peppf.hpp"
#include "gmdep/rng.hpp"

namespace gmdep {

enum class ModelFamily { gm_dirichlet, gm_stable };

struct SamplerConfig {
  ModelFamily model = ModelFamily::gm_dirichlet;
  Hyperpriors hyper;
  double s = 1.0, S = 1.0;  // inverse-gamma part of the base, kept fixed

  double z_init = 0.5;
  double c_init = 1.0;
  double sigma_init = 0.5;
  bool fix_z = false, fix_c = false, fix_sigma = false;
  bool fix_m = false, fix_tau = false;
  std::optional<double> m_init;    // default: hyper.a
  std::optional<double> tau_init;  // default: W / w (prior mean of tau^{-1} inverted)

  int z_grid_points = 100;
  int sigma_grid_points = 100;
  double mh_step_init = 0.5;  // random-walk sd on log c
  int mh_proposals = 5;       // proposals per c update
  double hyp_rel_tol = 1e-8;  // 3F2 tolerance inside full conditionals
  bool check_invariants = true;
};

struct TraceRecord {
  long iteration = 0;
  int k_x = 0, k_y = 0, k_shared = 0;
  double z = 0, family_param = 0;  // c for Dirichlet runs, sigma for stable
  double m = 0, tau = 0;
  double log_joint = 0;
};

struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> f1, f2;  // averaged over recorded sweeps
  long samples = 0;
};

// Marginal (Polya-urn) Gibbs sampler for the two-sample dependent mixture.
// One instance = one chain; run several instances with distinct seeds for
// multi-chain inference.
class GibbsSampler {
 public:
  GibbsSampler(SamplerConfig cfg, std::vector<double> sample1,
               std::vector<double> sample2, uint64_t seed);

  // burnin sweeps, then iters sweeps recording every `thin`-th.
  void run(long iters, long burnin, long thin = 1);
  void sweep();

  // individual Gibbs steps (public so tests can drive them directly)
  void reseat_observation(int sample, int index);
  // first half of a reseat: removes the observation, keeps side arrays in
  // sync, and returns the urn label it carries
  int detach_observation(int sample, int index);
  int sample_label(int block);
  void resample_labels();
  void resample_unique_values();
  void sample_z();
  void sample_c();
  void sample_sigma();
  void sample_tau_m();

  // replaces every observation by a fresh draw from its cluster kernel;
  // used by successive-conditional (Geweke-style) checks
  void regenerate_data();

  double log_joint() const;

  // state inspection
  const TwoSamplePartition& partition() const { return partition_; }
  int label_of(int block) const { return label_[block]; }
  ClusterParam theta_of(int block) const { return theta_[block]; }
  double z() const { return z_; }
  double c() const { return c_; }
  double sigma() const { return sigma_; }
  double m() const { return m_; }
  double tau() const { return tau_; }
  long iteration() const { return iteration_; }
  int k_x() const;
  int k_y() const;
  int k_shared() const;
  const std::vector<double>& data(int sample) const;
  double mh_step() const { return mh_step_; }
  long mh_rejected_numeric() const { return mh_numeric_rejects_; }

  const std::vector<TraceRecord>& trace() const { return trace_; }
  void enable_density_grid(std::vector<double> grid);
  DensityEstimate density_estimate() const;

  // Rao-Blackwellized predictive density of a hypothetical next observation
  // of the given sample, under the current state.
  std::vector<double> predictive_density(int sample,
                                         std::span<const double> xs) const;

  // Urn weights a detached observation with label `zeta` would face; the
  // trailing entry is the new-cluster weight.
  struct SeatWeights {
    std::vector<int> blocks;
    std::vector<double> log_weight;
    int zeta = 0;
  };
  SeatWeights seat_weights(int sample, double x, int zeta) const;

  // Unnormalized log full-conditional of z on the griddy-Gibbs midpoints.
  std::vector<double> z_conditional_grid() const;

  RngStream& rng() { return rng_; }

 private:
  NigBase base() const { return {m_, tau_, cfg_.s, cfg_.S}; }
  CrmFamily family() const;
  GmDependenceParams dep_params(double z) const;
  double log_state_mass(double z, double c_or_sigma) const;  // g at current labels
  double log_state_mass_for(const FrequencyData& f, const LabelAssignment& lab,
                            double z, double c_or_sigma) const;
  LabelAssignment labels_for(const FrequencyLayout& lay) const;
  std::vector<double> cluster_values(int block) const;
  void apply_remove_bookkeeping(const TwoSamplePartition::RemoveResult& rr);
  void check_label_invariants() const;
  void record();
  void accumulate_density();

  SamplerConfig cfg_;
  std::vector<double> data1_, data2_;
  TwoSamplePartition partition_;
  std::vector<int> label_;
  std::vector<ClusterParam> theta_;
  double z_ = 0.5, c_ = 1.0, sigma_ = 0.5, m_ = 0.0, tau_ = 1.0;
  long iteration_ = 0;
  RngStream rng_;

  // adaptive MH bookkeeping for c
  double mh_step_ = 0.5;
  bool mh_adapting_ = true;
  int mh_batch_accepts_ = 0, mh_batch_count_ = 0;
  long mh_numeric_rejects_ = 0;

  std::vector<TraceRecord> trace_;
  std::vector<double> density_grid_, density_acc1_, density_acc2_;
  long density_samples_ = 0;
};

}  // namespace gmdep
