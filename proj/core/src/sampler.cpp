#include "gmdep/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "gmdep/specialfn.hpp"

namespace gmdep {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;
}

GibbsSampler::GibbsSampler(SamplerConfig cfg, std::vector<double> sample1,
                           std::vector<double> sample2, uint64_t seed)
    : cfg_(cfg),
      data1_(std::move(sample1)),
      data2_(std::move(sample2)),
      partition_(static_cast<int>(data1_.size()),
                 static_cast<int>(data2_.size())),
      rng_(seed) {
  cfg_.hyper.validate();
  if (data1_.empty() && data2_.empty())
    throw DomainError("GibbsSampler: no observations");
  if (!(cfg_.s > 0) || !(cfg_.S > 0))
    throw DomainError("GibbsSampler: s, S must be > 0");
  z_ = cfg_.z_init;
  if (!(z_ >= 0) || !(z_ <= 1)) throw DomainError("GibbsSampler: bad z_init");
  if (!cfg_.fix_z && !(z_ > 0 && z_ < 1))
    throw DomainError("GibbsSampler: random z needs z_init in (0,1)");
  c_ = cfg_.c_init;
  if (!(c_ > 0)) throw DomainError("GibbsSampler: bad c_init");
  sigma_ = cfg_.sigma_init;
  if (!(sigma_ > 0 && sigma_ < 1))
    throw DomainError("GibbsSampler: bad sigma_init");
  m_ = cfg_.m_init.value_or(cfg_.hyper.a);
  tau_ = cfg_.tau_init.value_or(cfg_.hyper.W / cfg_.hyper.w);
  mh_step_ = cfg_.mh_step_init;

  // start from one cluster per nonempty sample, idiosyncratic labels
  // whenever z allows them
  if (!data1_.empty()) {
    const int b = partition_.insert_item(1, 0, TwoSamplePartition::kNewBlock);
    for (int i = 1; i < partition_.n1(); ++i) partition_.insert_item(1, i, b);
    label_.push_back(z_ > 0 ? 1 : 0);
    theta_.push_back(posterior_cluster_draw(data1_, base(), rng_));
  }
  if (!data2_.empty()) {
    const int b = partition_.insert_item(2, 0, TwoSamplePartition::kNewBlock);
    for (int j = 1; j < partition_.n2(); ++j) partition_.insert_item(2, j, b);
    label_.push_back(z_ > 0 ? 2 : 0);
    theta_.push_back(posterior_cluster_draw(data2_, base(), rng_));
  }
}

CrmFamily GibbsSampler::family() const {
  return cfg_.model == ModelFamily::gm_dirichlet ? CrmFamily::Gamma()
                                                 : CrmFamily::Stable(sigma_);
}

GmDependenceParams GibbsSampler::dep_params(double z) const {
  GmDependenceParams p;
  p.c = c_;
  p.z = z;
  return p;
}

const std::vector<double>& GibbsSampler::data(int sample) const {
  return sample == 1 ? data1_ : data2_;
}

int GibbsSampler::k_x() const {
  int k = 0;
  for (int b = 0; b < partition_.num_blocks(); ++b) k += partition_.count1(b) > 0;
  return k;
}

int GibbsSampler::k_y() const {
  int k = 0;
  for (int b = 0; b < partition_.num_blocks(); ++b) k += partition_.count2(b) > 0;
  return k;
}

int GibbsSampler::k_shared() const {
  int k = 0;
  for (int b = 0; b < partition_.num_blocks(); ++b) k += partition_.is_shared(b);
  return k;
}

LabelAssignment GibbsSampler::labels_for(const FrequencyLayout& lay) const {
  LabelAssignment lab;
  lab.zeta1.reserve(lay.n1_blocks.size());
  lab.zeta2.reserve(lay.n2_blocks.size());
  for (int b : lay.n1_blocks) lab.zeta1.push_back(label_[b]);
  for (int b : lay.n2_blocks) lab.zeta2.push_back(label_[b]);
  return lab;
}

double GibbsSampler::log_state_mass_for(const FrequencyData& f,
                                        const LabelAssignment& lab, double z,
                                        double c_or_sigma) const {
  if (cfg_.model == ModelFamily::gm_dirichlet) {
    GmDependenceParams p;
    p.c = c_or_sigma;
    p.z = z;
    return log_label_conditional_density(CrmFamily::Gamma(), p, f, lab,
                                         cfg_.hyp_rel_tol);
  }
  GmDependenceParams p;
  p.c = 1.0;  // unused by the stable closed form
  p.z = z;
  return log_label_conditional_density(CrmFamily::Stable(c_or_sigma), p, f,
                                       lab, cfg_.hyp_rel_tol);
}

double GibbsSampler::log_state_mass(double z, double c_or_sigma) const {
  const FrequencyLayout lay = frequency_layout(partition_);
  return log_state_mass_for(lay.freq, labels_for(lay), z, c_or_sigma);
}

std::vector<double> GibbsSampler::cluster_values(int block) const {
  std::vector<double> xs;
  const auto& blk = partition_.block(block);
  xs.reserve(blk.members1.size() + blk.members2.size());
  for (int i : blk.members1) xs.push_back(data1_[i]);
  for (int j : blk.members2) xs.push_back(data2_[j]);
  return xs;
}

void GibbsSampler::apply_remove_bookkeeping(
    const TwoSamplePartition::RemoveResult& rr) {
  if (!rr.block_removed) return;
  if (rr.moved_block >= 0) {
    label_[rr.block] = label_[rr.moved_block];
    theta_[rr.block] = theta_[rr.moved_block];
  }
  label_.pop_back();
  theta_.pop_back();
}

GibbsSampler::SeatWeights GibbsSampler::seat_weights(int sample, double x,
                                                     int zeta) const {
  SeatWeights sw;
  sw.zeta = zeta;
  const bool stable = cfg_.model == ModelFamily::gm_stable;
  for (int b = 0; b < partition_.num_blocks(); ++b) {
    if (label_[b] != zeta) continue;
    sw.blocks.push_back(b);
    const double size = partition_.block_size(b);
    const double lw = stable ? std::log(size - sigma_) : std::log(size);
    sw.log_weight.push_back(lw + log_kernel_density(x, theta_[b]));
  }
  // new-cluster weight
  const double log_marg = log_marginal_density(x, base());
  double lw0;
  if (sw.blocks.empty() && stable) {
    // no cluster left in this urn: opening one is the only move
    lw0 = 0.0;
  } else {
    const double zfac = (zeta == 0) ? std::log1p(-z_) : std::log(z_);
    lw0 = stable ? std::log(static_cast<double>(sw.blocks.size())) +
                       std::log(sigma_) + zfac + log_marg
                 : std::log(c_) + zfac + log_marg;
  }
  sw.log_weight.push_back(lw0);
  return sw;
}

int GibbsSampler::detach_observation(int sample, int index) {
  const int old_block = partition_.block_of(sample, index);
  const int zeta = label_[old_block];
  apply_remove_bookkeeping(partition_.remove_item(sample, index));
  return zeta;
}

void GibbsSampler::reseat_observation(int sample, int index) {
  const double x = (sample == 1) ? data1_[index] : data2_[index];
  const int zeta = detach_observation(sample, index);
  const SeatWeights sw = seat_weights(sample, x, zeta);
  const int pick = rng_.categorical_log(sw.log_weight);
  if (pick < static_cast<int>(sw.blocks.size())) {
    partition_.insert_item(sample, index, sw.blocks[pick]);
  } else {
    partition_.insert_item(sample, index, TwoSamplePartition::kNewBlock);
    label_.push_back(zeta);
    const double xs[1] = {x};
    theta_.push_back(posterior_cluster_draw(xs, base(), rng_));
  }
}

int GibbsSampler::sample_label(int block) {
  if (partition_.is_shared(block))
    throw DomainError("sample_label: shared clusters keep label 0");
  const int own = partition_.is_sample1_only(block) ? 1 : 2;
  const FrequencyLayout lay = frequency_layout(partition_);
  LabelAssignment lab = labels_for(lay);

  auto eval_with = [&](int value) {
    if (own == 1) {
      const auto pos = std::find(lay.n1_blocks.begin(), lay.n1_blocks.end(),
                                 block) - lay.n1_blocks.begin();
      lab.zeta1[pos] = value;
    } else {
      const auto pos = std::find(lay.n2_blocks.begin(), lay.n2_blocks.end(),
                                 block) - lay.n2_blocks.begin();
      lab.zeta2[pos] = value;
    }
    const double par = cfg_.model == ModelFamily::gm_dirichlet ? c_ : sigma_;
    return log_state_mass_for(lay.freq, lab, z_, par);
  };

  const double lw[2] = {eval_with(0), eval_with(own)};
  const int pick = rng_.categorical_log(lw);
  label_[block] = (pick == 0) ? 0 : own;
  return label_[block];
}

void GibbsSampler::resample_labels() {
  for (int b = 0; b < partition_.num_blocks(); ++b) {
    if (!partition_.is_shared(b)) sample_label(b);
  }
}

void GibbsSampler::resample_unique_values() {
  for (int b = 0; b < partition_.num_blocks(); ++b) {
    theta_[b] = posterior_cluster_draw(cluster_values(b), base(), rng_);
  }
}

std::vector<double> GibbsSampler::z_conditional_grid() const {
  const int G = cfg_.z_grid_points;
  const FrequencyLayout lay = frequency_layout(partition_);
  const LabelAssignment lab = labels_for(lay);
  const double par = cfg_.model == ModelFamily::gm_dirichlet ? c_ : sigma_;
  std::vector<double> lw(G);
  for (int g = 0; g < G; ++g) {
    const double zg = (g + 0.5) / G;
    lw[g] = log_state_mass_for(lay.freq, lab, zg, par);
  }
  return lw;
}

void GibbsSampler::sample_z() {
  const int G = cfg_.z_grid_points;
  const std::vector<double> lw = z_conditional_grid();
  const double m = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(m))
    throw NumericError("sample_z: full conditional vanished on the whole grid");
  const int cell = rng_.categorical_log(lw);
  z_ = (cell + rng_.uniform()) / G;
}

void GibbsSampler::sample_c() {
  const FrequencyLayout lay = frequency_layout(partition_);
  const LabelAssignment lab = labels_for(lay);
  auto log_target = [&](double c) {
    return (cfg_.hyper.a0 - 1.0) * std::log(c) - cfg_.hyper.b0 * c +
           log_state_mass_for(lay.freq, lab, z_, c);
  };
  double cur = log_target(c_);
  for (int rep = 0; rep < cfg_.mh_proposals; ++rep) {
    const double proposal = c_ * std::exp(rng_.normal(0.0, mh_step_));
    bool accept = false;
    if (std::isfinite(proposal) && proposal > 0.0) {
      try {
        const double prop = log_target(proposal);
        const double log_ratio = prop - cur + std::log(proposal) - std::log(c_);
        accept = std::log(rng_.uniform()) < log_ratio;
        if (accept) cur = prop;
      } catch (const NumericError&) {
        ++mh_numeric_rejects_;  // reject the move, keep the chain alive
      } catch (const DomainError&) {
        ++mh_numeric_rejects_;
      }
    }
    if (accept) c_ = proposal;
    if (mh_adapting_) {
      ++mh_batch_count_;
      mh_batch_accepts_ += accept;
      if (mh_batch_count_ == 50) {
        const double rate = mh_batch_accepts_ / 50.0;
        if (rate > 0.45) mh_step_ *= 1.15;
        if (rate < 0.25) mh_step_ /= 1.15;
        mh_step_ = std::clamp(mh_step_, 1e-3, 8.0);
        mh_batch_count_ = mh_batch_accepts_ = 0;
      }
    }
  }
}

void GibbsSampler::sample_sigma() {
  const int G = cfg_.sigma_grid_points;
  const FrequencyLayout lay = frequency_layout(partition_);
  const LabelAssignment lab = labels_for(lay);
  std::vector<double> lw(G);
  for (int g = 0; g < G; ++g) {
    const double sg = (g + 0.5) / G;
    lw[g] = log_state_mass_for(lay.freq, lab, z_, sg);
  }
  const double m = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(m))
    throw NumericError("sample_sigma: full conditional vanished on the grid");
  const int cell = rng_.categorical_log(lw);
  sigma_ = (cell + rng_.uniform()) / G;
}

void GibbsSampler::sample_tau_m() {
  const int k = partition_.num_blocks();
  if (k == 0) return;
  const auto& hy = cfg_.hyper;
  if (!cfg_.fix_tau) {
    double wprime = 0.0;
    for (const ClusterParam& th : theta_)
      wprime += (th.mean - m_) * (th.mean - m_) / th.var;
    tau_ = rng_.inverse_gamma(0.5 * (hy.w + k), 0.5 * (hy.W + wprime));
  }
  if (!cfg_.fix_m) {
    double prec = 1.0 / hy.A, r = hy.a / hy.A;
    for (const ClusterParam& th : theta_) {
      prec += 1.0 / (tau_ * th.var);
      r += th.mean / (tau_ * th.var);
    }
    const double T = 1.0 / prec;
    m_ = rng_.normal(r * T, std::sqrt(T));
  }
}

void GibbsSampler::sweep() {
  for (int i = 0; i < partition_.n1(); ++i) reseat_observation(1, i);
  for (int j = 0; j < partition_.n2(); ++j) reseat_observation(2, j);
  resample_labels();
  resample_unique_values();
  if (!cfg_.fix_z) sample_z();
  if (cfg_.model == ModelFamily::gm_dirichlet) {
    if (!cfg_.fix_c) sample_c();
  } else {
    if (!cfg_.fix_sigma) sample_sigma();
  }
  sample_tau_m();
  ++iteration_;
  if (cfg_.check_invariants) {
    partition_.check_invariants();
    check_label_invariants();
  }
}

void GibbsSampler::check_label_invariants() const {
  if (static_cast<int>(label_.size()) != partition_.num_blocks() ||
      label_.size() != theta_.size())
    throw NumericError("sampler invariant: side arrays out of sync");
  for (int b = 0; b < partition_.num_blocks(); ++b) {
    const int l = label_[b];
    if (partition_.is_shared(b) && l != 0)
      throw NumericError("sampler invariant: shared cluster with nonzero label");
    if (partition_.is_sample1_only(b) && l != 0 && l != 1)
      throw NumericError("sampler invariant: bad sample-1 label");
    if (partition_.is_sample2_only(b) && l != 0 && l != 2)
      throw NumericError("sampler invariant: bad sample-2 label");
    if (!(theta_[b].var > 0))
      throw NumericError("sampler invariant: nonpositive cluster variance");
  }
}

void GibbsSampler::regenerate_data() {
  for (int i = 0; i < partition_.n1(); ++i) {
    const ClusterParam& th = theta_[partition_.block_of(1, i)];
    data1_[i] = rng_.normal(th.mean, std::sqrt(th.var));
  }
  for (int j = 0; j < partition_.n2(); ++j) {
    const ClusterParam& th = theta_[partition_.block_of(2, j)];
    data2_[j] = rng_.normal(th.mean, std::sqrt(th.var));
  }
}

double GibbsSampler::log_joint() const {
  const double par = cfg_.model == ModelFamily::gm_dirichlet ? c_ : sigma_;
  double lp = log_state_mass(z_, par);
  const NigBase b = base();
  for (int blk = 0; blk < partition_.num_blocks(); ++blk) {
    const ClusterParam& th = theta_[blk];
    lp += b.s * std::log(b.S) - std::lgamma(b.s) -
          (b.s + 1.0) * std::log(th.var) - b.S / th.var;
    lp += -0.5 * (kLogTwoPi + std::log(b.tau * th.var) +
                  (th.mean - b.m) * (th.mean - b.m) / (b.tau * th.var));
    for (double x : cluster_values(blk)) lp += log_kernel_density(x, th);
  }
  const auto& hy = cfg_.hyper;
  lp += -(0.5 * hy.w + 1.0) * std::log(tau_) - 0.5 * hy.W / tau_;
  lp += -0.5 * (m_ - hy.a) * (m_ - hy.a) / hy.A;
  if (cfg_.model == ModelFamily::gm_dirichlet)
    lp += (hy.a0 - 1.0) * std::log(c_) - hy.b0 * c_;
  return lp;
}

void GibbsSampler::record() {
  TraceRecord rec;
  rec.iteration = iteration_;
  rec.k_x = k_x();
  rec.k_y = k_y();
  rec.k_shared = k_shared();
  rec.z = z_;
  rec.family_param = cfg_.model == ModelFamily::gm_dirichlet ? c_ : sigma_;
  rec.m = m_;
  rec.tau = tau_;
  rec.log_joint = log_joint();
  trace_.push_back(rec);
}

void GibbsSampler::run(long iters, long burnin, long thin) {
  if (burnin < 0 || iters <= 0 || thin < 1)
    throw DomainError("GibbsSampler::run: need iters > 0, burnin >= 0, thin >= 1");
  trace_.reserve(trace_.size() + iters / thin + 1);
  mh_adapting_ = true;
  for (long t = 0; t < burnin; ++t) sweep();
  mh_adapting_ = false;
  for (long t = 0; t < iters; ++t) {
    sweep();
    if (t % thin == 0) {
      record();
      accumulate_density();
    }
  }
}

void GibbsSampler::enable_density_grid(std::vector<double> grid) {
  density_grid_ = std::move(grid);
  density_acc1_.assign(density_grid_.size(), 0.0);
  density_acc2_.assign(density_grid_.size(), 0.0);
  density_samples_ = 0;
}

void GibbsSampler::accumulate_density() {
  if (density_grid_.empty()) return;
  if (partition_.n1() > 0) {
    const auto f1 = predictive_density(1, density_grid_);
    for (size_t i = 0; i < f1.size(); ++i) density_acc1_[i] += f1[i];
  }
  if (partition_.n2() > 0) {
    const auto f2 = predictive_density(2, density_grid_);
    for (size_t i = 0; i < f2.size(); ++i) density_acc2_[i] += f2[i];
  }
  ++density_samples_;
}

DensityEstimate GibbsSampler::density_estimate() const {
  DensityEstimate est;
  est.grid = density_grid_;
  est.samples = density_samples_;
  if (density_samples_ == 0) {
    if (!density_grid_.empty())
      throw NumericError("density_estimate: no recorded iterations");
    return est;
  }
  est.f1.resize(density_grid_.size());
  est.f2.resize(density_grid_.size());
  for (size_t i = 0; i < density_grid_.size(); ++i) {
    est.f1[i] = density_acc1_[i] / density_samples_;
    est.f2[i] = density_acc2_[i] / density_samples_;
  }
  return est;
}

// Rao-Blackwellized one-step predictive: joint seat-and-label weights of a
// hypothetical (n_i + 1)-th observation, computed as ratios of the
// label-conditional partition mass; mixture components are the seated
// cluster kernels plus the prior predictive for a fresh cluster.
std::vector<double> GibbsSampler::predictive_density(
    int sample, std::span<const double> xs) const {
  if ((sample == 1 ? partition_.n1() : partition_.n2()) == 0)
    throw DomainError("predictive_density: empty sample");
  const FrequencyLayout lay = frequency_layout(partition_);
  const LabelAssignment lab = labels_for(lay);
  const double par = cfg_.model == ModelFamily::gm_dirichlet ? c_ : sigma_;
  const double log_cur = log_state_mass_for(lay.freq, lab, z_, par);
  const int own = (sample == 1) ? 1 : 2;

  std::vector<double> log_w;
  std::vector<int> seat_block;  // -1 for "new cluster"

  auto push = [&](const FrequencyData& f, const LabelAssignment& l, int block) {
    const double lg = log_state_mass_for(f, l, z_, par);
    if (lg == kNegInf) return;
    log_w.push_back(lg - log_cur);
    seat_block.push_back(block);
  };

  auto bump_n = [&](FrequencyData f) {
    (sample == 1 ? f.n1 : f.n2) += 1;
    return f;
  };

  // join an existing block (any block whose label admits this sample)
  for (int b = 0; b < partition_.num_blocks(); ++b) {
    const int l = label_[b];
    if (l != 0 && l != own) continue;
    FrequencyData f = bump_n(lay.freq);
    LabelAssignment la = lab;
    if (partition_.is_shared(b)) {
      const auto pos = std::find(lay.shared_blocks.begin(),
                                 lay.shared_blocks.end(), b) -
                       lay.shared_blocks.begin();
      (sample == 1 ? f.q1 : f.q2)[pos] += 1;
    } else if ((sample == 1) == partition_.is_sample1_only(b)) {
      // same-sample unshared block
      auto& blocks = (sample == 1) ? lay.n1_blocks : lay.n2_blocks;
      const auto pos =
          std::find(blocks.begin(), blocks.end(), b) - blocks.begin();
      (sample == 1 ? f.n1_sizes : f.n2_sizes)[pos] += 1;
    } else {
      // label-0 block of the other sample: joining makes it shared
      auto& blocks = (sample == 1) ? lay.n2_blocks : lay.n1_blocks;
      const auto pos =
          std::find(blocks.begin(), blocks.end(), b) - blocks.begin();
      auto& sizes = (sample == 1) ? f.n2_sizes : f.n1_sizes;
      const int other = sizes[pos];
      sizes.erase(sizes.begin() + pos);
      auto& zetas = (sample == 1) ? la.zeta2 : la.zeta1;
      zetas.erase(zetas.begin() + pos);
      f.q1.push_back(sample == 1 ? 1 : other);
      f.q2.push_back(sample == 1 ? other : 1);
    }
    push(f, la, b);
  }
  // open a new cluster under either label
  for (int zeta : {0, own}) {
    FrequencyData f = bump_n(lay.freq);
    LabelAssignment la = lab;
    (sample == 1 ? f.n1_sizes : f.n2_sizes).push_back(1);
    (sample == 1 ? la.zeta1 : la.zeta2).push_back(zeta);
    push(f, la, -1);
  }

  const double lw_max = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  std::vector<double> w(log_w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_w[i] - lw_max);
    total += w[i];
  }

  std::vector<double> out(xs.size(), 0.0);
  const NigBase b0 = base();
  for (size_t s = 0; s < w.size(); ++s) {
    const double weight = w[s] / total;
    if (weight == 0.0) continue;
    if (seat_block[s] >= 0) {
      const ClusterParam& th = theta_[seat_block[s]];
      for (size_t i = 0; i < xs.size(); ++i)
        out[i] += weight * kernel_density(xs[i], th);
    } else {
      for (size_t i = 0; i < xs.size(); ++i)
        out[i] += weight * marginal_density(xs[i], b0);
    }
  }
  return out;
}

}  // namespace gmdep
