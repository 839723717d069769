#include "gmdep/model.hpp"

#include <cmath>

namespace gmdep {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;
}

double log_kernel_density(double x, const ClusterParam& theta) {
  if (!(theta.var > 0)) throw DomainError("kernel_density: variance must be > 0");
  const double d = x - theta.mean;
  return -0.5 * (kLogTwoPi + std::log(theta.var) + d * d / theta.var);
}

double kernel_density(double x, const ClusterParam& theta) {
  return std::exp(log_kernel_density(x, theta));
}

double log_marginal_density(double x, const NigBase& base) {
  base.validate();
  const double nu = 2.0 * base.s;
  const double scale2 = base.S * (1.0 + base.tau) / base.s;
  const double t2 = (x - base.m) * (x - base.m) / scale2;
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(nu * 3.14159265358979323846 * scale2) -
         0.5 * (nu + 1.0) * std::log1p(t2 / nu);
}

double marginal_density(double x, const NigBase& base) {
  return std::exp(log_marginal_density(x, base));
}

NigBase nig_posterior(const NigBase& base, std::span<const double> xs) {
  base.validate();
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return base;
  double sum = 0.0, sumsq = 0.0;
  for (double x : xs) {
    sum += x;
    sumsq += x * x;
  }
  NigBase post;
  const double denom = 1.0 + base.tau * n;
  post.m = (base.m + base.tau * sum) / denom;
  post.tau = base.tau / denom;
  post.s = base.s + 0.5 * n;
  post.S = base.S + 0.5 * sumsq +
           (base.m * base.m * n - sum * (2.0 * base.m + base.tau * sum)) /
               (2.0 * denom);
  return post;
}

NigBase nig_posterior_one(const NigBase& base, double x) {
  return nig_posterior(base, std::span<const double>(&x, 1));
}

ClusterParam draw_cluster_param(const NigBase& base, RngStream& rng) {
  base.validate();
  ClusterParam theta;
  theta.var = rng.inverse_gamma(base.s, base.S);
  theta.mean = rng.normal(base.m, std::sqrt(base.tau * theta.var));
  return theta;
}

ClusterParam posterior_cluster_draw(std::span<const double> xs,
                                    const NigBase& base, RngStream& rng) {
  return draw_cluster_param(nig_posterior(base, xs), rng);
}

}  // namespace gmdep
