#include <doctest.h>

#include <cmath>

#include "gmdep/model.hpp"
#include "gmdep/rng.hpp"
#include "gmdep/specialfn.hpp"
#include "helpers.hpp"

using namespace gmdep;
using gmdep::testing::rel_err;

TEST_CASE("kernel density") {
  CHECK(rel_err(kernel_density(0.0, {0.0, 1.0}),
                1.0 / std::sqrt(2.0 * 3.14159265358979323846)) < 1e-14);
  // direct formula at x=0, M=1, V=4
  const double direct = std::exp(-0.5 * 1.0 / 4.0) /
                        std::sqrt(2.0 * 3.14159265358979323846 * 4.0);
  CHECK(rel_err(kernel_density(0.0, {1.0, 4.0}), direct) < 1e-14);
  CHECK_THROWS_AS(kernel_density(0.0, {0.0, -1.0}), DomainError);
}

TEST_CASE("marginal density: frozen value, symmetry, unit mass") {
  const NigBase base{0.0, 2.0, 1.5, 2.0};
  CHECK(rel_err(marginal_density(1.7, base), 0.11936104064796652224) < 1e-12);
  for (double d : {0.3, 1.1, 4.2})
    CHECK(rel_err(marginal_density(base.m + d, base),
                  marginal_density(base.m - d, base)) < 1e-13);
  const double mass =
      integrate_positive_axis([&](double u) {
        return marginal_density(base.m + u, base) +
               marginal_density(base.m - u, base);
      });
  CHECK(rel_err(mass, 1.0) < 1e-8);
}

TEST_CASE("marginal density matches the double integral against the base") {
  // integrate h(x; M, V) over M ~ N(m, tau V) and V ~ IG(s, S); V runs
  // inside (its integrand is a smooth multi-scale bump DE handles well),
  // M outside over the whole line split at the prior mean
  const NigBase base{0.5, 1.5, 2.0, 1.5};
  auto v_slice = [&](double x, double mm) {
    return integrate_positive_axis(
        [&](double v) {
          const double ig = std::exp(base.s * std::log(base.S) -
                                     std::lgamma(base.s) -
                                     (base.s + 1.0) * std::log(v) -
                                     base.S / v);
          return kernel_density(x, {mm, v}) *
                 kernel_density(mm, {base.m, base.tau * v}) * ig;
        },
        {.abs_tol = 1e-11, .rel_tol = 1e-9});
  };
  for (double x : {base.m - 2.0, base.m, base.m + 3.0}) {
    const double direct = integrate_positive_axis(
        [&](double u) {
          return v_slice(x, base.m - u) + v_slice(x, base.m + u);
        },
        {.abs_tol = 1e-9, .rel_tol = 1e-8});
    CHECK(rel_err(marginal_density(x, base), direct) < 1e-7);
  }
}

TEST_CASE("sequential conjugate updates equal the batch update") {
  RngStream rng(99);
  const NigBase base{0.7, 2.3, 1.2, 3.4};
  std::vector<double> xs;
  for (int i = 0; i < 12; ++i) xs.push_back(rng.normal(1.0, 2.0));
  const NigBase batch = nig_posterior(base, xs);
  NigBase seq = base;
  for (double x : xs) seq = nig_posterior_one(seq, x);
  CHECK(rel_err(seq.m, batch.m) < 1e-12);
  CHECK(rel_err(seq.tau, batch.tau) < 1e-12);
  CHECK(rel_err(seq.s, batch.s) < 1e-12);
  CHECK(rel_err(seq.S, batch.S) < 1e-12);
}

TEST_CASE("posterior_cluster_draw limits") {
  RngStream rng(1234);
  // flat-prior limit: one member x, tau huge: posterior mean of M -> x
  const NigBase flat{0.0, 1e6, 1.0, 1.0};
  const double x = 2.5;
  const NigBase post = nig_posterior(flat, std::vector<double>{x});
  CHECK(std::abs(post.m - x) < 1e-3);
  // n = 0 draws from the base itself
  const NigBase base{1.0, 2.0, 3.0, 4.0};
  const NigBase same = nig_posterior(base, {});
  CHECK(same.m == base.m);
  CHECK(same.tau == base.tau);
  CHECK(same.s == base.s);
  CHECK(same.S == base.S);
  // posterior draws land near a tight cluster with many members
  std::vector<double> tight;
  for (int i = 0; i < 30; ++i) tight.push_back(5.0 + 0.05 * rng.normal());
  int near = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const auto th = posterior_cluster_draw(tight, NigBase{0.0, 100.0, 1.0, 1.0},
                                           rng);
    near += std::abs(th.mean - 5.0) < 0.5;
  }
  CHECK(near >= 396);  // ~0.99 of draws
}

TEST_CASE("conjugate posterior matches grid integration on two points") {
  // two observations; compare closed-form posterior moments of (M, V)
  // against numeric normalization of g0(theta) h(x1) h(x2)
  const NigBase base{0.0, 2.0, 2.0, 2.0};
  const std::vector<double> xs{1.0, 2.0};
  const NigBase post = nig_posterior(base, xs);
  // E[M] = post.m; E[V] = post.S/(post.s - 1)
  auto unnorm = [&](double mM, double v) {
    return kernel_density(xs[0], {mM, v}) * kernel_density(xs[1], {mM, v}) *
           kernel_density(mM, {base.m, base.tau * v}) *
           std::exp(-(base.s + 1.0) * std::log(v) - base.S / v);
  };
  auto moment = [&](auto&& weight) {
    return integrate_positive_axis(
        [&](double u) {
          auto v_slice = [&](double mM) {
            return integrate_positive_axis(
                [&](double v) { return weight(mM, v) * unnorm(mM, v); },
                {.abs_tol = 5e-12, .rel_tol = 1e-8});
          };
          return v_slice(1.5 - u) + v_slice(1.5 + u);
        },
        {.abs_tol = 1e-10, .rel_tol = 1e-8});
  };
  const double z0 = moment([](double, double) { return 1.0; });
  const double em = moment([](double mM, double) { return mM; }) / z0;
  const double ev = moment([](double, double v) { return v; }) / z0;
  CHECK(std::abs(em - post.m) < 1e-4);
  CHECK(rel_err(ev, post.S / (post.s - 1.0)) < 1e-4);
}

TEST_CASE("marginal density is positive and unimodal around the location") {
  const NigBase base{2.0, 1.0, 1.0, 1.0};
  double prev = 0.0;
  for (double x = -30.0; x <= 2.0; x += 0.25) {
    const double f = marginal_density(x, base);
    CHECK(f > 0.0);
    CHECK(f >= prev);
    prev = f;
  }
}
