#include "gmdep/oracle.hpp"

#include <cmath>

#include "gmdep/errors.hpp"
#include "gmdep/specialfn.hpp"

namespace gmdep {

namespace {

// DP(mass) stick-breaking weights, truncated; leftover mass goes to the
// last atom so the weights sum to one exactly.
std::vector<double> stick_break(double mass, int level, RngStream& rng) {
  std::vector<double> w(level, 0.0);
  double remaining = 1.0;
  for (int j = 0; j + 1 < level; ++j) {
    const double v = rng.beta(1.0, mass);
    w[j] = v * remaining;
    remaining *= (1.0 - v);
  }
  w[level - 1] = remaining;
  return w;
}

}  // namespace

GmDirichletPair simulate_gm_dirichlet(double c, double z,
                                      const StickBreakingTruncation& trunc,
                                      RngStream& rng) {
  if (!(c > 0) || !(z >= 0) || !(z <= 1))
    throw DomainError("simulate_gm_dirichlet: need c > 0, z in [0,1]");
  if (trunc.level < 50)
    throw DomainError("simulate_gm_dirichlet: truncation must be >= 50");
  const int T = trunc.level;
  GmDirichletPair out;
  out.atom_location.resize(3 * T);
  for (double& loc : out.atom_location) loc = rng.uniform();

  // component totals; Ga(0, 1) is an exact point mass at zero
  const double mass_idio = c * z, mass_common = c * (1.0 - z);
  const double g1 = mass_idio > 0 ? rng.gamma(mass_idio) : 0.0;
  const double g2 = mass_idio > 0 ? rng.gamma(mass_idio) : 0.0;
  const double g0 = mass_common > 0 ? rng.gamma(mass_common) : 0.0;
  out.w1 = (g1 + g0 > 0) ? g1 / (g1 + g0) : 1.0;
  out.w2 = (g2 + g0 > 0) ? g2 / (g2 + g0) : 1.0;

  std::vector<double> q0, q1, q2;
  if (mass_common > 0) q0 = stick_break(mass_common, T, rng);
  if (mass_idio > 0) {
    q1 = stick_break(mass_idio, T, rng);
    q2 = stick_break(mass_idio, T, rng);
  }

  auto assemble = [&](double w, const std::vector<double>& own, int own_base) {
    DiscreteMeasure m;
    if (!own.empty() && w > 0) {
      for (int j = 0; j < T; ++j) {
        m.atoms.push_back(own_base + j);
        m.weights.push_back(w * own[j]);
      }
    }
    if (!q0.empty() && w < 1) {
      for (int j = 0; j < T; ++j) {
        m.atoms.push_back(j);  // common atoms: ids 0..T-1
        m.weights.push_back((1.0 - w) * q0[j]);
      }
    }
    return m;
  };
  out.p1 = assemble(out.w1, q1, T);
  out.p2 = assemble(out.w2, q2, 2 * T);

  const double r_common =
      mass_common > 0 ? std::pow(mass_common / (1.0 + mass_common), T) : 0.0;
  const double r_idio =
      mass_idio > 0 ? std::pow(mass_idio / (1.0 + mass_idio), T) : 0.0;
  out.truncation_tail_bound = std::max(r_common, r_idio);
  return out;
}

int sample_atom(const DiscreteMeasure& m, RngStream& rng) {
  return m.atoms[rng.categorical(m.weights)];
}

double mass_below(const DiscreteMeasure& m, std::span<const double> location,
                  double threshold) {
  double s = 0.0;
  for (size_t i = 0; i < m.atoms.size(); ++i)
    if (location[m.atoms[i]] < threshold) s += m.weights[i];
  return s;
}

double olkin_liu_log_density(double c, double z, double w1, double w2) {
  if (!(z > 0) || !(z < 1))
    throw DomainError("olkin_liu_density: requires 0 < z < 1");
  if (!(c > 0)) throw DomainError("olkin_liu_density: requires c > 0");
  if (!(w1 > 0) || !(w1 < 1) || !(w2 > 0) || !(w2 < 1))
    throw DomainError("olkin_liu_density: weights must lie in (0,1)");
  const double cz = c * z;
  return std::lgamma(c + cz) - 2.0 * std::lgamma(cz) - std::lgamma(c - cz) +
         (cz - 1.0) * std::log(w1 * w2) +
         (c - 1.0) * (std::log1p(-w1) + std::log1p(-w2)) -
         (c + cz) * std::log1p(-w1 * w2);
}

double olkin_liu_density(double c, double z, double w1, double w2) {
  return std::exp(olkin_liu_log_density(c, z, w1, w2));
}

double log_ewens_eppf(double c, std::span<const int> sizes) {
  if (!(c > 0)) throw DomainError("ewens_eppf: requires c > 0");
  int n = 0;
  double lp = 0.0;
  for (int v : sizes) {
    if (v < 1) throw DomainError("ewens_eppf: nonpositive frequency");
    n += v;
    lp += std::lgamma(static_cast<double>(v));
  }
  return lp + sizes.size() * std::log(c) + std::lgamma(c) - std::lgamma(c + n);
}

double ewens_eppf(double c, std::span<const int> sizes) {
  return std::exp(log_ewens_eppf(c, sizes));
}

double log_stable_eppf(double sigma, std::span<const int> sizes) {
  if (!(sigma > 0) || !(sigma < 1))
    throw DomainError("stable_eppf: requires sigma in (0,1)");
  int n = 0;
  double lp = 0.0;
  for (int v : sizes) {
    if (v < 1) throw DomainError("stable_eppf: nonpositive frequency");
    n += v;
    lp += log_pochhammer(1.0 - sigma, v - 1);
  }
  const auto k = static_cast<double>(sizes.size());
  return lp + (k - 1.0) * std::log(sigma) + std::lgamma(k) -
         std::lgamma(static_cast<double>(n));
}

double stable_eppf(double sigma, std::span<const int> sizes) {
  return std::exp(log_stable_eppf(sigma, sizes));
}

// Regularized incomplete gamma by series / continued fraction.
double gamma_q(double a, double x) {
  if (!(a > 0) || x < 0) throw DomainError("gamma_q: requires a > 0, x >= 0");
  if (x == 0) return 1.0;
  const double lga = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, Q = 1 - P
    double term = 1.0 / a, sum = term, ap = a;
    for (int i = 0; i < 10000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15)
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lga);
    }
    throw NumericError("gamma_q: series did not converge");
  }
  // Q(a,x) by Lentz continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a, cc = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    cc = b + an / cc;
    if (std::abs(cc) < tiny) cc = tiny;
    d = 1.0 / d;
    const double del = d * cc;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15)
      return h * std::exp(-x + a * std::log(x) - lga);
  }
  throw NumericError("gamma_q: continued fraction did not converge");
}

double chi_square_sf(double stat, double dof) {
  return gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace gmdep
