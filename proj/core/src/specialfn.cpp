#include "gmdep/specialfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <sstream>
#include <vector>

namespace gmdep {

namespace {

bool is_nonpositive_integer(double x) {
  return x < 0.5 && std::abs(x - std::round(x)) < 1e-9;
}

std::string params_str(const Hyp3F2Params& p) {
  std::ostringstream os;
  os << "3F2(" << p.a1 << "," << p.a2 << "," << p.a3 << ";" << p.b1 << ","
     << p.b2 << ";1)";
  return os.str();
}

void validate_params(const Hyp3F2Params& p, double rel_tol) {
  if (is_nonpositive_integer(p.b1) || is_nonpositive_integer(p.b2))
    throw DomainError("hyp3f2: denominator parameter is a nonpositive integer in " +
                      params_str(p));
  if (!(rel_tol > 0.0) || rel_tol > 1e-6)
    throw DomainError("hyp3f2: rel_tol must lie in (0, 1e-6]");
}

bool has_zero_numerator(const Hyp3F2Params& p) {
  return p.a1 == 0.0 || p.a2 == 0.0 || p.a3 == 0.0;
}

struct ScaledValue {
  double mantissa = 0;  // value = mantissa * exp(log_scale)
  double log_scale = 0;

  double value() const { return mantissa * std::exp(log_scale); }
  double log_value() const {
    if (!(mantissa > 0))
      throw NumericError("hyp3f2: log of nonpositive series value");
    return std::log(mantissa) + log_scale;
  }
};

// Numerical Recipes style Levin transformation, used with the u remainder
// estimate omega_n = (beta + n) * a_n. Tables run in long double: the
// transform cancels heavily and its achievable floor in plain double
// (~1e-11 relative) is not enough for the tolerances we promise.
class LevinU {
 public:
  double next(double sum, double omega, double beta = 1.0) {
    const int n = n_;
    numer_.push_back(0.0L);
    denom_.push_back(0.0L);
    long double term = 1.0L / (beta + n);
    denom_[n] = term / omega;
    numer_[n] = sum * denom_[n];
    if (n > 0) {
      const long double ratio = (beta + n - 1) * term;
      for (int j = 1; j <= n; ++j) {
        const long double fact = (n - j + beta) * term;
        numer_[n - j] = numer_[n - j + 1] - fact * numer_[n - j];
        denom_[n - j] = denom_[n - j + 1] - fact * denom_[n - j];
        term *= ratio;
      }
    }
    ++n_;
    if (fabsl(denom_[0]) < 1e-290L) return last_;
    return last_ = static_cast<double>(numer_[0] / denom_[0]);
  }

 private:
  std::vector<long double> numer_, denom_;
  int n_ = 0;
  double last_ = 0;
};

// Direct summation with a tail stop based on the algebraic decay rate.
// Terms of a convergent 3F2(1) fall off like j^{-(1+s)} with s the margin,
// so the remainder past term j is roughly t_j * j / s. When use_levin is
// set, the first few hundred partial sums also feed a Levin-u transform;
// its estimate is accepted once two consecutive updates agree to the
// requested tolerance. Feeding stops early because long Levin tables decay
// into cancellation noise.
ScaledValue sum_series_direct(const Hyp3F2Params& p, double rel_tol,
                              long max_terms, bool use_levin) {
  const double s = p.margin();
  double term = 1.0, sum = 1.0, comp = 0.0, log_scale = 0.0;
  LevinU levin;
  constexpr long kLevinWindow = 400;
  double levin_prev = kNegInf;
  int levin_stable = 0;
  bool decaying = false;
  if (use_levin) levin.next(sum, term);
  for (long j = 0; j < max_terms; ++j) {
    const double ratio = ((p.a1 + j) * (p.a2 + j) * (p.a3 + j)) /
                         ((p.b1 + j) * (p.b2 + j) * (1.0 + j));
    term *= ratio;
    if (term == 0.0) return {sum, log_scale};  // terminating series
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    const double tail = std::abs(term) * ((j + 2) / std::max(s, 1e-3) + 1.0);
    if (tail <= rel_tol * std::abs(sum)) return {sum, log_scale};
    if (std::abs(ratio) < 1.0) decaying = true;
    if (use_levin && log_scale == 0.0 && j < kLevinWindow) {
      const double est = levin.next(sum, (2.0 + j) * term);
      if (decaying && j >= 10 && std::isfinite(est) &&
          est >= sum * (1.0 - 1e-9)) {
        const double eps = std::abs(est - levin_prev);
        if (eps <= std::max(rel_tol, 5e-14) * std::abs(est))
          ++levin_stable;
        else
          levin_stable = 0;
        if (levin_stable >= 2) return {est, 0.0};
      }
      levin_prev = est;
    }
    if (std::abs(sum) > 1e250) {
      sum *= 1e-250;
      term *= 1e-250;
      comp *= 1e-250;
      log_scale += 250.0 * std::log(10.0);
    }
  }
  throw NumericError("hyp3f2: series cap of " + std::to_string(max_terms) +
                     " terms exhausted for " + params_str(p) +
                     " (margin = " + std::to_string(s) + ")");
}

// One Thomae two-term relation:
//   3F2(a,b,c;d,e;1) = G(e)G(s) / (G(e-c)G(s+c)) * 3F2(d-a,d-b,c;d,s+c;1)
// with s = d + e - a - b - c. Together with parameter permutations this
// generates the full 120-element orbit; we only walk representatives whose
// parameters stay nonnegative so that every series we might sum has
// positive terms.
struct ThomaeNode {
  Hyp3F2Params p;
  double log_pref;
};

std::array<int64_t, 5> node_key(const Hyp3F2Params& p) {
  std::array<double, 3> a{p.a1, p.a2, p.a3};
  std::array<double, 2> b{p.b1, p.b2};
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto q = [](double x) { return static_cast<int64_t>(std::llround(x * 1e9)); };
  return {q(a[0]), q(a[1]), q(a[2]), q(b[0]), q(b[1])};
}

ThomaeNode thomae_search(const Hyp3F2Params& p0) {
  std::vector<ThomaeNode> frontier{{p0, 0.0}};
  std::vector<std::array<int64_t, 5>> seen{node_key(p0)};
  ThomaeNode best = frontier.front();
  for (size_t i = 0; i < frontier.size() && frontier.size() < 64; ++i) {
    const ThomaeNode node = frontier[i];
    const double s = node.p.margin();
    if (s <= 0) continue;
    const std::array<double, 3> nums{node.p.a1, node.p.a2, node.p.a3};
    const std::array<double, 2> dens{node.p.b1, node.p.b2};
    for (int ci = 0; ci < 3; ++ci) {
      const double c = nums[ci];
      const double a = nums[(ci + 1) % 3];
      const double b = nums[(ci + 2) % 3];
      for (int di = 0; di < 2; ++di) {
        const double d = dens[di];
        const double e = dens[1 - di];
        if (!(e - c > 0.0) || !(s + c > 0.0)) continue;
        if (d - a < 0.0 || d - b < 0.0) continue;
        Hyp3F2Params q{d - a, d - b, c, d, s + c};
        auto key = node_key(q);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        const double pref = std::lgamma(e) + std::lgamma(s) -
                            std::lgamma(e - c) - std::lgamma(s + c);
        frontier.push_back({q, node.log_pref + pref});
        const ThomaeNode& cand = frontier.back();
        if (has_zero_numerator(cand.p)) return cand;  // exact: series == 1
        if (cand.p.margin() > best.p.margin()) best = cand;
      }
    }
  }
  return best;
}

// Sum of terms past index J via midpoint Euler-Maclaurin:
//   sum_{j>J} t_j = int_{J+1/2}^inf t(x) dx + t'(J+1/2)/24 - 7 t'''(J+1/2)/5760
// with t(x) the lgamma interpolation of the terms. Needs all parameters
// positive. The derivatives come from five-point differences; they only
// enter as tiny corrections.
// lgamma(a+x) - lgamma(b+x), stable for arbitrarily large x.
double lgamma_diff(double a, double b, double x) {
  if (x < 1e8) return std::lgamma(a + x) - std::lgamma(b + x);
  // Gamma(x+a)/Gamma(x+b) = x^{a-b} (1 + (a-b)(a+b-1)/(2x) + O(1/x^2))
  return (a - b) * std::log(x) +
         std::log1p((a - b) * (a + b - 1.0) / (2.0 * x));
}

double series_tail(const Hyp3F2Params& p, long J) {
  const double k = std::lgamma(p.b1) + std::lgamma(p.b2) - std::lgamma(p.a1) -
                   std::lgamma(p.a2) - std::lgamma(p.a3);
  auto log_term = [&](double x) {
    return k + lgamma_diff(p.a1, p.b1, x) + lgamma_diff(p.a2, p.b2, x) +
           lgamma_diff(p.a3, 1.0, x);
  };
  const double x0 = J + 0.5;
  // integrate over y = log(x/x0): terms fall like x^{-1-s}, so the
  // transformed integrand decays at rate s in y and even margins of 1e-6
  // stay inside the quadrature's reach
  const double integral = integrate_positive_axis(
      [&](double y) {
        if (y > 660.0) return 0.0;  // x overflows; the term is long dead
        const double x = x0 * std::exp(y);
        return std::exp(log_term(x) + std::log(x));
      },
      {.abs_tol = 1e-300, .rel_tol = 1e-12});
  const double f2 = std::exp(log_term(x0 + 2.0)), f1 = std::exp(log_term(x0 + 1.0)),
               g1 = std::exp(log_term(x0 - 1.0)), g2 = std::exp(log_term(x0 - 2.0));
  const double d1 = (-f2 + 8.0 * f1 - 8.0 * g1 + g2) / 12.0;
  const double d3 = (f2 - 2.0 * f1 + 2.0 * g1 - g2) / 2.0;
  return integral + d1 / 24.0 - 7.0 * d3 / 5760.0;
}

bool all_positive(const Hyp3F2Params& p) {
  return p.a1 > 0 && p.a2 > 0 && p.a3 > 0 && p.b1 > 0 && p.b2 > 0;
}

ScaledValue accelerated_scaled(const Hyp3F2Params& p, double rel_tol) {
  validate_params(p, rel_tol);
  if (has_zero_numerator(p)) return {1.0, 0.0};
  if (!(p.margin() > 0))
    throw NumericError("hyp3f2: series diverges at unit argument for " +
                       params_str(p));
  const ThomaeNode rep = thomae_search(p);
  if (has_zero_numerator(rep.p)) return {1.0, rep.log_pref};
  ScaledValue v;
  try {
    v = sum_series_direct(rep.p, rel_tol, 50'000, true);
  } catch (const NumericError&) {
    if (!all_positive(rep.p)) throw;
    // slow tail: sum a few hundred terms exactly, close with Euler-Maclaurin
    constexpr long J2 = 350, J = 400;
    double sum_to_j2 = 1.0, sum_to_j = 1.0, term = 1.0;
    for (long j = 0; j < J; ++j) {
      term *= ((rep.p.a1 + j) * (rep.p.a2 + j) * (rep.p.a3 + j)) /
              ((rep.p.b1 + j) * (rep.p.b2 + j) * (1.0 + j));
      sum_to_j += term;
      if (j < J2) sum_to_j2 = sum_to_j;
    }
    const double total = sum_to_j + series_tail(rep.p, J);
    const double total2 = sum_to_j2 + series_tail(rep.p, J2);
    if (!(std::abs(total - total2) <= 10.0 * rel_tol * std::abs(total)))
      throw NumericError("hyp3f2: tail closure failed self-check for " +
                         params_str(rep.p));
    v = ScaledValue{total, 0.0};
  }
  v.log_scale += rep.log_pref;
  return v;
}

}  // namespace

double log_pochhammer(double a, long n) {
  if (!(a > 0)) throw DomainError("log_pochhammer: requires a > 0");
  if (n < 0) throw DomainError("log_pochhammer: requires n >= 0");
  if (n == 0) return 0.0;
  return std::lgamma(a + n) - std::lgamma(a);
}

double hyp3f2_unit(const Hyp3F2Params& p, double rel_tol, long max_terms) {
  return std::exp(log_hyp3f2_unit(p, rel_tol, max_terms));
}

double log_hyp3f2_unit(const Hyp3F2Params& p, double rel_tol, long max_terms) {
  validate_params(p, rel_tol);
  if (has_zero_numerator(p)) return 0.0;
  if (!(p.margin() > 0))
    throw NumericError("hyp3f2: series diverges at unit argument for " +
                       params_str(p));
  return sum_series_direct(p, rel_tol, max_terms, false).log_value();
}

double hyp3f2_accelerated(const Hyp3F2Params& p, double rel_tol) {
  return accelerated_scaled(p, rel_tol).value();
}

double log_hyp3f2_accelerated(const Hyp3F2Params& p, double rel_tol) {
  return accelerated_scaled(p, rel_tol).log_value();
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// ---------------------------------------------------------------------------
// Tanh-sinh quadrature on (0,1): x(t) = sigmoid(pi*sinh(t)), so that
// dx/dt = pi*cosh(t)*x*(1-x). Nodes are cached per refinement level,
// ordered outward from t = 0.

namespace {

double log_sigmoid(double y) {
  return y >= 0 ? -std::log1p(std::exp(-y)) : y - std::log1p(std::exp(y));
}

constexpr double kPi = 3.14159265358979323846;

struct TsNode {
  double t;
  double x, xc, w;          // abscissa, complement, weight
  double log_x, log_xc, log_w;
};

TsNode make_node(double t) {
  const double y = kPi * std::sinh(t);
  TsNode n;
  n.t = t;
  n.log_x = log_sigmoid(y);
  n.log_xc = log_sigmoid(-y);
  n.x = std::exp(n.log_x);
  n.xc = std::exp(n.log_xc);
  const double log_cosh =
      std::abs(t) + std::log1p(std::exp(-2.0 * std::abs(t))) - std::log(2.0);
  n.log_w = std::log(kPi) + log_cosh + n.log_x + n.log_xc;
  n.w = std::exp(n.log_w);
  return n;
}

// Nodes introduced at a given level (level 0: spacing 1; level l: odd
// multiples of 2^-l), ordered by |t| and alternating sign.
std::vector<TsNode> build_level(int level, double t_max) {
  std::vector<TsNode> nodes;
  if (level == 0) {
    nodes.push_back(make_node(0.0));
    for (double t = 1.0; t <= t_max; t += 1.0) {
      nodes.push_back(make_node(t));
      nodes.push_back(make_node(-t));
    }
  } else {
    const double h = std::ldexp(1.0, -level);
    for (double t = h; t <= t_max; t += 2.0 * h) {
      nodes.push_back(make_node(t));
      nodes.push_back(make_node(-t));
    }
  }
  return nodes;
}

class TsTable {
 public:
  TsTable(int max_level, double t_max) : t_max_(t_max) {
    levels_.resize(max_level + 1);
  }
  const std::vector<TsNode>& level(int l) const {
    std::call_once(built_[l], [this, l] { levels_[l] = build_level(l, t_max_); });
    return levels_[l];
  }

 private:
  double t_max_;
  mutable std::vector<std::vector<TsNode>> levels_;
  mutable std::array<std::once_flag, 16> built_;
};

// t capped where xc^2 still stays a normal double, so coordinate maps like
// u = x/xc can square the complement without underflowing.
const TsTable& linear_table() {
  static TsTable table(13, 4.8);
  return table;
}

const TsTable& log_table() {
  static TsTable table(11, 12.0);
  return table;
}

}  // namespace

QuadratureResult integrate_unit_interval_full(
    const std::function<double(double, double)>& f, IntegrandMode mode,
    const QuadratureOptions& opts) {
  const TsTable& table = linear_table();
  const int max_level = std::min(opts.max_level, 13);
  QuadratureResult res;
  double value = 0.0;
  double prev = 0.0;
  double err = std::numeric_limits<double>::infinity();
  // outermost |t| that has contributed anything; the outward scan may only
  // stop past it, otherwise an off-center bump could be skipped
  double t_sig = 0.0;
  for (int l = 0; l <= max_level; ++l) {
    const double h = std::ldexp(1.0, -l);
    double acc = 0.0;
    int quiet = 0;
    for (const TsNode& n : table.level(l)) {
      const double fx = f(n.x, n.xc);
      if (!std::isfinite(fx)) {
        if (mode == IntegrandMode::endpoint_singular &&
            (n.x < 1e-300 || n.xc < 1e-300))
          continue;  // underflowed endpoint; weight is negligible here
        std::ostringstream os;
        os << "integrate_unit_interval: non-finite integrand at x = " << n.x;
        throw NumericError(os.str());
      }
      const double contrib = n.w * fx;
      res.evaluations++;
      acc += contrib;
      if (std::abs(contrib) <= 1e-18 * (std::abs(acc) + std::abs(value))) {
        if (l > 2 && std::abs(n.t) > t_sig + 1.0 && ++quiet >= 8) break;
      } else {
        quiet = 0;
        t_sig = std::max(t_sig, std::abs(n.t));
      }
    }
    value = (l == 0) ? h * acc : 0.5 * value + h * acc;
    if (l >= 2) {
      err = std::abs(value - prev);
      const double target =
          std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
      if (err <= target) {
        res.value = value;
        res.error_estimate = err;
        res.converged = true;
        return res;
      }
    }
    prev = value;
  }
  res.value = value;
  res.error_estimate = err;
  res.converged = false;
  return res;
}

double integrate_unit_interval(const std::function<double(double, double)>& f,
                               IntegrandMode mode,
                               const QuadratureOptions& opts) {
  QuadratureResult r = integrate_unit_interval_full(f, mode, opts);
  if (!r.converged) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value));
    if (!(r.error_estimate <= 50 * target)) {
      std::ostringstream os;
      os << "integrate_unit_interval: levels exhausted, error estimate "
         << r.error_estimate << " vs target " << target;
      throw NumericError(os.str());
    }
  }
  return r.value;
}

double integrate_unit_interval(const std::function<double(double)>& f,
                               IntegrandMode mode,
                               const QuadratureOptions& opts) {
  return integrate_unit_interval(
      [&f](double x, double) { return f(x); }, mode, opts);
}

double log_integrate_unit_interval(
    const std::function<double(double, double)>& log_f,
    const QuadratureOptions& opts) {
  const TsTable& table = log_table();
  const int max_level = std::min(opts.max_level, 11);
  double log_value = kNegInf;
  double log_prev = kNegInf;
  double t_sig = 0.0;
  double m_global = kNegInf;  // running max across levels
  for (int l = 0; l <= max_level; ++l) {
    const double log_h = -l * std::log(2.0);
    // online log-sum-exp over this level's nodes
    double m = kNegInf, s = 0.0;
    int quiet = 0;
    for (const TsNode& n : table.level(l)) {
      const double lt = n.log_w + log_f(n.log_x, n.log_xc);
      if (std::isnan(lt))
        throw NumericError("log_integrate_unit_interval: NaN integrand");
      const double ref = std::max(m, m_global);
      if (lt == kNegInf || (ref != kNegInf && lt < ref - 60.0)) {
        if (ref != kNegInf && l > 2 && std::abs(n.t) > t_sig + 1.0 &&
            ++quiet >= 8)
          break;
        continue;
      }
      quiet = 0;
      t_sig = std::max(t_sig, std::abs(n.t));
      if (lt > m) {
        s = s * std::exp(m - lt) + 1.0;
        m = lt;
      } else {
        s += std::exp(lt - m);
      }
    }
    m_global = std::max(m_global, m);
    const double log_acc = (m == kNegInf) ? kNegInf : m + std::log(s);
    log_value = (l == 0) ? log_h + log_acc
                         : log_add_exp(log_value - std::log(2.0), log_h + log_acc);
    if (l >= 2 && log_value != kNegInf) {
      const double diff = std::abs(log_value - log_prev);
      if (diff <= std::max(opts.rel_tol, 1e-14)) return log_value;
    }
    log_prev = log_value;
  }
  return log_value;  // best effort; integrands here are DE-friendly by design
}

double integrate_positive_axis(const std::function<double(double)>& f,
                               const QuadratureOptions& opts) {
  return integrate_unit_interval(
      [&f](double x, double xc) {
        const double u = x / xc;
        return f(u) / (xc * xc);
      },
      IntegrandMode::endpoint_singular, opts);
}

double log_integrate_positive_axis(const std::function<double(double)>& log_f,
                                   const QuadratureOptions& opts) {
  return log_integrate_unit_interval(
      [&log_f](double log_x, double log_xc) {
        return log_f(log_x - log_xc) - 2.0 * log_xc;
      },
      opts);
}

double log_integrate_positive_quadrant(
    const std::function<double(double, double)>& log_f,
    const QuadratureOptions& opts) {
  QuadratureOptions inner_opts = opts;
  inner_opts.rel_tol = opts.rel_tol * 0.1;
  return log_integrate_positive_axis(
      [&](double log_u) {
        return log_integrate_positive_axis(
            [&](double log_v) { return log_f(log_u, log_v); }, inner_opts);
      },
      opts);
}

double integrate_positive_quadrant(
    const std::function<double(double, double)>& f,
    const QuadratureOptions& opts) {
  QuadratureOptions inner_opts = opts;
  inner_opts.abs_tol = opts.abs_tol * 0.05;
  inner_opts.rel_tol = opts.rel_tol * 0.05;
  return integrate_unit_interval(
      [&](double x, double xc) {
        const double u = x / xc;
        const double inner = integrate_unit_interval(
            [&](double y, double yc) {
              const double v = y / yc;
              return f(u, v) / (yc * yc);
            },
            IntegrandMode::endpoint_singular, inner_opts);
        return inner / (xc * xc);
      },
      IntegrandMode::endpoint_singular, opts);
}

}  // namespace gmdep
