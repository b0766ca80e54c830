#include "grw/hypergeom.hpp"

#include <quadmath.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "grw/errors.hpp"
#include "grw/special_functions.hpp"

namespace grw {
namespace {

using quad = __float128;

constexpr double kDoubleUlp = std::numeric_limits<double>::epsilon();
const quad kQuadUlp = FLT128_EPSILON;
const quad kQuadTol = 1e-32;
const quad kQuadEulerGamma = strtoflt128("0.5772156649015328606065120900824024310", nullptr);

double rabs(double x) { return std::fabs(x); }
quad rabs(quad x) { return fabsq(x); }
double rlog(double x) { return std::log(x); }
quad rlog(quad x) { return logq(x); }
double rexp(double x) { return std::exp(x); }
quad rexp(quad x) { return expq(x); }
double rdigamma(double x) { return digamma_any<double>(x); }

quad rdigamma(quad x) {
  if (x < quad(0.5)) {
    const quad pi = M_PIq;
    return rdigamma(quad(1) - x) - pi / tanq(pi * x);
  }
  quad acc = 0;
  while (x < quad(60)) {
    acc -= quad(1) / x;
    x += 1;
  }
  // -sum_{k=1}^{10} B_2k / (2k x^2k)
  static const quad c[] = {quad(-1) / 12,        quad(1) / 120,       quad(-1) / 252,
                           quad(1) / 240,        quad(-1) / 132,      quad(691) / 32760,
                           quad(-1) / 12,        quad(3617) / 8160,   quad(-43867) / 14364,
                           quad(174611) / 6600};
  const quad inv2 = quad(1) / (x * x);
  quad tail = 0;
  for (int i = 9; i >= 0; --i) tail = inv2 * (c[i] + tail);
  return acc + logq(x) - quad(0.5) / x + tail;
}

// log|Gamma(x)| with sign; sign 0 flags a pole.
double rlgamma(double x, int* sign) {
  if (x <= 0 && std::floor(x) == x) {
    *sign = 0;
    return 0.0;
  }
  return ::lgamma_r(x, sign);
}
quad rlgamma(quad x, int* sign) {
  if (x <= 0 && floorq(x) == x) {
    *sign = 0;
    return 0;
  }
  *sign = 1;
  if (x < 0 && static_cast<long long>(floorq(x)) % 2 != 0) *sign = -1;
  return lgammaq(x);
}

void check_args(const HypergeomParams& p, const char* who) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || !std::isfinite(p.t))
    throw DomainError(std::string(who) + ": non-finite parameter");
  if (!(p.t >= 0.0 && p.t < 1.0)) throw DomainError(std::string(who) + ": t must lie in [0,1)");
  if (is_nonpositive_integer(p.c)) throw DomainError(std::string(who) + ": c is a nonpositive integer");
}

// Value plus a first-order estimate of its relative rounding error.
template <typename Real>
struct Evaluated {
  Real value;
  Real rel_error;
};

template <typename Real>
Real series_sum(Real a, Real b, Real c, Real t, Real tol, std::int64_t max_terms, Real* abs_sum = nullptr) {
  Real term = 1;
  Real sum = 1;
  Real mag = 1;
  // The tail after a term of size T is about T/(1-t) once the ratio has settled near t.
  const Real stop = tol * (1 - rabs(t));
  int small = 0;
  for (std::int64_t n = 0; n < max_terms; ++n) {
    const Real rn = static_cast<Real>(n);
    term *= (a + rn) * (b + rn) / ((c + rn) * (rn + 1)) * t;
    sum += term;
    mag += rabs(term);
    if (rabs(term) <= stop * rabs(sum)) {
      if (++small >= 3) {
        if (abs_sum) *abs_sum = mag;
        return sum;
      }
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("2F1 series: max_terms reached");
}

// Gamma(c)Gamma(s)/(Gamma(c-a)Gamma(c-b)) F(a,b;1-s;u) + u^s Gamma(c)Gamma(-s)/(Gamma(a)Gamma(b)) F(c-a,c-b;1+s;u)
template <typename Real>
Evaluated<Real> transform_sum(Real a, Real b, Real c, Real t, Real tol, Real ulp, std::int64_t max_terms) {
  const Real s = c - a - b;
  const Real u = 1 - t;
  int sc, ss, sms, sca, scb, sa, sb;
  const Real lc = rlgamma(c, &sc);
  const Real ls = rlgamma(s, &ss);
  const Real lms = rlgamma(-s, &sms);
  const Real lca = rlgamma(c - a, &sca);
  const Real lcb = rlgamma(c - b, &scb);
  const Real la = rlgamma(a, &sa);
  const Real lb = rlgamma(b, &sb);

  Real total = 0;
  Real err = 0;
  if (sca != 0 && scb != 0) {
    const Real le = lc + ls - lca - lcb;
    const Real coef = sc * ss * sca * scb * rexp(le);
    Real mag;
    total += coef * series_sum<Real>(a, b, 1 - s, u, tol, max_terms, &mag);
    err += rabs(coef) * mag * (8 + rabs(lc) + rabs(ls) + rabs(lca) + rabs(lcb));
  }
  if (sa != 0 && sb != 0) {
    const Real le = lc + lms - la - lb + s * rlog(u);
    const Real coef = sc * sms * sa * sb * rexp(le);
    Real mag;
    total += coef * series_sum<Real>(c - a, c - b, 1 + s, u, tol, max_terms, &mag);
    err += rabs(coef) * mag * (8 + rabs(lc) + rabs(lms) + rabs(la) + rabs(lb) + rabs(s * rlog(u)));
  }
  return {total, ulp * err / rabs(total)};
}

template <typename Real>
Real gamma_ratio_log(Real num, Real den1, Real den2, int* sign) {
  int s0, s1, s2;
  const Real l0 = rlgamma(num, &s0);
  const Real l1 = rlgamma(den1, &s1);
  const Real l2 = rlgamma(den2, &s2);
  if (s0 == 0) throw PoleError("2F1 log formula: Gamma pole in prefactor");
  *sign = s0 * s1 * s2;
  return l0 - l1 - l2;
}

template <typename Real>
Evaluated<Real> log_equal_sum(Real a, Real b, Real t, Real tol, Real ulp, Real euler, std::int64_t max_terms) {
  const Real u = 1 - t;
  const Real lu = rlog(u);
  Real psi_a = rdigamma(a);
  Real psi_b = rdigamma(b);
  Real psi_n1 = -euler;
  Real term = 1;
  Real sum = 0;
  Real mag = 0;
  int small = 0;
  for (std::int64_t n = 0; n < max_terms; ++n) {
    const Real dn = static_cast<Real>(n);
    if (n > 0) {
      term *= (a + dn - 1) * (b + dn - 1) / (dn * dn) * u;
      psi_a += 1 / (a + dn - 1);
      psi_b += 1 / (b + dn - 1);
      psi_n1 += 1 / dn;
    }
    const Real bracket = 2 * psi_n1 - psi_a - psi_b - lu;
    const Real contrib = term * bracket;
    sum += contrib;
    mag += rabs(term) * (2 * rabs(psi_n1) + rabs(psi_a) + rabs(psi_b) + rabs(lu));
    if (rabs(contrib) <= tol * rabs(sum)) {
      if (++small >= 3) {
        int sg;
        const Real lp = gamma_ratio_log<Real>(a + b, a, b, &sg);
        return {sg * rexp(lp) * sum, ulp * (mag / rabs(sum) * 4 + 4 + rabs(lp))};
      }
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("gauss_2f1_log_equal: max_terms reached");
}

template <typename Real>
Evaluated<Real> log_minus_one_sum(Real a, Real b, Real t, Real tol, Real ulp, Real euler, std::int64_t max_terms) {
  const Real u = 1 - t;
  const Real lu = rlog(u);
  int sg;
  const Real lp = gamma_ratio_log<Real>(a + b - 1, a, b, &sg);
  const Real pref = sg * rexp(lp) / u;
  const Real ab = (a - 1) * (b - 1);
  // (a-1)(b-1) = 0 leaves 2F1 = Gamma(a+b-1)/(Gamma(a)Gamma(b)) / u, which is exact.
  if (ab == 0) return {pref, ulp * (4 + rabs(lp))};
  Real psi_a = rdigamma(a);
  Real psi_b = rdigamma(b);
  Real psi_n1 = -euler;
  Real psi_n2 = 1 - euler;
  Real term = u;  // (a)_n (b)_n / (n! (n+1)!) u^{n+1}
  Real sum = 0;
  Real mag = 0;
  int small = 0;
  for (std::int64_t n = 0; n < max_terms; ++n) {
    const Real dn = static_cast<Real>(n);
    if (n > 0) {
      term *= (a + dn - 1) * (b + dn - 1) / (dn * (dn + 1)) * u;
      psi_a += 1 / (a + dn - 1);
      psi_b += 1 / (b + dn - 1);
      psi_n1 += 1 / dn;
      psi_n2 += 1 / (dn + 1);
    }
    const Real contrib = term * (lu + psi_a + psi_b - psi_n1 - psi_n2);
    sum += contrib;
    mag += rabs(term) * (rabs(lu) + rabs(psi_a) + rabs(psi_b) + rabs(psi_n1) + rabs(psi_n2));
    if (rabs(contrib) <= tol * rabs(sum)) {
      if (++small >= 3) {
        const Real inner = 1 + ab * sum;
        return {pref * inner, ulp * ((1 + rabs(ab) * mag * 4) / rabs(inner) + 4 + rabs(lp))};
      }
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("gauss_2f1_log_minus_one: max_terms reached");
}

bool near_integer(double s, double band, int* m) {
  const double r = std::nearbyint(s);
  *m = static_cast<int>(r);
  return std::fabs(s - r) <= band;
}

// Shared fallback ladder for the t > switch formulas: accept the double result when its
// error estimate is small, else the direct series if it converges, else quad precision.
template <typename DoubleEval, typename QuadEval>
double with_fallback(const HypergeomParams& p, const EvalPolicy& policy, DoubleEval fd, QuadEval fq) {
  const Evaluated<double> d = fd();
  if (d.rel_error <= policy.cancellation_limit) return d.value;
  try {
    return series_sum<double>(p.a, p.b, p.c, p.t, policy.tol, policy.max_terms);
  } catch (const ConvergenceError&) {
  }
  return static_cast<double>(fq().value);
}

}  // namespace

double gauss_2f1_series(const HypergeomParams& p, const EvalPolicy& policy) {
  check_args(p, "gauss_2f1_series");
  if (p.t == 0.0) return 1.0;
  return series_sum<double>(p.a, p.b, p.c, p.t, policy.tol, policy.max_terms);
}

double gauss_2f1_near_one(const HypergeomParams& p, const EvalPolicy& policy) {
  check_args(p, "gauss_2f1_near_one");
  const double s = p.c - p.a - p.b;
  int m;
  if (near_integer(s, policy.log_case_band, &m))
    throw DegenerateParameterError("gauss_2f1_near_one: c-a-b = " + std::to_string(s) +
                                   " is within the log-case band of an integer");
  auto fq = [&] {
    return transform_sum<quad>(p.a, p.b, p.c, p.t, kQuadTol, kQuadUlp, policy.max_terms);
  };
  if (std::fabs(s - m) < policy.near_degenerate_band) return static_cast<double>(fq().value);
  auto fd = [&] { return transform_sum<double>(p.a, p.b, p.c, p.t, policy.tol, kDoubleUlp, policy.max_terms); };
  return with_fallback(p, policy, fd, fq);
}

double gauss_2f1_log_equal(double a, double b, double t, const EvalPolicy& policy) {
  const HypergeomParams p{a, b, a + b, t};
  check_args(p, "gauss_2f1_log_equal");
  if (t == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
    return series_sum<double>(a, b, a + b, t, policy.tol, policy.max_terms);
  auto fd = [&] {
    return log_equal_sum<double>(a, b, t, policy.tol, kDoubleUlp, std::numbers::egamma, policy.max_terms);
  };
  auto fq = [&] { return log_equal_sum<quad>(a, b, t, kQuadTol, kQuadUlp, kQuadEulerGamma, policy.max_terms); };
  return with_fallback(p, policy, fd, fq);
}

double gauss_2f1_log_minus_one(double a, double b, double t, const EvalPolicy& policy) {
  const HypergeomParams p{a, b, a + b - 1.0, t};
  check_args(p, "gauss_2f1_log_minus_one");
  if (t == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
    return series_sum<double>(a, b, a + b - 1.0, t, policy.tol, policy.max_terms);
  auto fd = [&] {
    return log_minus_one_sum<double>(a, b, t, policy.tol, kDoubleUlp, std::numbers::egamma, policy.max_terms);
  };
  auto fq = [&] {
    return log_minus_one_sum<quad>(a, b, t, kQuadTol, kQuadUlp, kQuadEulerGamma, policy.max_terms);
  };
  return with_fallback(p, policy, fd, fq);
}

double gauss_2f1(const HypergeomParams& p, const EvalPolicy& policy) {
  check_args(p, "gauss_2f1");
  if (p.t <= policy.near_one_switch || is_nonpositive_integer(p.a) || is_nonpositive_integer(p.b))
    return gauss_2f1_series(p, policy);
  const double s = p.c - p.a - p.b;
  int m;
  if (!near_integer(s, policy.log_case_band, &m)) return gauss_2f1_near_one(p, policy);
  switch (m) {
    case 0:
      return gauss_2f1_log_equal(p.a, p.b, p.t, policy);
    case -1:
      return gauss_2f1_log_minus_one(p.a, p.b, p.t, policy);
    case 1:
      // Euler: F(a,b;a+b+1;t) = (1-t) F(b+1,a+1;a+b+1;t)
      return (1.0 - p.t) * gauss_2f1_log_minus_one(p.b + 1.0, p.a + 1.0, p.t, policy);
    default:
      throw DegenerateParameterError("gauss_2f1: c-a-b = " + std::to_string(m) + " is not supported");
  }
}

double gauss_2f1_derivative(const HypergeomParams& p, const EvalPolicy& policy) {
  check_args(p, "gauss_2f1_derivative");
  const double k = p.a * p.b / p.c;
  if (k == 0.0) return 0.0;
  const HypergeomParams shifted{p.a + 1.0, p.b + 1.0, p.c + 1.0, p.t};
  if (p.t <= policy.near_one_switch) return k * gauss_2f1_series(shifted, policy);
  const double s = p.c - p.a - p.b;
  int m;
  if (near_integer(s, policy.log_case_band, &m) && m <= -1) {
    // F = u^s G with G = F(c-a,c-b;c;t), so F' = -s F/u + u^s G'.
    const double u = 1.0 - p.t;
    const double f = gauss_2f1(p, policy);
    const double ca = p.c - p.a;
    const double cb = p.c - p.b;
    const double gprime = ca * cb / p.c * gauss_2f1({ca + 1.0, cb + 1.0, p.c + 1.0, p.t}, policy);
    const double sm = static_cast<double>(m);
    return -sm * f / u + std::pow(u, sm) * gprime;
  }
  return k * gauss_2f1(shifted, policy);
}

}  // namespace grw
