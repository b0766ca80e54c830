#include "grw/gillis.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "grw/errors.hpp"
#include "grw/special_functions.hpp"

namespace grw {

void validate_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= -1.0 || epsilon > 1.0)
    throw DomainError("epsilon must lie in (-1, 1], got " + std::to_string(epsilon));
}

double snap_epsilon(double epsilon) {
  if (std::fabs(epsilon - 0.5) <= kEpsilonSnap) return 0.5;
  if (std::fabs(epsilon + 0.5) <= kEpsilonSnap) return -0.5;
  return epsilon;
}

void WalkSpec::validate() const {
  validate_epsilon(epsilon);
  if (x0 == 0) throw DomainError("x0 must be nonzero");
  if (xr == 0) throw DomainError("xr must be nonzero");
  if (target != 0) throw DomainError("only target 0 is supported");
}

WalkSpec WalkSpec::make(double epsilon, std::int64_t x0, std::int64_t xr) {
  WalkSpec s{epsilon, x0, xr, 0};
  s.validate();
  return s;
}

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Transient:
      return "Transient";
    case RegimeKind::NullRecurrent:
      return "NullRecurrent";
    case RegimeKind::PositiveRecurrent:
      return "PositiveRecurrent";
  }
  return "?";
}

double PmfPrefix::total() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

StepProbabilities transition_probability(double epsilon, std::int64_t y) {
  validate_epsilon(epsilon);
  if (y == 0) return {0.5, 0.5};
  const double b = epsilon / static_cast<double>(y);
  StepProbabilities p{0.5 * (1.0 + b), 0.5 * (1.0 - b)};
  if (p.p_minus < 0.0 || p.p_minus > 1.0 || p.p_plus < 0.0 || p.p_plus > 1.0)
    throw DomainError("transition probability outside [0,1]");
  return p;
}

RegimeClass classify_regime(double epsilon) {
  validate_epsilon(epsilon);
  const double e = snap_epsilon(epsilon);
  if (e < -0.5) return {RegimeKind::Transient, std::nullopt, std::nullopt};
  if (e == -0.5) return {RegimeKind::NullRecurrent, 0.0, std::nullopt};
  if (e < 0.5) return {RegimeKind::NullRecurrent, 0.5 + e, std::nullopt};
  if (e == 0.5) return {RegimeKind::NullRecurrent, 1.0, std::nullopt};
  return {RegimeKind::PositiveRecurrent, 1.0, e - 0.5};
}

double return_probability(double epsilon) {
  validate_epsilon(epsilon);
  const double e = snap_epsilon(epsilon);
  return e < -0.5 ? -1.0 - 1.0 / e : 1.0;
}

double mean_return_time(double epsilon) {
  validate_epsilon(epsilon);
  const double e = snap_epsilon(epsilon);
  if (e > 0.5) return 2.0 * e / (2.0 * e - 1.0);
  return std::numeric_limits<double>::infinity();
}

namespace {

void check_z(double z, const char* who) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError(std::string(who) + ": z must lie in [0,1)");
}

std::int64_t abs_site(std::int64_t x0) {
  if (x0 == std::numeric_limits<std::int64_t>::min()) throw DomainError("site out of range");
  return x0 < 0 ? -x0 : x0;
}

// log of Gamma(1+e+k) / (k! 2^k Gamma(1+e))
double log_leading(double e, std::int64_t k) {
  const double dk = static_cast<double>(k);
  return log_gamma(1.0 + e + dk) - log_gamma(dk + 1.0) - dk * std::numbers::ln2 - log_gamma(1.0 + e);
}

HypergeomParams numerator_params(double e, std::int64_t k, double t) {
  const double dk = static_cast<double>(k);
  return {0.5 * (1.0 + e + dk), 1.0 + 0.5 * (e + dk), 1.0 + dk, t};
}

HypergeomParams hit_denominator_params(double e, double t) { return {0.5 * (1.0 + e), 1.0 + 0.5 * e, 1.0, t}; }

HypergeomParams occupation_denominator_params(double e, double t) { return {0.5 * e, 0.5 + 0.5 * e, 1.0, t}; }

}  // namespace

double return_gf(double epsilon, double z, const EvalPolicy& policy) {
  validate_epsilon(epsilon);
  check_z(z, "return_gf");
  const double e = snap_epsilon(epsilon);
  if (z == 0.0) return 0.0;
  const double t = z * z;
  return 1.0 - gauss_2f1(occupation_denominator_params(e, t), policy) /
                   gauss_2f1(hit_denominator_params(e, t), policy);
}

double leading_hit_coefficient(double epsilon, std::int64_t x0) {
  validate_epsilon(epsilon);
  if (x0 == 0) throw DomainError("x0 must be nonzero");
  return std::exp(log_leading(snap_epsilon(epsilon), abs_site(x0)));
}

double hitting_gf(double epsilon, std::int64_t x0, double z, const EvalPolicy& policy) {
  return hitting_gf_point(epsilon, x0, z, policy).value;
}

GenFunPoint hitting_gf_point(double epsilon, std::int64_t x0, double z, const EvalPolicy& policy) {
  validate_epsilon(epsilon);
  check_z(z, "hitting_gf");
  if (x0 == 0) throw DomainError("x0 must be nonzero");
  const double e = snap_epsilon(epsilon);
  const std::int64_t k = abs_site(x0);
  const double lead = std::exp(log_leading(e, k));
  if (z == 0.0) return {0.0, k == 1 ? lead : 0.0};
  const double t = z * z;
  const HypergeomParams np = numerator_params(e, k, t);
  const HypergeomParams dp = hit_denominator_params(e, t);
  const double n = gauss_2f1(np, policy);
  const double d = gauss_2f1(dp, policy);
  const double value = std::pow(z, static_cast<double>(k)) * lead * n / d;
  const double dn = gauss_2f1_derivative(np, policy);
  const double dd = gauss_2f1_derivative(dp, policy);
  const double logderiv = static_cast<double>(k) / z + 2.0 * z * (dn / n - dd / d);
  return {value, value * logderiv};
}

double occupation_gf(double epsilon, std::int64_t x0, double z, const EvalPolicy& policy) {
  validate_epsilon(epsilon);
  check_z(z, "occupation_gf");
  const double e = snap_epsilon(epsilon);
  const std::int64_t k = abs_site(x0);
  if (z == 0.0) return k == 0 ? 1.0 : 0.0;
  const double t = z * z;
  const double den = gauss_2f1(occupation_denominator_params(e, t), policy);
  const double num = gauss_2f1(numerator_params(e, k, t), policy);
  return std::pow(z, static_cast<double>(k)) * std::exp(log_leading(e, k)) * num / den;
}

std::vector<double> hitting_gf_taylor(double epsilon, std::int64_t x0, std::int64_t n_max) {
  validate_epsilon(epsilon);
  if (x0 == 0) throw DomainError("x0 must be nonzero");
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  const double e = snap_epsilon(epsilon);
  const std::int64_t k = abs_site(x0);
  std::vector<double> coeffs(static_cast<std::size_t>(n_max + 1), 0.0);
  if (k > n_max) return coeffs;
  const std::int64_t jmax = (n_max - k) / 2;
  const HypergeomParams np = numerator_params(e, k, 0.0);
  const HypergeomParams dp = hit_denominator_params(e, 0.0);
  std::vector<double> nc(jmax + 1), dc(jmax + 1), q(jmax + 1);
  nc[0] = dc[0] = 1.0;
  for (std::int64_t j = 0; j < jmax; ++j) {
    const double dj = static_cast<double>(j);
    nc[j + 1] = nc[j] * (np.a + dj) * (np.b + dj) / ((np.c + dj) * (dj + 1.0));
    dc[j + 1] = dc[j] * (dp.a + dj) * (dp.b + dj) / ((dp.c + dj) * (dj + 1.0));
  }
  for (std::int64_t j = 0; j <= jmax; ++j) {
    double acc = nc[j];
    for (std::int64_t i = 1; i <= j; ++i) acc -= dc[i] * q[j - i];
    q[j] = acc;
  }
  const double lead = std::exp(log_leading(e, k));
  for (std::int64_t j = 0; j <= jmax; ++j) coeffs[k + 2 * j] = lead * q[j];
  return coeffs;
}

double hitting_gf_eps1(std::int64_t x0, double z) {
  check_z(z, "hitting_gf_eps1");
  const double k = static_cast<double>(abs_site(x0));
  const double w = std::sqrt(1.0 - z * z);
  return std::pow(z / (1.0 + w), k) * (1.0 + k * w);
}

double hitting_gf_eps0(std::int64_t x0, double z) {
  check_z(z, "hitting_gf_eps0");
  const double k = static_cast<double>(abs_site(x0));
  // (1 - sqrt(1-z^2))/z written as z/(1 + sqrt(1-z^2)) to avoid cancellation at small z
  return std::pow(z / (1.0 + std::sqrt(1.0 - z * z)), k);
}

double hit_probability(double epsilon, std::int64_t x0) {
  validate_epsilon(epsilon);
  if (x0 == 0) throw DomainError("x0 must be nonzero");
  const double e = snap_epsilon(epsilon);
  if (e >= -0.5) return 1.0;
  const std::int64_t k = abs_site(x0);
  double r = 1.0;
  for (std::int64_t i = 0; i < k; ++i) r *= (1.0 + e + static_cast<double>(i)) / (-e + static_cast<double>(i));
  return r;
}

double free_mean_fht(double epsilon, std::int64_t x0) {
  validate_epsilon(epsilon);
  if (x0 == 0) throw DomainError("x0 must be nonzero");
  const double e = snap_epsilon(epsilon);
  if (e > 0.5) {
    const double k = static_cast<double>(x0);
    return k * k / (2.0 * e - 1.0);
  }
  return std::numeric_limits<double>::infinity();
}

PmfPrefix hitting_pmf_prefix(double epsilon, std::int64_t x0, std::int64_t n_max, std::int64_t limit) {
  validate_epsilon(epsilon);
  if (x0 == 0) throw DomainError("x0 must be nonzero");
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  if (n_max > limit) throw ResourceError("n_max exceeds the configured limit of " + std::to_string(limit));
  const std::int64_t k = abs_site(x0);
  const double e = epsilon;
  // Sites 1..k+n_max on the positive half-line (mirror symmetry); index 0 is the absorbing target.
  const std::int64_t width = k + n_max + 2;
  std::vector<double> cur(width, 0.0), next(width, 0.0);
  std::vector<double> down(width, 0.0), up(width, 0.0);
  for (std::int64_t y = 1; y < width; ++y) {
    down[y] = 0.5 * (1.0 + e / static_cast<double>(y));
    up[y] = 0.5 * (1.0 - e / static_cast<double>(y));
  }
  cur[k] = 1.0;
  PmfPrefix out;
  out.n_max = n_max;
  out.probs.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  double absorbed = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const std::int64_t lo = std::max<std::int64_t>(1, k - (n - 1));
    const std::int64_t hi = k + (n - 1);
    std::fill(next.begin() + std::max<std::int64_t>(0, lo - 1), next.begin() + hi + 2, 0.0);
    for (std::int64_t y = lo; y <= hi; ++y) {
      const double m = cur[y];
      if (m == 0.0) continue;
      next[y - 1] += down[y] * m;
      next[y + 1] += up[y] * m;
    }
    out.probs[n] = next[0];
    absorbed += next[0];
    next[0] = 0.0;
    std::swap(cur, next);
  }
  out.tail_mass = 1.0 - absorbed;
  return out;
}

}  // namespace grw
