#include "grw/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "grw/errors.hpp"
#include "grw/special_functions.hpp"

namespace grw {
namespace {

std::int64_t abs_site(std::int64_t x, const char* name) {
  if (x == 0) throw DomainError(std::string(name) + " must be nonzero");
  return x < 0 ? -x : x;
}

double checked_epsilon(double epsilon) {
  validate_epsilon(epsilon);
  return snap_epsilon(epsilon);
}

// Gamma(a)/Gamma(b); zero when b is a pole.
double gamma_ratio(double a, double b) {
  const SignedLog num = signed_log_gamma(a);
  const SignedLog den = log_recip_gamma(b);
  if (den.sign == 0) return 0.0;
  return num.sign * den.sign * std::exp(num.log_abs + den.log_abs);
}

// eps Gamma(1+eps)/Gamma(1-eps) + Gamma(1+eps+k)/Gamma(k-eps).
double bracket(double e, double k) {
  return e * gamma_ratio(1.0 + e, 1.0 - e) + gamma_ratio(1.0 + e + k, k - e);
}

// R(0|k) = (1+eps)_k/(-eps)_k for transient eps.
double transient_hit(double e, double k) {
  return std::exp(log_gamma(1.0 + e + k) - log_gamma(1.0 + e) - log_gamma(k - e) + log_gamma(-e));
}

void require_transient(double e) {
  if (!(e < -0.5)) throw DomainError("coefficient defined only for epsilon < -1/2");
}

}  // namespace

double AsymptoteLaw::evaluate(double r) const {
  const double v = variable == LawVariable::R ? r : 1.0 - r;
  if (!(v > 0.0 && v < 1.0)) throw DomainError("asymptote evaluated outside (0,1)");
  const double lambda = -std::log(v);
  const double base = prefactor * std::pow(v, -exponent);
  switch (log_factor) {
    case LogFactor::None: return base;
    case LogFactor::InverseLog: return base / lambda;
    case LogFactor::InverseSqrtLog: return base / std::sqrt(lambda);
    case LogFactor::Log: return base * lambda;
  }
  return base;
}

double coeff_A(std::int64_t x0) {
  const double h = 0.5 * static_cast<double>(abs_site(x0, "x0"));
  return digamma(0.25 + h) - digamma(0.25) + digamma(0.75 + h) - digamma(0.75);
}

double coeff_B(double epsilon, std::int64_t x0) {
  const double e = checked_epsilon(epsilon);
  const double k = static_cast<double>(abs_site(x0, "x0"));
  if (e == 0.5) throw PoleError("B has a pole at epsilon = 1/2");
  if (e <= -0.5) throw DomainError("B defined only for epsilon > -1/2");
  return std::pow(2.0, -0.5 - e) * gamma_ratio(0.5 - e, 1.5 + e) * bracket(e, k);
}

double coeff_calB(double epsilon, std::int64_t x0) {
  const double e = checked_epsilon(epsilon);
  const double k = static_cast<double>(abs_site(x0, "x0"));
  if (e <= -0.5) throw DomainError("calB defined only for epsilon > -1/2");
  return 0.5 * std::pow(2.0, 0.5 - e) * gamma_ratio(1.5 - e, 1.5 + e) * bracket(e, k);
}

double coeff_C(double epsilon, std::int64_t x0, std::int64_t xr) {
  const double e = checked_epsilon(epsilon);
  const double k0 = static_cast<double>(abs_site(x0, "x0"));
  const double kr = static_cast<double>(abs_site(xr, "xr"));
  require_transient(e);
  const double inv_rr = std::exp(log_gamma(-e + kr) - log_gamma(-e) - log_gamma(1.0 + e + kr) + log_gamma(1.0 + e));
  const double cross = std::exp(log_gamma(1.0 + e + k0) + log_gamma(kr - e) - log_gamma(1.0 + e + kr) -
                                log_gamma(k0 - e));
  return inv_rr - cross;
}

double coeff_small_c(double epsilon, std::int64_t x0, std::int64_t xr) {
  const double e = checked_epsilon(epsilon);
  const double k0 = static_cast<double>(abs_site(x0, "x0"));
  const double kr = static_cast<double>(abs_site(xr, "xr"));
  require_transient(e);
  const double r0 = transient_hit(e, k0);
  const double rr = transient_hit(e, kr);
  return std::sqrt((1.0 - r0) * (1.0 + r0)) / rr;
}

double coeff_K(double epsilon, std::int64_t xr) {
  validate_epsilon(epsilon);
  const double k = static_cast<double>(abs_site(xr, "xr"));
  return std::exp(k * std::numbers::ln2 + log_gamma(k + 1.0) + log_gamma(1.0 + epsilon) -
                  log_gamma(1.0 + epsilon + k));
}

AsymptoticCoefficients coefficients(const WalkSpec& spec) {
  spec.validate();
  const double e = snap_epsilon(spec.epsilon);
  AsymptoticCoefficients out;
  out.K = coeff_K(spec.epsilon, spec.xr);
  if (e < -0.5) {
    out.C = coeff_C(e, spec.x0, spec.xr);
    out.c = coeff_small_c(e, spec.x0, spec.xr);
  } else if (e == -0.5) {
    out.A = coeff_A(spec.x0);
  } else {
    out.calB = coeff_calB(e, spec.x0);
    if (e != 0.5) out.B = coeff_B(e, spec.x0);
  }
  return out;
}

AsymptoteLaw small_r_mean_law(const WalkSpec& spec) {
  spec.validate();
  const double e = snap_epsilon(spec.epsilon);
  const double k = static_cast<double>(abs_site(spec.x0, "x0"));
  if (e < -0.5) return {"transient", LawVariable::R, coeff_C(e, spec.x0, spec.xr), 1.0, LogFactor::None};
  if (e == -0.5) return {"null-recurrent, epsilon = -1/2", LawVariable::R, coeff_A(spec.x0), 1.0, LogFactor::InverseLog};
  if (e < 0.5) return {"null-recurrent", LawVariable::R, coeff_B(e, spec.x0), 0.5 - e, LogFactor::None};
  if (e == 0.5) return {"null-recurrent, epsilon = 1/2", LawVariable::R, 0.5 * k * k, 0.0, LogFactor::Log};
  return {"positive-recurrent", LawVariable::R, k * k / (2.0 * e - 1.0), 0.0, LogFactor::None};
}

AsymptoteLaw small_r_std_law(const WalkSpec& spec) {
  spec.validate();
  const double e = snap_epsilon(spec.epsilon);
  const double k = static_cast<double>(abs_site(spec.x0, "x0"));
  if (e < -0.5) return {"transient", LawVariable::R, coeff_small_c(e, spec.x0, spec.xr), 1.0, LogFactor::None};
  if (e == -0.5)
    return {"null-recurrent, epsilon = -1/2", LawVariable::R, std::sqrt(2.0 * coeff_A(spec.x0)), 1.0,
            LogFactor::InverseSqrtLog};
  if (e == 0.5) return {"null-recurrent, epsilon = 1/2", LawVariable::R, k, 0.5, LogFactor::None};
  const double exponent = 0.5 * (1.5 - e);
  if (e == 1.0 && k == 1.0) return {"deterministic", LawVariable::R, 0.0, exponent, LogFactor::None};
  const std::string label = e < 0.5 ? "null-recurrent" : "positive-recurrent";
  return {label, LawVariable::R, std::sqrt(2.0 * coeff_calB(e, spec.x0)), exponent, LogFactor::None};
}

AsymptoteLaw large_r_mean_law(const WalkSpec& spec) {
  spec.validate();
  const double kr = static_cast<double>(abs_site(spec.xr, "xr"));
  return {"large-r", LawVariable::OneMinusR, coeff_K(spec.epsilon, spec.xr), kr, LogFactor::None};
}

SlowlyVaryingExpansion slowly_varying_L(double epsilon, std::int64_t x0, double t) {
  const double e = checked_epsilon(epsilon);
  const double k = static_cast<double>(abs_site(x0, "x0"));
  if (e < -0.5) throw DomainError("slowly varying expansion needs epsilon >= -1/2");
  if (!(t > 1.0) || !std::isfinite(t)) throw DomainError("slowly varying expansion needs finite t > 1");
  if (e == -0.5) return {coeff_A(x0) / std::log(t), -0.5 * k * k, 1.0};
  if (e < 0.0) {
    const double b = coeff_B(e, x0);
    const double q = e * std::pow(2.0, -0.5 - e) * gamma_ratio(0.5 - e, 1.5 + e) * gamma_ratio(1.0 + e, 1.0 - e);
    return {b, -q * b, 0.5 + e};
  }
  if (e < 0.5) return {coeff_B(e, x0), -k * k / (1.0 - 2.0 * e), 0.5 - e};
  if (e == 0.5) return {0.5 * k * k * std::log(t) - epsilon_half_constant(x0).value, 0.0, 1.0};
  return {k * k / (2.0 * e - 1.0), coeff_B(e, x0), e - 0.5};
}

EstimatedConstant epsilon_half_constant(std::int64_t x0, const EvalPolicy& policy) {
  const double k = static_cast<double>(abs_site(x0, "x0"));
  const auto probe = [&](double t) {
    const double gap = 1.0 - hitting_gf(0.5, x0, 1.0 - 1.0 / t, policy);
    return 0.5 * k * k * std::log(t) - gap * t;
  };
  const double fine = probe(kHalfConstantProbe);
  const double coarse = probe(0.1 * kHalfConstantProbe);
  return {fine, std::fabs(fine - coarse)};
}

std::string to_string(MomentCase c) {
  switch (c) {
    case MomentCase::DivergentMean: return "divergent-mean";
    case MomentCase::FiniteMeanInfiniteVariance: return "finite-mean-infinite-variance";
    case MomentCase::FiniteVariance: return "finite-variance";
  }
  return "unknown";
}

MomentCase moment_case(double epsilon, std::int64_t x0) {
  const double e = checked_epsilon(epsilon);
  const std::int64_t k = abs_site(x0, "x0");
  if (e < 0.5) throw DomainError("moment case defined only for epsilon in [1/2, 1]");
  if (e == 0.5) return MomentCase::DivergentMean;
  if (e == 1.0 && k == 1) return MomentCase::FiniteVariance;
  return MomentCase::FiniteMeanInfiniteVariance;
}

}  // namespace grw
