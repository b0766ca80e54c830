#include "grw/resetting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grw/errors.hpp"

namespace grw {

FreeProcessGf gillis_free_process(double epsilon, const EvalPolicy& policy) {
  validate_epsilon(epsilon);
  return [epsilon, policy](std::int64_t source, double z) { return hitting_gf_point(epsilon, source, z, policy); };
}

FreeProcessGf simple_walk_free_process() {
  return [](std::int64_t source, double z) -> GenFunPoint {
    if (source == 0) throw DomainError("source must be nonzero");
    const double k = std::fabs(static_cast<double>(source));
    if (z == 0.0) return {0.0, k == 1.0 ? 0.5 : 0.0};
    const double w = std::sqrt(1.0 - z * z);
    const double f = std::pow(z / (1.0 + w), k);
    return {f, k * f / (z * w)};
  };
}

namespace {

void check_r_open(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0,1)");
}

struct Evaluated {
  GenFunPoint from_x0;
  GenFunPoint from_xr;
};

Evaluated at_one_minus_r(const FreeProcessGf& free, const WalkSpec& spec, double r) {
  spec.validate();
  check_r_open(r);
  const double z = 1.0 - r;
  Evaluated e;
  e.from_x0 = free(spec.x0, z);
  e.from_xr = spec.xr == spec.x0 ? e.from_x0 : free(spec.xr, z);
  return e;
}

}  // namespace

double reset_gf(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p, double z) {
  spec.validate();
  if (!(p.r >= 0.0 && p.r < 1.0)) throw DomainError("r must lie in [0,1)");
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("z must lie in [0,1)");
  const double zeta = (1.0 - p.r) * z;
  const double f0 = free(spec.x0, zeta).value;
  const double fr = spec.xr == spec.x0 ? f0 : free(spec.xr, zeta).value;
  return ((1.0 - z) * f0 + p.r * z * fr) / (1.0 - z + p.r * z * fr);
}

double survival_gf(const FreeProcessGf& free, std::int64_t source, double z) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("z must lie in [0,1)");
  return (1.0 - free(source, z).value) / (1.0 - z);
}

double mean_fht(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p) {
  const Evaluated e = at_one_minus_r(free, spec, p.r);
  if (e.from_xr.value == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 - e.from_x0.value) / (p.r * e.from_xr.value);
}

double mean_fht_derivative(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p) {
  const Evaluated e = at_one_minus_r(free, spec, p.r);
  if (e.from_xr.value == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double f0 = e.from_x0.value, fr = e.from_xr.value;
  const double mean = (1.0 - f0) / (p.r * fr);
  return mean * (e.from_x0.derivative / (1.0 - f0) + e.from_xr.derivative / fr - 1.0 / p.r);
}

namespace {

struct SecondMoment {
  double value;
  double variance;
  // Estimated rounding error of value, propagated from the generating-function inputs.
  double noise;
};

// The bracket terms grow like 1/r and the variance is a small difference of second moment and squared mean when
// the walk is nearly deterministic, so the algebra runs in quad precision. r is taken as 1 - z to match the
// argument the generating functions were evaluated at.
SecondMoment second_moment_parts(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p) {
  using quad = __float128;
  const Evaluated e = at_one_minus_r(free, spec, p.r);
  const double f0 = e.from_x0.value, d0 = e.from_x0.derivative;
  const double fr = e.from_xr.value, dr = e.from_xr.derivative;
  if (fr == 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, 0.0};
  }
  const quad z = static_cast<quad>(1.0 - p.r);
  const quad r = 1 - z;
  const quad a = 1 - static_cast<quad>(f0);
  const quad mean = a / (r * fr);
  const quad t1 = z * dr / fr;
  const quad t2 = (1 - r * fr) / (r * fr);
  const quad t3 = z * d0 / a;
  const quad m2 = 2 * mean * (quad(0.5) - t1 + t2 - t3);
  // Generating functions carry ~1e-13 relative error; 1 - f0 loses digits as f0 -> 1.
  const double md = static_cast<double>(mean), at1 = std::fabs(static_cast<double>(t1)),
               at2 = std::fabs(static_cast<double>(t2)), at3 = std::fabs(static_cast<double>(t3));
  const double noise = 2.0 * md * (1e-12 * (0.5 + at1 + at2 + at3) + 1e-14 * at3 / static_cast<double>(a));
  return {static_cast<double>(m2), static_cast<double>(m2 - mean * mean), noise};
}

}  // namespace

double second_moment_fht(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p) {
  return second_moment_parts(free, spec, p).value;
}

MomentSummary moment_summary(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p) {
  MomentSummary m;
  m.mean = mean_fht(free, spec, p);
  const SecondMoment sm = second_moment_parts(free, spec, p);
  m.second_moment = sm.value;
  double var = sm.variance;
  if (var < 0.0) {
    if (var < -std::max(1e-9 * m.mean * m.mean, sm.noise)) throw NumericError("negative variance from the second-moment formula");
    var = 0.0;
  }
  m.std_dev = std::sqrt(var);
  m.cv = m.std_dev / m.mean;
  return m;
}

double derivative_step(double r) { return std::max(1e-6, 1e-4 * r * (1.0 - r)); }

double cv_identity_residual(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p) {
  const double r = p.r;
  const MomentSummary m = moment_summary(free, spec, p);
  const WalkSpec at_xr{spec.epsilon, spec.xr, spec.xr, 0};
  const double tau_xr = mean_fht(free, at_xr, p);
  const double h = std::min(derivative_step(r), 0.5 * std::min(r, 1.0 - r));
  const double inv_plus = 1.0 / mean_fht(free, spec, {r + h});
  const double inv_minus = 1.0 / mean_fht(free, spec, {r - h});
  const double dinv = (inv_plus - inv_minus) / (2.0 * h);
  const double lhs = m.cv * m.cv + 1.0;
  const double rhs = (2.0 * tau_xr + 1.0) / m.mean + 2.0 * (1.0 - r) * dinv;
  return lhs - rhs;
}

PmfPrefix reset_pmf_prefix(const PmfPrefix& from_x0, const PmfPrefix& from_xr, ResetParams p, std::int64_t n_max) {
  if (!(p.r >= 0.0 && p.r < 1.0)) throw DomainError("r must lie in [0,1)");
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  auto covers = [n_max](const PmfPrefix& f) {
    return f.n_max >= n_max && static_cast<std::int64_t>(f.probs.size()) > n_max;
  };
  if (!covers(from_x0) || !covers(from_xr)) throw DomainError("free pmf prefix is shorter than n_max");
  const double r = p.r;
  const double keep = 1.0 - r;
  const std::size_t n1 = static_cast<std::size_t>(n_max) + 1;

  // survival[k] = Q(k|x) = 1 - sum_{m<=k} F(m|x)
  auto survival = [n1](const PmfPrefix& f) {
    std::vector<double> q(n1);
    double acc = 0.0;
    for (std::size_t k = 0; k < n1; ++k) {
      acc += f.probs[k];
      q[k] = 1.0 - acc;
    }
    return q;
  };
  const std::vector<double> q0 = survival(from_x0);
  const std::vector<double> qr = survival(from_xr);

  // F_r(n) = (1-r)^n F(n|x) + sum_k r (1-r)^{k-1} Q(k-1|x) F_r(n-k|xr, xr)
  auto renewal = [&](const PmfPrefix& first, const std::vector<double>& q, const std::vector<double>* after) {
    std::vector<double> out(n1, 0.0);
    std::vector<double> w(n1, 0.0);
    double pw = 1.0;
    for (std::size_t k = 1; k < n1; ++k) {
      w[k] = r * pw * q[k - 1];
      pw *= keep;
    }
    // after == nullptr: the walk restarts from the same site, so the sum refers to out itself
    const std::vector<double>& tail = after ? *after : out;
    double pn = 1.0;
    for (std::size_t n = 1; n < n1; ++n) {
      pn *= keep;
      double acc = pn * first.probs[n];
      for (std::size_t k = 1; k < n; ++k) acc += w[k] * tail[n - k];
      out[n] = acc;
    }
    return out;
  };
  const std::vector<double> self = renewal(from_xr, qr, nullptr);
  PmfPrefix out;
  out.n_max = n_max;
  out.probs = (&from_x0 == &from_xr) ? self : renewal(from_x0, q0, &self);
  double total = 0.0;
  for (double v : out.probs) total += v;
  out.tail_mass = 1.0 - total;
  return out;
}

std::vector<double> reset_gf_coefficients(const std::vector<double>& free_x0, const std::vector<double>& free_xr,
                                          ResetParams p, std::int64_t n_max) {
  if (!(p.r >= 0.0 && p.r < 1.0)) throw DomainError("r must lie in [0,1)");
  const std::size_t n1 = static_cast<std::size_t>(n_max) + 1;
  if (free_x0.size() < n1 || free_xr.size() < n1) throw DomainError("free coefficients shorter than n_max");
  const double r = p.r;
  // A(z) = F(zeta|x0), B(z) = F(zeta|xr) with zeta = (1-r) z
  std::vector<double> a(n1), b(n1);
  double pw = 1.0;
  for (std::size_t n = 0; n < n1; ++n) {
    a[n] = free_x0[n] * pw;
    b[n] = free_xr[n] * pw;
    pw *= 1.0 - r;
  }
  // numerator (1-z) A + r z B, denominator 1 - z + r z B
  std::vector<double> num(n1, 0.0), den(n1, 0.0);
  den[0] = 1.0;
  if (n1 > 1) den[1] = -1.0;
  for (std::size_t n = 0; n < n1; ++n) {
    num[n] += a[n];
    if (n + 1 < n1) {
      num[n + 1] += -a[n] + r * b[n];
      den[n + 1] += r * b[n];
    }
  }
  std::vector<double> q(n1, 0.0);
  for (std::size_t n = 0; n < n1; ++n) {
    double acc = num[n];
    for (std::size_t i = 1; i <= n; ++i) acc -= den[i] * q[n - i];
    q[n] = acc;
  }
  return q;
}

}  // namespace grw
