#include "grw/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "grw/asymptotics.hpp"
#include "grw/errors.hpp"
#include "grw/special_functions.hpp"

namespace grw {
namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr int kMaxIterations = 400;

std::int64_t abs_site(std::int64_t x) {
  if (x == 0) throw DomainError("x0 must be nonzero");
  return x < 0 ? -x : x;
}

std::vector<double> scan_grid() {
  std::vector<double> g(kScanPoints);
  const double lo = std::log(kMinScanR), hi = std::log(kMaxScanR);
  for (int i = 0; i < kScanPoints; ++i) g[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (kScanPoints - 1));
  g.back() = kMaxScanR;
  return g;
}

// Bisection on f over the first sign change of a uniform scan of [lo, hi].
std::optional<double> first_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr int n = 4096;
  double a = lo, fa = f(lo);
  for (int i = 1; i <= n; ++i) {
    double b = lo + (hi - lo) * i / n;
    const double fb = f(b);
    if (fa == 0.0) return a;
    if ((fa < 0.0) != (fb < 0.0)) {
      for (int it = 0; it < kMaxIterations && b - a > tol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  return std::nullopt;
}

// Scan window for the epsilon = +-1 equations; z = 1 is a trivial root of all of them.
constexpr double kRootScanLo = 0.5;
constexpr double kRootScanHi = 1.0 - 1e-6;

}  // namespace

OptimizationResult find_optimal_r(const FreeProcessGf& free, const WalkSpec& spec, double tol) {
  spec.validate();
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  const auto log_mean = [&](double r) { return std::log(mean_fht(free, spec, {r})); };
  const std::vector<double> grid = scan_grid();
  std::vector<double> values(grid.size()), noise(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = log_mean(grid[i]);
    // <tau_r> is proportional to 1 - F(0,1-r|x0); its relative rounding error grows like 1/(1 - F).
    noise[i] = 1e-12 / std::max(1e-300, 1.0 - free(spec.x0, 1.0 - grid[i]).value);
  }

  OptimizationResult out;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (values[i] < values[i - 1] && values[i] <= values[i + 1]) ++out.local_minima;
  auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  if (values[0] - values[best] <= noise[0] + noise[best]) best = 0;
  if (best == 0) {
    out.local_minima = 0;
    out.reason = "monotone-increasing mean";
    out.mean_at_star = std::exp(values[0]);
    out.bracket = {grid[0], grid[1]};
    return out;
  }
  if (best + 1 == grid.size()) {
    out.reason = "monotone-decreasing mean";
    out.mean_at_star = std::exp(values.back());
    out.bracket = {grid[best - 1], grid[best]};
    return out;
  }

  const double outer_lo = grid[best - 1], outer_hi = grid[best + 1];
  double a = outer_lo, b = outer_hi;
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = log_mean(c), fd = log_mean(d);
  int it = 0;
  for (; it < kMaxIterations && b - a > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = log_mean(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = log_mean(d);
    }
  }

  // Golden section stalls near sqrt(machine epsilon) on the flat minimum; refine on the derivative sign.
  const double width = b - a;
  double lo = std::max(outer_lo, a - 4.0 * width), hi = std::min(outer_hi, b + 4.0 * width);
  const auto slope = [&](double r) { return mean_fht_derivative(free, spec, {r}); };
  bool polished = false;
  if (slope(lo) < 0.0 && slope(hi) > 0.0) {
    for (int k = 0; k < kMaxIterations && hi - lo > 1e-15 * hi; ++k, ++it) {
      const double m = 0.5 * (lo + hi);
      (slope(m) < 0.0 ? lo : hi) = m;
    }
    polished = true;
  } else {
    lo = a;
    hi = b;
  }
  const double r_star = 0.5 * (lo + hi);
  out.r_star = r_star;
  out.mean_at_star = mean_fht(free, spec, {r_star});
  out.bracket = {lo, hi};
  out.iterations = it;
  out.converged = polished || hi - lo <= tol;
  return out;
}

OptimizationResult find_optimal_r(const WalkSpec& spec, double tol) {
  return find_optimal_r(gillis_free_process(spec.epsilon), spec, tol);
}

std::optional<double> optimal_r_eps1(std::int64_t x0, double tol) {
  const double k = static_cast<double>(abs_site(x0));
  // Stationarity 1 - F = (1-z) F'/F with F = (z/(1+w))^k (1+kw), rearranged as z^k = h(z).
  const auto residual = [k](double z) {
    const double w = std::sqrt((1.0 - z) * (1.0 + z));
    const double h = std::pow(1.0 + w, k) / (1.0 + k * w) * (1.0 - k * (1.0 - z) * (k + w) / (z * (1.0 + k * w)));
    return std::pow(z, k) - h;
  };
  const auto z = first_root(residual, kRootScanLo, kRootScanHi, tol);
  if (!z) return std::nullopt;
  return 1.0 - *z;
}

std::optional<double> optimal_r_eps_minus1(std::int64_t x0, double tol) {
  const double k = static_cast<double>(abs_site(x0));
  const auto residual = [k](double z) {
    const double w = std::sqrt((1.0 - z) * (1.0 + z));
    return z * z * std::sqrt((1.0 - z) / (1.0 + z)) - (1.0 - w) * (1.0 - z + z / k);
  };
  const auto z = first_root(residual, kRootScanLo, kRootScanHi, tol);
  if (!z) return std::nullopt;
  return 1.0 - *z;
}

ThresholdResult find_threshold_r(const FreeProcessGf& free, const WalkSpec& spec, double tol) {
  spec.validate();
  const double e = snap_epsilon(spec.epsilon);
  if (!(e > 0.5)) throw DomainError("threshold needs a positive-recurrent walk (epsilon > 1/2)");
  ThresholdResult out;
  out.free_mean = free_mean_fht(e, spec.x0);
  const OptimizationResult opt = find_optimal_r(free, spec);
  if (!opt.r_star) {
    out.reason = "mean never below the free mean";
    return out;
  }
  if (!(opt.mean_at_star < out.free_mean)) {
    out.reason = "minimum does not drop below the free mean";
    return out;
  }
  const auto gap = [&](double r) { return mean_fht(free, spec, {r}) - out.free_mean; };
  double lo = *opt.r_star, hi = kMaxScanR;
  if (!(gap(hi) > 0.0)) {
    out.reason = "mean stays below the free mean up to the scan limit";
    return out;
  }
  for (int it = 0; it < kMaxIterations && hi - lo > tol; ++it) {
    const double m = 0.5 * (lo + hi);
    (gap(m) < 0.0 ? lo : hi) = m;
  }
  out.r_th = 0.5 * (lo + hi);
  return out;
}

ThresholdResult find_threshold_r(const WalkSpec& spec, double tol) {
  return find_threshold_r(gillis_free_process(spec.epsilon), spec, tol);
}

std::optional<double> threshold_eps1(std::int64_t x0, double tol) {
  const double k = static_cast<double>(abs_site(x0));
  // <tau_r> = x0^2 with F from the epsilon = 1 closed form gives F = 1/(1 + x0^2 (1-z)).
  const auto residual = [k](double z) {
    const double w = std::sqrt((1.0 - z) * (1.0 + z));
    return std::pow((1.0 + w) / z, k) - (1.0 + k * k * (1.0 - z)) * (1.0 + k * w);
  };
  const auto z = first_root(residual, kRootScanLo, kRootScanHi, tol);
  if (!z) return std::nullopt;
  return 1.0 - *z;
}

std::string to_string(Benefit b) {
  switch (b) {
    case Benefit::AlwaysBeneficial: return "always-beneficial";
    case Benefit::BeneficialBelowThreshold: return "beneficial-below-threshold";
    case Benefit::NeverBeneficial: return "never-beneficial";
  }
  return "unknown";
}

Benefit resetting_beneficial(const WalkSpec& spec) {
  spec.validate();
  const double e = snap_epsilon(spec.epsilon);
  if (e <= 0.5) return Benefit::AlwaysBeneficial;
  if (moment_case(e, spec.x0) == MomentCase::FiniteVariance) {
    // Deterministic one-step walk: mu1 = mu2 = 1, xi0 = 0; helps only if xi0^2 + 1 > (2 mu1(xr) + 1)/mu1(x0).
    const double mu1_x0 = 1.0, mu2_x0 = 1.0;
    const double mu1_xr = free_mean_fht(e, spec.xr);
    const double xi0_sq = (mu2_x0 - mu1_x0 * mu1_x0) / (mu1_x0 * mu1_x0);
    return xi0_sq + 1.0 > (2.0 * mu1_xr + 1.0) / mu1_x0 ? Benefit::BeneficialBelowThreshold
                                                        : Benefit::NeverBeneficial;
  }
  // Infinite variance: the small-r slope of the mean is -(1+delta) calB/delta r^(delta-1) < 0 iff calB > 0.
  return coeff_calB(e, spec.x0) > 0.0 ? Benefit::BeneficialBelowThreshold : Benefit::NeverBeneficial;
}

double cv_optimality_residual(const FreeProcessGf& free, const WalkSpec& spec, double r) {
  spec.validate();
  if (!(r > 0.0 && r < 1.0)) throw DomainError("r must lie in (0,1)");
  const MomentSummary m = moment_summary(free, spec, {r});
  const double tau_xr = mean_fht(free, WalkSpec{spec.epsilon, spec.xr, spec.xr, 0}, {r});
  return m.cv * m.cv + 1.0 - (2.0 * tau_xr + 1.0) / m.mean;
}

double cv_optimality_residual(const WalkSpec& spec, double r) {
  return cv_optimality_residual(gillis_free_process(spec.epsilon), spec, r);
}

double k_epsilon_diagnostic(double epsilon, std::int64_t x0) {
  validate_epsilon(epsilon);
  const double k = static_cast<double>(abs_site(x0));
  return std::exp(log_gamma(1.0 + epsilon + k) - log_gamma(k + 1.0) - log_gamma(1.0 + epsilon));
}

}  // namespace grw
