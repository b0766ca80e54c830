#ifndef GRW_OPTIMIZER_HPP
#define GRW_OPTIMIZER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "grw/gillis.hpp"
#include "grw/resetting.hpp"

namespace grw {

inline constexpr double kMinScanR = 1e-8;
inline constexpr double kMaxScanR = 1.0 - 1e-8;
inline constexpr int kScanPoints = 64;

struct OptimizationResult {
  std::optional<double> r_star;  // empty: no interior minimum
  double mean_at_star = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  int iterations = 0;
  bool converged = false;
  int local_minima = 0;  // interior local minima seen on the coarse scan
  std::string reason;    // set when r_star is empty
};

struct ThresholdResult {
  std::optional<double> r_th;  // empty: the mean never drops below the free mean
  double free_mean = 0.0;
  std::string reason;
};

// Minimizes log <tau_r> over [kMinScanR, kMaxScanR]: coarse log scan, golden section, derivative bisection.
OptimizationResult find_optimal_r(const FreeProcessGf& free, const WalkSpec& spec, double tol = 1e-8);
OptimizationResult find_optimal_r(const WalkSpec& spec, double tol = 1e-8);

// epsilon = 1, x0 = xr: root of z = h(z)^{1/|x0|}. Returns r* = 1 - z*, empty if no root.
std::optional<double> optimal_r_eps1(std::int64_t x0, double tol = 1e-10);
// Limiting epsilon -> -1 equation with the K_eps term dropped. Returns r* = 1 - z*.
std::optional<double> optimal_r_eps_minus1(std::int64_t x0, double tol = 1e-10);

// Positive-recurrent specs only: r where <tau_r> returns to the free mean, above r*.
ThresholdResult find_threshold_r(const FreeProcessGf& free, const WalkSpec& spec, double tol = 1e-12);
ThresholdResult find_threshold_r(const WalkSpec& spec, double tol = 1e-12);

// epsilon = 1, x0 = xr threshold. Returns r_th = 1 - z_th.
std::optional<double> threshold_eps1(std::int64_t x0, double tol = 1e-10);

enum class Benefit { AlwaysBeneficial, BeneficialBelowThreshold, NeverBeneficial };
std::string to_string(Benefit b);
Benefit resetting_beneficial(const WalkSpec& spec);

// xi_r^2 + 1 - (2 <tau_r(xr|xr)> + 1)/<tau_r(x0,xr)>: positive where the mean decreases in r.
double cv_optimality_residual(const FreeProcessGf& free, const WalkSpec& spec, double r);
double cv_optimality_residual(const WalkSpec& spec, double r);

// Gamma(1+eps+|x0|)/(|x0|! Gamma(1+eps)), the amplitude dropped by the epsilon -> -1 equation.
double k_epsilon_diagnostic(double epsilon, std::int64_t x0);

}  // namespace grw

#endif
