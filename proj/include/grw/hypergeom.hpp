#ifndef GRW_HYPERGEOM_HPP
#define GRW_HYPERGEOM_HPP

#include <cstdint>

namespace grw {

struct HypergeomParams {
  double a;
  double b;
  double c;
  double t;
};

struct EvalPolicy {
  double tol = 1e-13;
  std::int64_t max_terms = 1000000;
  // Above this argument the 1-t linear transformation is used.
  double near_one_switch = 0.5;
  // |c-a-b - m| at or below this snaps to the logarithmic formulas.
  double log_case_band = 1e-9;
  // Below this (and above log_case_band) the transformation runs in quad precision.
  double near_degenerate_band = 1e-4;
  // Transformation and log-formula results whose rounding-error estimate exceeds this
  // are recomputed by the direct series, or in quad precision if the series cannot converge.
  double cancellation_limit = 1e-12;
};

// Direct power series. Requires t in [0, 1).
double gauss_2f1_series(const HypergeomParams& p, const EvalPolicy& policy = {});

// Linear transformation to argument 1-t; c-a-b must not be within log_case_band of an integer.
double gauss_2f1_near_one(const HypergeomParams& p, const EvalPolicy& policy = {});

// 2F1(a,b;a+b;t) through the log(1-t) expansion.
double gauss_2f1_log_equal(double a, double b, double t, const EvalPolicy& policy = {});

// 2F1(a,b;a+b-1;t) through the (1-t)^{-1} log expansion.
double gauss_2f1_log_minus_one(double a, double b, double t, const EvalPolicy& policy = {});

// Routed evaluation for t in [0,1): series, transformation, or a log formula.
double gauss_2f1(const HypergeomParams& p, const EvalPolicy& policy = {});

// d/dt 2F1(a,b;c;t), routed like gauss_2f1.
double gauss_2f1_derivative(const HypergeomParams& p, const EvalPolicy& policy = {});

}  // namespace grw

#endif
