#ifndef GRW_RESETTING_HPP
#define GRW_RESETTING_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "grw/gillis.hpp"
#include "grw/hypergeom.hpp"

namespace grw {

// First-hitting generating function of a free process for target 0: (source, z) -> value and d/dz.
// Implementations must be safe to call concurrently.
using FreeProcessGf = std::function<GenFunPoint(std::int64_t source, double z)>;

FreeProcessGf gillis_free_process(double epsilon, const EvalPolicy& policy = {});
// Simple symmetric walk, F(0,z|x) = ((1 - sqrt(1-z^2))/z)^|x|.
FreeProcessGf simple_walk_free_process();

struct ResetParams {
  double r = 0.0;
};

struct MomentSummary {
  double mean;
  double second_moment;
  double std_dev;
  double cv;
};

double reset_gf(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p, double z);
double survival_gf(const FreeProcessGf& free, std::int64_t source, double z);

// <tau_r>; +inf if F(0,1-r|xr) = 0.
double mean_fht(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p);
// d<tau_r>/dr from the analytic logarithmic derivative.
double mean_fht_derivative(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p);
double second_moment_fht(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p);
MomentSummary moment_summary(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p);

// Central-difference step used for r-derivatives of the mean.
double derivative_step(double r);

// xi^2 + 1 - (2<tau_r(xr)> + 1)/<tau_r> - 2(1-r) d(1/<tau_r>)/dr, derivative by central difference.
double cv_identity_residual(const FreeProcessGf& free, const WalkSpec& spec, ResetParams p);

// Renewal convolution in the time domain. from_xr may be the same prefix as from_x0 when x0 = xr.
PmfPrefix reset_pmf_prefix(const PmfPrefix& from_x0, const PmfPrefix& from_xr, ResetParams p, std::int64_t n_max);

// Taylor coefficients [z^0 .. z^n_max] of reset_gf built from the free coefficients by series algebra.
std::vector<double> reset_gf_coefficients(const std::vector<double>& free_x0, const std::vector<double>& free_xr,
                                          ResetParams p, std::int64_t n_max);

}  // namespace grw

#endif
