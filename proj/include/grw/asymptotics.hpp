#ifndef GRW_ASYMPTOTICS_HPP
#define GRW_ASYMPTOTICS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "grw/gillis.hpp"

namespace grw {

// Coefficients that apply to a given spec; fields outside their regime are empty.
struct AsymptoticCoefficients {
  std::optional<double> A;     // epsilon = -1/2
  std::optional<double> B;     // -1/2 < epsilon < 1/2 and 1/2 < epsilon <= 1
  std::optional<double> calB;  // -1/2 < epsilon <= 1
  std::optional<double> C;     // transient
  std::optional<double> c;     // transient
  double K = 0.0;              // large-r coefficient at xr
};

enum class LawVariable { R, OneMinusR };

// Extra logarithmic factor in terms of lambda = log(1/variable).
enum class LogFactor { None, InverseLog, InverseSqrtLog, Log };

// law(r) = prefactor * v^(-exponent) * g(log(1/v)), v = r or 1 - r.
struct AsymptoteLaw {
  std::string regime;
  LawVariable variable = LawVariable::R;
  double prefactor = 0.0;
  double exponent = 0.0;
  LogFactor log_factor = LogFactor::None;

  double evaluate(double r) const;
};

double coeff_A(std::int64_t x0);
double coeff_B(double epsilon, std::int64_t x0);
double coeff_calB(double epsilon, std::int64_t x0);
double coeff_C(double epsilon, std::int64_t x0, std::int64_t xr);
double coeff_small_c(double epsilon, std::int64_t x0, std::int64_t xr);
double coeff_K(double epsilon, std::int64_t xr);

AsymptoticCoefficients coefficients(const WalkSpec& spec);

AsymptoteLaw small_r_mean_law(const WalkSpec& spec);
AsymptoteLaw small_r_std_law(const WalkSpec& spec);
// Also the large-r law of the standard deviation.
AsymptoteLaw large_r_mean_law(const WalkSpec& spec);

// L(t) ~ leading + subleading * t^(-subleading_exponent), where 1 - F(0, 1-1/t | x0) ~ t^(-rho) L(t).
// At epsilon = -1/2 the leading term carries the 1/log t factor; at epsilon = 1/2 it is (x0^2/2) log t - K(x0).
struct SlowlyVaryingExpansion {
  double leading;
  double subleading;
  double subleading_exponent;
};

SlowlyVaryingExpansion slowly_varying_L(double epsilon, std::int64_t x0, double t);

// The epsilon = 1/2 constant K(x0) in L(t) = (x0^2/2) log t - K(x0) + o(1).
struct EstimatedConstant {
  double value;
  double uncertainty;
};
inline constexpr double kHalfConstantProbe = 1e6;
EstimatedConstant epsilon_half_constant(std::int64_t x0, const EvalPolicy& policy = {});

enum class MomentCase { DivergentMean, FiniteMeanInfiniteVariance, FiniteVariance };
std::string to_string(MomentCase c);

// Moment finiteness of the free first-hitting time for epsilon in [1/2, 1].
MomentCase moment_case(double epsilon, std::int64_t x0);

}  // namespace grw

#endif
