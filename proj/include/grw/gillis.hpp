#ifndef GRW_GILLIS_HPP
#define GRW_GILLIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grw/hypergeom.hpp"

namespace grw {

struct WalkSpec {
  double epsilon = 0.0;
  std::int64_t x0 = 1;
  std::int64_t xr = 1;
  std::int64_t target = 0;

  // Throws DomainError unless epsilon in (-1,1], x0 != 0, xr != 0, target == 0.
  void validate() const;
  static WalkSpec make(double epsilon, std::int64_t x0, std::int64_t xr);
};

// epsilon values within this distance of +-1/2 are treated as exactly +-1/2.
inline constexpr double kEpsilonSnap = 1e-9;

void validate_epsilon(double epsilon);
double snap_epsilon(double epsilon);

enum class RegimeKind { Transient, NullRecurrent, PositiveRecurrent };
std::string to_string(RegimeKind kind);

struct RegimeClass {
  RegimeKind kind;
  std::optional<double> rho;    // recurrent regimes only
  std::optional<double> delta;  // 1/2 < epsilon <= 1 only
};

struct GenFunPoint {
  double value;
  double derivative;
};

// probs[n] is the probability of first hitting the origin at step n, n = 1..n_max.
// probs[0] is kept as a zero placeholder so that indices equal step counts.
struct PmfPrefix {
  std::vector<double> probs;
  std::int64_t n_max = 0;
  // Mass not accounted for by probs: survival beyond n_max (or censored / overflow samples).
  double tail_mass = 0.0;

  double total() const;
};

struct StepProbabilities {
  double p_minus;  // toward decreasing x
  double p_plus;   // toward increasing x
};

StepProbabilities transition_probability(double epsilon, std::int64_t y);
RegimeClass classify_regime(double epsilon);

// R = -1 - 1/epsilon for transient walks, 1 otherwise.
double return_probability(double epsilon);
// 2 epsilon/(2 epsilon - 1) for epsilon > 1/2, +inf otherwise.
double mean_return_time(double epsilon);

double return_gf(double epsilon, double z, const EvalPolicy& policy = {});
double hitting_gf(double epsilon, std::int64_t x0, double z, const EvalPolicy& policy = {});
GenFunPoint hitting_gf_point(double epsilon, std::int64_t x0, double z, const EvalPolicy& policy = {});
double occupation_gf(double epsilon, std::int64_t x0, double z, const EvalPolicy& policy = {});

// Coefficient of z^{|x0|} in the hitting generating function, i.e. the probability of the direct path.
double leading_hit_coefficient(double epsilon, std::int64_t x0);

// Power-series coefficients [z^0 .. z^n_max] of hitting_gf, assembled from the two 2F1 series.
std::vector<double> hitting_gf_taylor(double epsilon, std::int64_t x0, std::int64_t n_max);

// Closed forms at epsilon = 1 and epsilon = 0.
double hitting_gf_eps1(std::int64_t x0, double z);
double hitting_gf_eps0(std::int64_t x0, double z);

double hit_probability(double epsilon, std::int64_t x0);
// x0^2/(2 epsilon - 1) for epsilon > 1/2, +inf otherwise.
double free_mean_fht(double epsilon, std::int64_t x0);

inline constexpr std::int64_t kDefaultPmfLimit = 20000;

PmfPrefix hitting_pmf_prefix(double epsilon, std::int64_t x0, std::int64_t n_max,
                             std::int64_t limit = kDefaultPmfLimit);

}  // namespace grw

#endif
