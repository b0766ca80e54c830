#include <doctest.h>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <vector>

#include "grw/errors.hpp"
#include "grw/optimizer.hpp"
#include "support/oracles.hpp"

using namespace grw;
using oracle::mp;

namespace {

// Exact epsilon = 1 mean for x0 = xr = k in 50-digit arithmetic.
mp eps1_mean(mp r, int k) {
  const mp z = 1 - r;
  const mp w = sqrt((1 - z) * (1 + z));
  const mp f = pow(z / (1 + w), k) * (1 + k * w);
  return (1 - f) / (r * f);
}

double eps1_argmin_oracle(int k) {
  const auto res = boost::math::tools::brent_find_minima([k](mp r) { return eps1_mean(r, k); }, mp(1e-4), mp(0.5), 120);
  return static_cast<double>(res.first);
}

double eps1_threshold_oracle(int k) {
  const auto gap = [k](mp r) { return eps1_mean(r, k) - k * k; };
  boost::uintmax_t iters = 200;
  const auto br = boost::math::tools::toms748_solve(gap, mp(eps1_argmin_oracle(k)), mp(0.9999),
                                                    boost::math::tools::eps_tolerance<mp>(120), iters);
  return static_cast<double>((br.first + br.second) / 2);
}

}  // namespace

TEST_CASE("epsilon = 1 optimum") {
  const std::vector<std::pair<int, double>> golden{{8, 0.9873}, {6, 0.9801}, {4, 0.9668}, {2, 0.9558}};
  for (auto [k, z] : golden) {
    CAPTURE(k);
    const auto r = optimal_r_eps1(k);
    REQUIRE(r);
    CHECK(std::fabs(1 - *r - z) < 5e-4);
    const double want = eps1_argmin_oracle(k);
    CHECK(std::fabs(*r - want) < 1e-9);
    CHECK(optimal_r_eps1(-k) == r);
    const auto g = find_optimal_r(WalkSpec::make(1.0, k, k));
    REQUIRE(g.r_star);
    CHECK(g.converged);
    CHECK(std::fabs(*g.r_star - want) < 1e-8);
    CHECK(std::fabs(*g.r_star - *r) < 1e-6);
  }
  CHECK_FALSE(optimal_r_eps1(1));
  CHECK_THROWS_AS(optimal_r_eps1(0), DomainError);
}

TEST_CASE("epsilon -> -1 limiting optimum") {
  // Dropping K_eps, stationarity reduces to z sqrt(1 - z^2) = k (1 - z).
  const std::vector<std::pair<int, double>> golden{{8, 0.9710}, {4, 0.9030}, {2, 0.7522}};
  for (auto [k, z] : golden) CHECK(std::fabs(1 - *optimal_r_eps_minus1(k) - z) < 5e-4);
  for (int k : {1, 2, 3, 4, 6, 8, 12}) {
    CAPTURE(k);
    const double z = 1 - *optimal_r_eps_minus1(k);
    CHECK(std::fabs(z * z * (1 + z) - double(k) * k * (1 - z)) < 1e-8);
  }
  CHECK(1 - *optimal_r_eps_minus1(6) == doctest::Approx(0.95099).epsilon(1e-5));
  for (int k : {2, 4, 6, 8}) {
    CAPTURE(k);
    const auto g = find_optimal_r(WalkSpec::make(-0.999, k, k));
    REQUIRE(g.r_star);
    CHECK(std::fabs(*g.r_star - *optimal_r_eps_minus1(k)) < 1e-2);
    CHECK(*g.r_star < *optimal_r_eps_minus1(k));
  }
}

TEST_CASE("K_eps diagnostic") {
  for (int k = 1; k <= 8; ++k) {
    CHECK(k_epsilon_diagnostic(-0.999, k) < 1e-2);
    CHECK(k_epsilon_diagnostic(0.3, k) ==
          doctest::Approx(leading_hit_coefficient(0.3, k) * std::pow(2.0, k)).epsilon(1e-12));
  }
  CHECK(k_epsilon_diagnostic(0.0, 5) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("epsilon = 1 threshold") {
  const std::vector<std::pair<int, double>> golden{{8, 0.9319}, {6, 0.8979}, {4, 0.8433}, {2, 0.8147}};
  for (auto [k, z] : golden) {
    CAPTURE(k);
    const auto r = threshold_eps1(k);
    REQUIRE(r);
    CHECK(std::fabs(1 - *r - z) < 5e-4);
    const double want = eps1_threshold_oracle(k);
    CHECK(std::fabs(*r - want) < 1e-9);
    const ThresholdResult t = find_threshold_r(WalkSpec::make(1.0, k, k));
    REQUIRE(t.r_th);
    CHECK(t.free_mean == doctest::Approx(double(k) * k));
    CHECK(std::fabs(*t.r_th - *r) < 1e-6);
  }
  CHECK_FALSE(threshold_eps1(1));
}

TEST_CASE("deterministic walk has no optimum or threshold") {
  const WalkSpec s = WalkSpec::make(1.0, 1, 1);
  const OptimizationResult o = find_optimal_r(s);
  CHECK_FALSE(o.r_star);
  CHECK(o.reason == "monotone-increasing mean");
  const ThresholdResult t = find_threshold_r(s);
  CHECK_FALSE(t.r_th);
  CHECK(resetting_beneficial(s) == Benefit::NeverBeneficial);
  CHECK(resetting_beneficial(WalkSpec::make(1.0, -1, 3)) == Benefit::NeverBeneficial);
  CHECK_FALSE(find_optimal_r(WalkSpec::make(1.0, 1, 3)).r_star);
}

TEST_CASE("benefit classification") {
  for (int x0 : {1, 3, 7}) {
    CHECK(resetting_beneficial(WalkSpec::make(-0.25, x0, 2)) == Benefit::AlwaysBeneficial);
    CHECK(resetting_beneficial(WalkSpec::make(-0.85, x0, 2)) == Benefit::AlwaysBeneficial);
    CHECK(resetting_beneficial(WalkSpec::make(0.5, x0, 2)) == Benefit::AlwaysBeneficial);
  }
  CHECK(resetting_beneficial(WalkSpec::make(0.85, 3, 3)) == Benefit::BeneficialBelowThreshold);
  CHECK(resetting_beneficial(WalkSpec::make(0.85, 1, 1)) == Benefit::BeneficialBelowThreshold);
  CHECK(resetting_beneficial(WalkSpec::make(1.0, 2, 2)) == Benefit::BeneficialBelowThreshold);
  CHECK(to_string(Benefit::NeverBeneficial) == "never-beneficial");
}

TEST_CASE("optimum moves monotonically with epsilon and stays in the bracket") {
  for (int k : {2, 4, 6, 8}) {
    CAPTURE(k);
    double prev = 1.0;
    for (double e : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
      const auto g = find_optimal_r(WalkSpec::make(e, k, k));
      REQUIRE(g.r_star);
      CHECK(*g.r_star <= prev);
      prev = *g.r_star;
    }
    const double lo = *optimal_r_eps1(k), hi = *optimal_r_eps_minus1(k);
    for (double e : {-0.999, -0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9, 0.999}) {
      CAPTURE(e);
      const auto g = find_optimal_r(WalkSpec::make(e, k, k));
      CHECK(lo < *g.r_star);
      CHECK(*g.r_star < hi);
    }
  }
}

TEST_CASE("minimality certificate") {
  for (double e : {-0.85, -0.5, 0.25, 0.85})
    for (auto [x0, xr] : {std::pair{3, 5}, std::pair{2, 2}, std::pair{5, 1}}) {
      CAPTURE(e);
      CAPTURE(x0);
      const WalkSpec s = WalkSpec::make(e, x0, xr);
      const auto f = gillis_free_process(e);
      const OptimizationResult o = find_optimal_r(f, s);
      REQUIRE(o.r_star);
      const double r = *o.r_star;
      CHECK(o.converged);
      CHECK(o.local_minima == 1);
      CHECK(o.bracket.first <= r);
      CHECK(r <= o.bracket.second);
      CHECK(mean_fht(f, s, {r}) == o.mean_at_star);
      for (double d : {1e-4, 1e-3}) {
        CHECK(mean_fht(f, s, {r - d}) >= o.mean_at_star);
        CHECK(mean_fht(f, s, {r + d}) >= o.mean_at_star);
      }
      CHECK(std::fabs(mean_fht_derivative(f, s, {r})) < 1e-6 * o.mean_at_star / r);
    }
}

TEST_CASE("optimizer accepts other free processes") {
  const WalkSpec s = WalkSpec::make(0.0, 3, 3);
  const auto a = find_optimal_r(simple_walk_free_process(), s);
  const auto b = find_optimal_r(gillis_free_process(0.0), s);
  REQUIRE(a.r_star);
  CHECK(*a.r_star == doctest::Approx(*b.r_star).epsilon(1e-9));
}

TEST_CASE("threshold structure in the positive-recurrent regime") {
  for (double e : {0.6, 0.85, 1.0})
    for (int x0 : {2, 3}) {
      CAPTURE(e);
      CAPTURE(x0);
      const WalkSpec s = WalkSpec::make(e, x0, x0);
      const auto f = gillis_free_process(e);
      const ThresholdResult t = find_threshold_r(f, s);
      REQUIRE(t.r_th);
      const double rth = *t.r_th;
      CHECK(*find_optimal_r(f, s).r_star < rth);
      CHECK(mean_fht(f, s, {rth}) == doctest::Approx(t.free_mean).epsilon(1e-9));
      for (int i = 0; i < 32; ++i) {
        const double below = 1e-4 + (rth - 2e-4) * i / 31.0;
        CHECK(mean_fht(f, s, {below}) < t.free_mean);
        const double above = rth + 1e-4 + (1 - 1e-3 - rth - 1e-4) * i / 31.0;
        CHECK(mean_fht(f, s, {above}) > t.free_mean);
      }
    }
  CHECK_THROWS_AS(find_threshold_r(WalkSpec::make(0.5, 3, 3)), DomainError);
  CHECK_THROWS_AS(find_threshold_r(WalkSpec::make(0.25, 3, 3)), DomainError);
}

TEST_CASE("threshold climbs toward one as epsilon approaches 1/2") {
  double prev = 0.0;
  for (double e : {1.0, 0.85, 0.7, 0.6, 0.55, 0.51, 0.501}) {
    CAPTURE(e);
    const ThresholdResult t = find_threshold_r(WalkSpec::make(e, 3, 3));
    REQUIRE(t.r_th);
    CHECK(*t.r_th > prev);
    prev = *t.r_th;
  }
  CHECK(prev > 0.85);
}

TEST_CASE("coefficient-of-variation optimality residual") {
  const WalkSpec s = WalkSpec::make(0.25, 3, 5);
  const auto f = gillis_free_process(0.25);
  const double r = *find_optimal_r(f, s).r_star;
  CHECK(std::fabs(cv_optimality_residual(f, s, r)) < 1e-4);
  CHECK(cv_optimality_residual(f, s, r - 0.05 * r) > 0.0);
  CHECK(cv_optimality_residual(f, s, r + 0.05) < 0.0);
  for (double e : {-0.85, 0.0, 0.85})
    for (double q : {0.1, 0.4, 0.8}) {
      const WalkSpec t = WalkSpec::make(e, 4, 4);
      const auto g = gillis_free_process(e);
      const MomentSummary m = moment_summary(g, t, {q});
      CHECK(std::fabs(cv_optimality_residual(g, t, q) - (m.cv * m.cv - 1.0 - 1.0 / m.mean)) < 1e-12);
      // The residual equals -2 (1-r) d<tau>/dr / <tau>^2.
      const WalkSpec u = WalkSpec::make(e, 2, 5);
      const double tau = mean_fht(g, u, {q});
      CHECK(cv_optimality_residual(g, u, q) ==
            doctest::Approx(-2 * (1 - q) * mean_fht_derivative(g, u, {q}) / (tau * tau)).epsilon(1e-6));
    }
  CHECK_THROWS_AS(cv_optimality_residual(f, s, 0.0), DomainError);
}
