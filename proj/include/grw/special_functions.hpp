#ifndef GRW_SPECIAL_FUNCTIONS_HPP
#define GRW_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace grw {

// (x)_n = x(x+1)...(x+n-1).
double pochhammer(double x, std::int64_t n);

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Psi(x) for x > 0.
double digamma(double x);

// log|Gamma(x)| and sign(Gamma(x)) for any real x that is not a pole.
struct SignedLog {
  double log_abs;
  int sign;
};
SignedLog signed_log_gamma(double x);

bool is_nonpositive_integer(double x);

// 1/Gamma(x) as a signed log; sign 0 means the value is exactly zero (pole of Gamma).
SignedLog log_recip_gamma(double x);

// Digamma for any non-pole real argument. Reflection handles x < 0.
template <typename Real>
Real digamma_any(Real x) {
  using std::floor;
  using std::log;
  using std::tan;
  if (x <= 0 && floor(x) == x) return std::numeric_limits<Real>::quiet_NaN();
  if (x < Real(0.5)) {
    const Real pi = std::numbers::pi_v<Real>;
    return digamma_any<Real>(Real(1) - x) - pi / tan(pi * x);
  }
  Real acc = 0;
  while (x < Real(10)) {
    acc -= Real(1) / x;
    x += 1;
  }
  const Real inv2 = Real(1) / (x * x);
  // Bernoulli tail: -sum B_2k / (2k x^2k)
  Real tail = inv2 * (Real(-1) / 12 +
              inv2 * (Real(1) / 120 +
              inv2 * (Real(-1) / 252 +
              inv2 * (Real(1) / 240 +
              inv2 * (Real(-1) / 132 +
              inv2 * (Real(691) / 32760 +
              inv2 * (Real(-1) / 12)))))));
  return acc + log(x) - Real(0.5) / x + tail;
}

}  // namespace grw

#endif
