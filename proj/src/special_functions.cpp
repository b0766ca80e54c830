#include "grw/special_functions.hpp"

#include <cmath>
#include <string>

#include "grw/errors.hpp"

namespace grw {

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

double pochhammer(double x, std::int64_t n) {
  if (n < 0) throw DomainError("pochhammer: negative n");
  if (!std::isfinite(x)) throw DomainError("pochhammer: non-finite x");
  // The product is total; only switch to lgamma when both ends sit on the positive axis.
  if (n <= 64 || x <= 0.0) {
    double p = 1.0;
    for (std::int64_t i = 0; i < n; ++i) {
      p *= x + static_cast<double>(i);
      if (p == 0.0) return 0.0;
    }
    return p;
  }
  int sg;
  return std::exp(::lgamma_r(x + static_cast<double>(n), &sg) - ::lgamma_r(x, &sg));
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: x must be positive, got " + std::to_string(x));
  int sign;
  return ::lgamma_r(x, &sign);
}

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: x must be positive, got " + std::to_string(x));
  return digamma_any<double>(x);
}

SignedLog signed_log_gamma(double x) {
  if (is_nonpositive_integer(x)) throw PoleError("Gamma pole at " + std::to_string(x));
  int sign;
  const double l = ::lgamma_r(x, &sign);
  return {l, sign};
}

SignedLog log_recip_gamma(double x) {
  if (is_nonpositive_integer(x)) return {-std::numeric_limits<double>::infinity(), 0};
  SignedLog g = signed_log_gamma(x);
  return {-g.log_abs, g.sign};
}

}  // namespace grw
