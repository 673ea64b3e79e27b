#include <cmath>
#include <limits>
#include <string>

#include "mmw/error.hpp"
#include "mmw/specfun.hpp"

namespace mmw {
namespace {

constexpr int kMaxTerms = 10000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// sum_{n>=0} x^n / (a (a+1) ... (a+n)); gamma_lower(a, x) = e^-x x^a * this.
double lower_series_scaled(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * kEps * 0.25) return sum;
  }
  throw NumericFailure("incomplete gamma series did not converge", sum, term, kMaxTerms);
}

// Gamma_upper(a, x) = e^-x x^a * this, modified Lentz continued fraction.
double upper_fraction_scaled(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw NumericFailure("incomplete gamma continued fraction did not converge", h, 0, kMaxTerms);
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0) || !(x >= 0)) throw ParameterError("gamma_p needs a > 0 and x >= 0");
  if (x == 0) return 0.0;
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) return std::exp(log_prefix) * lower_series_scaled(a, x);
  return 1.0 - std::exp(log_prefix) * upper_fraction_scaled(a, x);
}

double confluent_kernel_m1(double s, double y) {
  if (!(s > 0 && s < 1)) throw ParameterError("confluent kernel needs 0 < s < 1");
  if (!(y >= 0)) throw ParameterError("confluent kernel needs y >= 0, got " + std::to_string(y));
  if (y == 0) return 0.0;
  if (!std::isfinite(y)) return std::numeric_limits<double>::infinity();
  if (y <= 1.0) {
    // Alternating with |term| decreasing from the first; no cancellation
    // beyond a factor of about e.
    double power = 1.0;
    double sum = 0;
    for (int k = 1; k < 60; ++k) {
      power *= y / k;
      const double term = power / (k - s);
      sum += (k % 2 == 1) ? term : -term;
      if (term < std::abs(sum) * kEps * 0.25) break;
    }
    return s * sum;
  }
  const double a = 1.0 - s;
  if (y < a + 1.0) {
    // y^s gamma_lower(a, y) = e^-y y * series since s + a = 1.
    return std::exp(-y) * (y * lower_series_scaled(a, y) + 1.0) - 1.0;
  }
  // Gamma(a) y^s - y^s Gamma_upper(a, y) + e^-y - 1
  const double upper = std::exp(-y) * y * upper_fraction_scaled(a, y);
  return std::tgamma(a) * std::pow(y, s) - upper + std::expm1(-y);
}

double confluent_area_term(double s, double c, double r) {
  if (!(c >= 0) || !(r >= 0)) throw ParameterError("area term needs c >= 0 and r >= 0");
  if (c == 0) return 0.0;
  if (std::isinf(r)) return 0.0;
  if (r == 0) return std::tgamma(1.0 - s) * std::pow(c, s);
  // y = c r^{-2/s} overflows for tiny r.
  const double log_y = std::log(c) - (2.0 / s) * std::log(r);
  if (log_y > 700.0) {
    // Gamma_upper and e^-y are below double resolution; r^2 y^s = c^s.
    return std::tgamma(1.0 - s) * std::pow(c, s) - r * r;
  }
  return r * r * confluent_kernel_m1(s, std::exp(log_y));
}

double erf(double x) { return std::copysign(std::erf(std::abs(x)), x); }

}  // namespace mmw
