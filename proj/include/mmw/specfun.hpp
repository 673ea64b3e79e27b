#pragma once

// Real-argument special functions used by the interference analysis:
// generalized hypergeometric 1F1/1F2/2F2, an incomplete-gamma form of the
// confluent kernel that appears in PPP interference exponents, and erf.

namespace mmw {

/// 1F2(a; b1, b2; z). Series in double precision when it is well
/// conditioned, otherwise in MPFR at a precision sized to the largest term.
double hyp1f2(double a, double b1, double b2, double z);

/// 2F2(a1, a2; b1, b2; z). Equal numerator/denominator parameters are
/// cancelled first; for large negative z the algebraic asymptotic expansion
/// is used.
double hyp2f2(double a1, double a2, double b1, double b2, double z);

/// Kummer's 1F1(a; b; z).
double hyp1f1(double a, double b, double z);

/// 1F1(-s; 1-s; -y) - 1 for 0 < s < 1 and y >= 0, evaluated without
/// cancellation: s * sum_{k>=1} (-1)^{k+1} y^k / (k! (k - s)) for small y and
/// y^s * gamma_lower(1 - s, y) + e^{-y} - 1 otherwise.
double confluent_kernel_m1(double s, double y);

/// y -> r^2 * confluent_kernel_m1(s, c * r^{-2/s}), including the finite
/// limit Gamma(1 - s) c^s at r = 0.
double confluent_area_term(double s, double c, double r);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Error function, odd by construction.
double erf(double x);

}  // namespace mmw
