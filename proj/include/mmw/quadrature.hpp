#pragma once

#include <functional>

namespace mmw {

using Integrand = std::function<double(double)>;

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  // A semi-infinite integral stops once a panel contributes less than this
  // fraction of the running sum (and less than abs_tol in absolute terms).
  double tail_threshold = 1e-10;

  void validate() const;
};

/// Breakpoints for semi-infinite integration. Panel k spans
/// width * growth^k; use growth = 1 with width = half a period for
/// oscillatory integrands and growth > 1 for monotone tails.
struct PanelSchedule {
  double width = 1.0;
  double growth = 1.0;
  int max_panels = 200000;
};

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;
  int subdivisions = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
/// Throws NumericFailure when max_subdivisions is reached before the error
/// estimate drops below max(abs_tol, rel_tol * |value|).
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureConfig& cfg = {});

double integrate_finite(const Integrand& f, double a, double b, const QuadratureConfig& cfg = {});

/// Integral over [a, inf) accumulated panel by panel. Convergence is only
/// declared after panel magnitudes have started to decrease.
double integrate_semi_infinite(const Integrand& f, double a, const QuadratureConfig& cfg = {},
                               const PanelSchedule& panels = {});

}  // namespace mmw
