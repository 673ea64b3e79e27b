#pragma once

// Characteristic functions of the real part of the noise and of the
// aggregate PPP interference at the typical user, conditioned on the serving
// distance r0. Interferers of gain class G form a PPP of density lambda p_G;
// those inside the LOS ball use alpha_L, the rest alpha_N, and none lies
// closer than r0 (nearest-BS association).
//
// With c = G E0 sigma0 w^2 / 4 the log-CF of interferers on an annulus
// [a, b] with exponent alpha is
//
//   lambda p_G * 2 pi * int_a^b (exp(-c r^{-2 alpha}) - 1) r dr
//     = pi lambda p_G * [b^2 K(c b^{-2 alpha}) - a^2 K(c a^{-2 alpha})]
//
// where K(y) = 1F1(-1/alpha; 1 - 1/alpha; -y) - 1 (equivalently the 2F2
// with the pair +1/2 / 1/2 cancelled). The closed-form route evaluates K via
// the incomplete-gamma kernel; the quadrature route integrates the first
// line directly. The two are cross-checked in the tests.

#include "mmw/model.hpp"
#include "mmw/quadrature.hpp"

namespace mmw {

enum class InterferenceGeometry {
  los_ball,  // LOS within R_B (alpha_L), NLOS beyond (alpha_N)
  all_los,   // every interferer uses alpha_L (omnidirectional baseline)
};

enum class CfRoute { closed_form, quadrature };

struct CfContext {
  NetworkParams params;
  AntennaPattern pattern;
  GainDistribution gains;  // interferer gain classes, normally gain_distribution(pattern)
  LinkBudget budget;
  double serving_distance = 0;  // r0, meters
  InterferenceGeometry geometry = InterferenceGeometry::los_ball;

  static CfContext make(const NetworkParams& params, const AntennaPattern& pattern,
                        const LinkBudget& budget, double serving_distance,
                        InterferenceGeometry geometry = InterferenceGeometry::los_ball);
  void validate() const;
};

/// exp(-w^2 N0 / 4).
double cf_noise(double w, const LinkBudget& budget);

/// LOS interferers of one class on [r0, R_B]; 1 when r0 >= R_B.
double cf_los_closed(double w, double gain, double class_density, const CfContext& ctx);
double cf_los_quadrature(double w, double gain, double class_density, const CfContext& ctx,
                         const QuadratureConfig& cfg = {});

/// NLOS interferers of one class on [max(R_B, r0), inf).
double cf_nlos_closed(double w, double gain, double class_density, const CfContext& ctx);
double cf_nlos_quadrature(double w, double gain, double class_density, const CfContext& ctx,
                          const QuadratureConfig& cfg = {});

/// Logarithms of the per-class factors (nonpositive).
double log_cf_los(double w, double gain, double class_density, const CfContext& ctx,
                  CfRoute route = CfRoute::closed_form, const QuadratureConfig& cfg = {});
double log_cf_nlos(double w, double gain, double class_density, const CfContext& ctx,
                   CfRoute route = CfRoute::closed_form, const QuadratureConfig& cfg = {});

/// Sum of the log-CFs over the three gain classes (and both LOS regions).
double log_cf_aggregate(double w, const CfContext& ctx, CfRoute route = CfRoute::closed_form,
                        const QuadratureConfig& cfg = {});
double cf_aggregate(double w, const CfContext& ctx, CfRoute route = CfRoute::closed_form,
                    const QuadratureConfig& cfg = {});

/// Interference plus noise.
double log_cf_total(double w, const CfContext& ctx, CfRoute route = CfRoute::closed_form,
                    const QuadratureConfig& cfg = {});
double cf_total(double w, const CfContext& ctx, CfRoute route = CfRoute::closed_form,
                const QuadratureConfig& cfg = {});

/// Largest |argument| c r^{-2 alpha} handed to the kernel for this context
/// at frequency w (the LOS term at r0 dominates). Reported in diagnostics.
double max_kernel_argument(double w, const CfContext& ctx);

}  // namespace mmw
