#include "mmw/interference_cf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmw/error.hpp"
#include "mmw/specfun.hpp"

namespace mmw {
namespace {

// c = G E0 sigma0 w^2 / 4: the Gaussian variance scale of one interferer's
// contribution at unit distance.
double kernel_scale(double w, double gain, const LinkBudget& budget) {
  return gain * budget.symbol_energy * budget.fading_power * w * w / 4.0;
}

void check_class(double gain, double class_density) {
  if (!(gain >= 0) || !std::isfinite(gain))
    throw ParameterError("gain must be finite and nonnegative, got " + std::to_string(gain));
  if (!(class_density >= 0) || !std::isfinite(class_density))
    throw ParameterError("class density must be finite and nonnegative, got " +
                         std::to_string(class_density));
}

QuadratureConfig tight(QuadratureConfig cfg) {
  cfg.abs_tol = std::min(cfg.abs_tol, 1e-14);
  cfg.max_subdivisions = std::max(cfg.max_subdivisions, 5000);
  return cfg;
}

// int_a^b expm1(-c r^{-2 alpha}) r dr.
double annulus_integral(double c, double alpha, double a, double b, const QuadratureConfig& cfg) {
  if (b <= a) return 0.0;
  const auto f = [c, alpha](double r) { return std::expm1(-c * std::pow(r, -2.0 * alpha)) * r; };
  return integrate_finite(f, a, b, tight(cfg));
}

// int_R^inf expm1(-c r^{-2 alpha}) r dr with r = R v^{-1/(2 alpha - 2)}, which
// maps the tail onto (0, 1] with an integrand that tends to -c R^{-2 alpha}.
double tail_integral(double c, double alpha, double radius, const QuadratureConfig& cfg) {
  if (radius <= 0) {
    return annulus_integral(c, alpha, 0.0, 1.0, cfg) + tail_integral(c, alpha, 1.0, cfg);
  }
  const double y = c * std::pow(radius, -2.0 * alpha);
  const double e = alpha / (alpha - 1.0);
  const auto f = [y, e](double v) { return std::expm1(-y * std::pow(v, e)) * std::pow(v, -e); };
  const double scale = radius * radius / (2.0 * alpha - 2.0);
  return scale * integrate_finite(f, 0.0, 1.0, tight(cfg));
}

}  // namespace

CfContext CfContext::make(const NetworkParams& params, const AntennaPattern& pattern,
                          const LinkBudget& budget, double serving_distance,
                          InterferenceGeometry geometry) {
  CfContext ctx{params, pattern, gain_distribution(pattern), budget, serving_distance, geometry};
  ctx.validate();
  return ctx;
}

void CfContext::validate() const {
  params.validate();
  pattern.validate();
  budget.validate();
  if (!(serving_distance >= 0) || !std::isfinite(serving_distance))
    throw ParameterError("serving distance must be finite and nonnegative, got " +
                         std::to_string(serving_distance));
}

double cf_noise(double w, const LinkBudget& budget) {
  return std::exp(-w * w * budget.noise_level / 4.0);
}

double log_cf_los(double w, double gain, double class_density, const CfContext& ctx,
                  CfRoute route, const QuadratureConfig& cfg) {
  check_class(gain, class_density);
  const double c = kernel_scale(w, gain, ctx.budget);
  if (c == 0.0 || class_density == 0.0) return 0.0;
  const double alpha = ctx.params.alpha_los;
  const double r0 = ctx.serving_distance;
  const double rb = ctx.params.ball_radius;
  const bool unbounded = ctx.geometry == InterferenceGeometry::all_los;
  if (!unbounded && r0 >= rb) return 0.0;

  if (route == CfRoute::quadrature) {
    const double integral =
        unbounded ? tail_integral(c, alpha, r0, cfg) : annulus_integral(c, alpha, r0, rb, cfg);
    return kTwoPi * class_density * integral;
  }
  const double s = 1.0 / alpha;
  const double outer = unbounded ? 0.0 : confluent_area_term(s, c, rb);
  return kPi * class_density * (outer - confluent_area_term(s, c, r0));
}

double log_cf_nlos(double w, double gain, double class_density, const CfContext& ctx,
                   CfRoute route, const QuadratureConfig& cfg) {
  check_class(gain, class_density);
  if (ctx.geometry == InterferenceGeometry::all_los) return 0.0;
  const double c = kernel_scale(w, gain, ctx.budget);
  if (c == 0.0 || class_density == 0.0) return 0.0;
  const double alpha = ctx.params.alpha_nlos;
  const double radius = std::max(ctx.params.ball_radius, ctx.serving_distance);
  if (route == CfRoute::quadrature)
    return kTwoPi * class_density * tail_integral(c, alpha, radius, cfg);
  return -kPi * class_density * confluent_area_term(1.0 / alpha, c, radius);
}

double cf_los_closed(double w, double gain, double class_density, const CfContext& ctx) {
  return std::exp(log_cf_los(w, gain, class_density, ctx, CfRoute::closed_form));
}

double cf_los_quadrature(double w, double gain, double class_density, const CfContext& ctx,
                         const QuadratureConfig& cfg) {
  return std::exp(log_cf_los(w, gain, class_density, ctx, CfRoute::quadrature, cfg));
}

double cf_nlos_closed(double w, double gain, double class_density, const CfContext& ctx) {
  return std::exp(log_cf_nlos(w, gain, class_density, ctx, CfRoute::closed_form));
}

double cf_nlos_quadrature(double w, double gain, double class_density, const CfContext& ctx,
                          const QuadratureConfig& cfg) {
  return std::exp(log_cf_nlos(w, gain, class_density, ctx, CfRoute::quadrature, cfg));
}

double log_cf_aggregate(double w, const CfContext& ctx, CfRoute route,
                        const QuadratureConfig& cfg) {
  double total = 0.0;
  for (const GainEntry& e : ctx.gains.entries) {
    if (e.probability == 0.0) continue;
    const double density = ctx.params.lambda_bs * e.probability;
    total += log_cf_los(w, e.gain, density, ctx, route, cfg);
    total += log_cf_nlos(w, e.gain, density, ctx, route, cfg);
  }
  return total;
}

double cf_aggregate(double w, const CfContext& ctx, CfRoute route, const QuadratureConfig& cfg) {
  return std::exp(log_cf_aggregate(w, ctx, route, cfg));
}

double log_cf_total(double w, const CfContext& ctx, CfRoute route, const QuadratureConfig& cfg) {
  return log_cf_aggregate(w, ctx, route, cfg) - w * w * ctx.budget.noise_level / 4.0;
}

double cf_total(double w, const CfContext& ctx, CfRoute route, const QuadratureConfig& cfg) {
  return std::exp(log_cf_total(w, ctx, route, cfg));
}

double max_kernel_argument(double w, const CfContext& ctx) {
  double gain = 0.0;
  for (const GainEntry& e : ctx.gains.entries)
    if (e.probability > 0) gain = std::max(gain, e.gain);
  const double c = kernel_scale(w, gain, ctx.budget);
  const double r0 = ctx.serving_distance;
  if (ctx.geometry == InterferenceGeometry::all_los || r0 < ctx.params.ball_radius)
    return c * std::pow(r0, -2.0 * ctx.params.alpha_los);
  return c * std::pow(r0, -2.0 * ctx.params.alpha_nlos);
}

}  // namespace mmw
